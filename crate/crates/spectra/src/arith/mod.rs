//! Exact rationals, dyadic intervals, polynomials and root isolation.

pub mod dyadic;
pub mod interval;
pub mod poly;
pub mod rat;
pub mod real;
pub mod roots;

pub use dyadic::Dyadic;
pub use interval::Interval;
pub use poly::RatPoly;
pub use rat::{format_rat, int, parse_rat, rat, Rat};
pub use real::Real;
pub use roots::{isolate_real_roots, real_roots, refine_root};
