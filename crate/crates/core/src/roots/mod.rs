//! Polynomial roots, exact resultants and root-of-unity recognition.

mod aberth;
mod cxpoly;
mod cyclotomic;
mod resultant;

pub use aberth::{
    aberth, cauchy_bound, find_roots, is_root_of_unity, projective_roots, relative_residual, Root, RootSet,
    DEFAULT_TOL, MAX_SWEEPS,
};
pub use cxpoly::CxPoly;
pub use cyclotomic::{cyclotomic, divisors, euler_phi};
pub use resultant::{bareiss_det, resultant, resultant_y, sylvester, ExactRing, Resultant};
