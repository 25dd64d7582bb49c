//! Exact integer polynomials: parsing, Newton polygons, temperedness.

mod bipoly;
mod intpoly;
mod newton;
mod parse;
mod tempered;

pub use bipoly::{BiPoly, Exponent};
pub(crate) use intpoly::big_to_real;
pub use intpoly::IntPoly;
pub use newton::{convex_hull, edge_polynomials, newton_polygon, polygon_contains, EdgeData, Lattice, NewtonPolygon};
pub use parse::parse_poly;
pub use tempered::{cyclotomic_split, is_tempered, CyclotomicSplit, EdgeVerdict, TemperedReport};

/// `λ(x)`: the coefficient of the top power of `y`.
pub fn leading_coeff_y(p: &BiPoly) -> IntPoly {
    p.leading_coeff_y()
}
