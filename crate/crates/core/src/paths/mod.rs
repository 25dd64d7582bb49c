//! Sections of the curve over `|x| = 1`, the set `S`, its lift to the
//! parameter line and winding angles.

mod arcs;
mod pullback;
mod trace;

pub use arcs::{crossing_scan, extract_S, Arc, CROSSING_TOL, ENDPOINT_MATCH, GRAZE_TOL, SINGULAR_MATCH};
pub use pullback::{pullback, winding, winding_sum, PathSegment, WindingSum, LIFT_TOL, MAX_DENSIFY, SINGULAR_RADIUS};
pub use trace::{critical_args, section_roots, trace_sections, BranchSheet, AMBIGUITY_RATIO, DEFAULT_GRID, MAX_DEPTH};
