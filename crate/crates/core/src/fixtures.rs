//! A small corpus of named plane curves covering the common singularity
//! types in degrees 2 to 5.

use std::sync::Arc;

use crate::algebra::parse::parse_form;
use crate::curve::PlaneCurve;

/// `(name, form)` pairs.
pub const CURVES: &[(&str, &str)] = &[
    ("conic", "X*Z - Y^2"),
    ("circle", "X^2 + Y^2 - Z^2"),
    ("cusp", "Y^2*Z - X^3"),
    ("node", "Y^2*Z - X^2*Z - X^3"),
    ("smooth_cubic", "Y^2*Z - X^3 - X*Z^2"),
    ("ell37", "Y^2*Z + Y*Z^2 - X^3 + X*Z^2"),
    ("tacnode", "Y^2*Z^2 - X^4 - Y^4"),
    ("node_quartic", "X^4 + Y^4 - X^2*Z^2 + Y^2*Z^2"),
    ("e6_quartic", "Y^3*Z - X^4"),
    ("conj_nodes", "(X^2 - 2*Z^2)^2 + Y^2*(X - 3*Z)*Z"),
    ("a4_quintic", "Y^2*Z^3 - X^5"),
    ("quad_point_quintic", "X^5 + Y^5 - X^2*Y^2*Z"),
];

/// Builds the named fixture curve.
pub fn curve(name: &str) -> Option<Arc<PlaneCurve>> {
    let (_, text) = CURVES.iter().find(|(n, _)| *n == name)?;
    let form = parse_form(text, &Default::default()).ok()?;
    PlaneCurve::with_name(name, form).ok()
}

/// All fixture curves in corpus order.
pub fn all() -> Vec<Arc<PlaneCurve>> {
    CURVES.iter().map(|(n, _)| curve(n).expect("fixture curve is valid")).collect()
}
