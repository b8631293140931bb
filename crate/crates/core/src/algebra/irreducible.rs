//! Absolute irreducibility of plane forms by Gao's partial differential
//! equation criterion: for a squarefree `f(x, y)` with `gcd(f, f_x) = 1`, the
//! solutions `(g, h)` of
//!
//! ```text
//! f*g_y - g*f_y = f*h_x - h*f_x,   deg g <= (m-1, n),  deg h <= (m, n-1)
//! ```
//!
//! form a space whose dimension is the number of absolutely irreducible
//! factors of `f`.

use std::collections::BTreeMap;

use super::bipoly::BiPoly;
use super::field::Elem;
use super::form::{Chart, Form3};
use super::linalg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Number of absolutely irreducible factors (at least 2).
    Reducible(usize),
    /// The form has a repeated factor (reported, up to a scalar).
    NotSquarefree(Form3),
}

/// Small integers `0, 1, -1, 2, -2, ...`.
pub(crate) fn small_ints() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 })
}

/// Moves `F` into a position where `(1:0:0)` is off the curve, by
/// `G(X, Y, Z) = F(X, aX + Y, bX + Z)`. Returns `(G, a, b)`.
fn general_position(f: &Form3) -> (Form3, i64, i64) {
    let ints: Vec<i64> = small_ints().take(64).collect();
    for k in 0..ints.len() {
        for i in 0..=k {
            let (a, b) = (ints[i], ints[k - i]);
            let p = [Elem::one(), Elem::from_int(a), Elem::from_int(b)];
            if !f.eval(&p).is_zero() {
                return (f.linear_substitute(&shear_matrix(a, b)), a, b);
            }
        }
    }
    unreachable!("a nonzero form vanishes on a full grid")
}

fn shear_matrix(a: i64, b: i64) -> [[Elem; 3]; 3] {
    let z = Elem::zero;
    let o = Elem::one;
    [
        [o(), z(), z()],
        [Elem::from_int(a), o(), z()],
        [Elem::from_int(b), z(), o()],
    ]
}

pub fn absolute_irreducibility(f: &Form3) -> Irreducibility {
    let d = f.degree();
    assert!(d >= 1 && !f.is_zero(), "irreducibility of a constant");
    if d == 1 {
        return Irreducibility::Irreducible;
    }
    let (g_form, a, b) = general_position(f);
    let g = g_form.dehomogenize(Chart::Z);
    // squarefreeness: x is the main variable, g is monic in x up to a scalar
    let gx = g.derivative_x();
    let main_x = g.swap().to_bpoly();
    let main_gx = gx.swap().to_bpoly();
    if main_x.resultant_y(&main_gx).is_zero() {
        let common = BiPoly::from_bpoly(&main_x.gcd(&main_gx)).swap();
        let deg = common.total_degree().unwrap_or(0);
        let back = Form3::homogenize(&common, Chart::Z, deg).linear_substitute(&shear_matrix(-a, -b));
        return Irreducibility::NotSquarefree(back.normalized());
    }
    let count = gao_dimension(&g);
    if count == 1 {
        Irreducibility::Irreducible
    } else {
        Irreducibility::Reducible(count)
    }
}

pub fn is_absolutely_irreducible(f: &Form3) -> Result<bool, Form3> {
    match absolute_irreducibility(f) {
        Irreducibility::Irreducible => Ok(true),
        Irreducibility::Reducible(_) => Ok(false),
        Irreducibility::NotSquarefree(r) => Err(r),
    }
}

fn gao_dimension(f: &BiPoly) -> usize {
    let m = f.deg_x().unwrap_or(0);
    let n = f.deg_y().unwrap_or(0);
    let fx = f.derivative_x();
    let fy = f.derivative_y();
    // unknown columns: g monomials then h monomials
    let mut contributions: Vec<BiPoly> = Vec::new();
    if m >= 1 {
        for i in 0..m {
            for j in 0..=n {
                let g = BiPoly::monomial(Elem::one(), i, j);
                contributions.push(&(f * &g.derivative_y()) - &(&g * &fy));
            }
        }
    }
    if n >= 1 {
        for i in 0..=m {
            for j in 0..n {
                let h = BiPoly::monomial(Elem::one(), i, j);
                contributions.push(&(&h * &fx) - &(f * &h.derivative_x()));
            }
        }
    }
    let ncols = contributions.len();
    let mut rows: BTreeMap<(u32, u32), Vec<Elem>> = BTreeMap::new();
    for (col, p) in contributions.iter().enumerate() {
        for (&k, c) in p.terms() {
            rows.entry(k).or_insert_with(|| vec![Elem::zero(); ncols])[col] = c.clone();
        }
    }
    let mut mat: Vec<Vec<Elem>> = rows.into_values().collect();
    let rank = linalg::rref(&mut mat, ncols).len();
    ncols - rank
}
