//! Factorization over number field towers by Trager's norm method.

use super::factor_q::factor_rational;
use std::sync::Arc;

use super::field::{Elem, FieldTower, Level};
use super::poly::{BPoly, UPoly};
use super::AlgebraError;

/// Monic irreducible factors of `f` over `tower`, with multiplicities,
/// ordered by degree and then by coefficients.
pub fn factor(f: &UPoly, tower: &FieldTower) -> Result<Vec<(UPoly, u32)>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if tower.is_rationals() {
        out = factor_rational(f);
    } else {
        for (s, mult) in f.squarefree_decomposition() {
            for g in factor_squarefree(&s, tower) {
                out.push((g, mult));
            }
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

pub fn sort_factors(fs: &mut [(UPoly, u32)]) {
    fs.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
}

/// Roots of `f` lying in `tower`, each once, in canonical order.
pub fn roots_in(f: &UPoly, tower: &FieldTower) -> Vec<Elem> {
    let mut out: Vec<Elem> = factor(f, tower)
        .unwrap_or_default()
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| -&g.coeff(0))
        .collect();
    out.sort();
    out
}

fn factor_squarefree(f: &UPoly, tower: &FieldTower) -> Vec<UPoly> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    if f.degree() == Some(1) {
        return vec![f.monic()];
    }
    if tower.is_rationals() {
        return super::factor_q::factor_squarefree(f);
    }
    let level = tower.top().unwrap().clone();
    let parent = tower.parent();
    let alpha = tower.generator().unwrap();
    let mut s: i64 = 0;
    loop {
        let shift = &alpha * &Elem::from_int(-s);
        let g = f.shift(&shift);
        let norm = norm_poly(f, &level, s);
        if norm.is_squarefree() {
            let mut out = Vec::new();
            for n_i in factor_squarefree(&norm, &parent) {
                let h = g.gcd(&n_i);
                if h.degree().unwrap_or(0) > 0 {
                    out.push(h.shift(&(&alpha * &Elem::from_int(s))).monic());
                }
            }
            debug_assert_eq!(
                out.iter().map(|h| h.degree().unwrap()).sum::<usize>(),
                f.degree().unwrap()
            );
            return out;
        }
        s = if s > 0 { -s } else { -s + 1 };
    }
}

/// `Norm_{K/K'}(f(x - s*alpha))` as a polynomial over the parent field, via
/// `Res_y(m(y), f(x - s*y))` with the coefficients of `f` written in `y`.
fn norm_poly(f: &UPoly, level: &Arc<Level>, s: i64) -> UPoly {
    let m = level.minpoly();
    // F(x, y) = sum_i f_i(y) * (x - s y)^i, as a polynomial in y over K'[x]
    let lin = BPoly::from_coeffs(vec![UPoly::x(), UPoly::constant(Elem::from_int(-s))]);
    let mut acc = BPoly::zero();
    for c in f.coeffs().iter().rev() {
        let cy = BPoly::from_coeffs(
            c.level_coeffs(level)
                .into_iter()
                .map(UPoly::constant)
                .collect(),
        );
        acc = &(&acc * &lin) + &cy;
    }
    let my = BPoly::from_coeffs(m.coeffs().iter().cloned().map(UPoly::constant).collect());
    my.resultant_y(&acc)
}
