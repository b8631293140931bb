//! Adjoints, Riemann–Roch spaces, complete series and equivalence.

use std::sync::Arc;

use crate::algebra::form::Form3;
use crate::algebra::linalg;
use crate::curve::{PlaneCurve, PointCluster};
use crate::divisor::{intersect, Divisor, RationalFunction};
use crate::error::{Error, Result};
use crate::puiseux::{branches_at, Branch};
use crate::series::{reduce, solution_space, LinearSeries};

/// Conductor exponent of a branch: `ord_t f_v(u(t), v(t)) - (e - 1)` in the
/// branch's frame, where `u = lambda t^e`.
pub fn conductor_exponent(curve: &PlaneCurve, b: &Branch) -> Result<i64> {
    let d = curve.degree() as usize;
    let prec = d * d + 1;
    let fv = b.frame_equation().derivative_y();
    let (u, v) = b.frame_series(prec);
    let s = crate::algebra::pseries::PSeries::eval_bipoly(&fv, &u, &v, prec);
    let ord = s.ord().ok_or(Error::PrecisionTooLow(prec))? as i64;
    let c = ord - (b.e() as i64 - 1);
    if c < 0 {
        return Err(Error::Invariant("negative conductor exponent".into()));
    }
    Ok(c)
}

/// The adjoint divisor: conductor exponents on the branches at singular
/// points.
pub fn adjoint_divisor(curve: &Arc<PlaneCurve>) -> Result<Divisor> {
    if let Some(v) = curve.adjoint_cache.get() {
        return Ok(Divisor::from_entries(curve, v.iter().cloned()));
    }
    let mut entries = Vec::new();
    for p in curve.singular_points() {
        for b in branches_at(curve, &p)?.iter() {
            let c = conductor_exponent(curve, b)?;
            entries.push((b.clone(), c));
        }
    }
    let _ = curve.adjoint_cache.set(entries.clone());
    Ok(Divisor::from_entries(curve, entries))
}

/// Delta invariant of one point of a cluster.
pub fn delta_at(curve: &Arc<PlaneCurve>, p: &Arc<PointCluster>) -> Result<i64> {
    let mut twice = 0;
    for b in branches_at(curve, p)?.iter() {
        twice += conductor_exponent(curve, b)? * b.conj_point() as i64;
    }
    if twice % 2 != 0 {
        return Err(Error::Invariant("odd conductor degree at a point".into()));
    }
    Ok(twice / 2)
}

/// Geometric genus `(d-1)(d-2)/2 - deg(adjoint)/2`.
pub fn genus(curve: &Arc<PlaneCurve>) -> Result<i64> {
    let d = curve.degree() as i64;
    let a = adjoint_divisor(curve)?.degree();
    let g = (d - 1) * (d - 2) / 2 - a / 2;
    if a % 2 != 0 || g < 0 {
        return Err(Error::Invariant(format!("adjoint degree {a} gives no valid genus")));
    }
    Ok(g)
}

/// A canonical divisor `(d - 3) H - A`, with `H` cut by a coordinate line.
pub fn canonical_divisor(curve: &Arc<PlaneCurve>) -> Result<Divisor> {
    let d = curve.degree() as i64;
    let mut h = None;
    for k in [2, 1, 0] {
        if let Ok(cut) = intersect(curve, &Form3::var(k)) {
            h = Some(cut);
            break;
        }
    }
    let h = h.ok_or_else(|| Error::Invariant("every coordinate line contains the curve".into()))?;
    Ok(&h.scale(d - 3) - &adjoint_divisor(curve)?)
}

/// A basis of `L(G) = { f : div f + G >= 0 }` written over one denominator.
#[derive(Clone, Debug)]
pub struct RRSpace {
    divisor: Divisor,
    psi0: Option<Form3>,
    residual: Divisor,
    forms: Vec<Form3>,
}

impl RRSpace {
    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    /// `dim L(G)`.
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// The common denominator, an adjoint through the positive part.
    pub fn denominator(&self) -> Option<&Form3> {
        self.psi0.as_ref()
    }

    /// Numerators of the basis functions.
    pub fn numerators(&self) -> &[Form3] {
        &self.forms
    }

    /// `C ⊓ psi0 - A - G1`.
    pub fn residual(&self) -> &Divisor {
        &self.residual
    }

    pub fn functions(&self) -> Result<Vec<RationalFunction>> {
        let Some(den) = &self.psi0 else { return Ok(Vec::new()) };
        self.forms
            .iter()
            .map(|n| RationalFunction::new(self.divisor.curve(), n.clone(), den.clone()))
            .collect()
    }

    /// The fixed part every numerator cuts besides the moving members.
    fn removal(&self) -> Result<Divisor> {
        let curve = self.divisor.curve();
        let (_, neg) = self.divisor.decompose();
        Ok(&(&adjoint_divisor(curve)? + &self.residual) + &neg)
    }
}

fn requirements(w: &Divisor) -> Vec<(Arc<Branch>, usize)> {
    w.entries().filter(|(_, n)| *n > 0).map(|(b, n)| (b.clone(), n as usize)).collect()
}

/// `L(G)` by the residue method: pick an adjoint `psi0` through `G1`, read
/// off its residual `R`, and collect adjoints of the same degree through
/// `R + G2`.
pub fn riemann_roch_space(g: &Divisor) -> Result<RRSpace> {
    let curve = g.curve();
    if g.degree() < 0 {
        return Ok(RRSpace {
            divisor: g.clone(),
            psi0: None,
            residual: Divisor::zero(curve),
            forms: Vec::new(),
        });
    }
    let (g1, g2) = g.decompose();
    let adj = adjoint_divisor(curve)?;
    let base = &adj + &g1;
    let d = curve.degree() as i64;
    let mut e = ((base.degree() + d - 1) / d).max(1) as u32;
    let psi0 = loop {
        let sols = solution_space(curve, e, &requirements(&base));
        if let Some(f) = sols.into_iter().find(|f| !curve.divides(f)) {
            break f.normalized();
        }
        e += 1;
    };
    let residual = &intersect(curve, &psi0)? - &base;
    let target = &(&adj + &residual) + &g2;
    let sols = solution_space(curve, e, &requirements(&target));
    let mons = Form3::monomials(e);
    let reduced: Vec<Vec<_>> = sols.iter().map(|f| reduce(curve, f).to_vector(&mons)).collect();
    let keep = linalg::independent_subset(&reduced, mons.len());
    let forms = keep.into_iter().map(|i| sols[i].normalized()).collect();
    Ok(RRSpace {
        divisor: g.clone(),
        psi0: Some(psi0),
        residual,
        forms,
    })
}

/// `l(G)`.
pub fn l_dim(g: &Divisor) -> Result<usize> {
    Ok(riemann_roch_space(g)?.dim())
}

/// Effective divisors equivalent to `G` as a series, when there are any.
pub fn series_of_class(g: &Divisor) -> Result<LinearSeries> {
    let space = riemann_roch_space(g)?;
    if space.dim() == 0 {
        return Err(Error::NotRepresentable);
    }
    let s = LinearSeries::from_system(g.curve(), space.numerators())?;
    s.remove_fixed(&space.removal()?)
}

/// The complete series `|G|` of an effective divisor.
pub fn complete_series(g: &Divisor) -> Result<LinearSeries> {
    if !g.is_effective() {
        return Err(Error::NotEffective);
    }
    series_of_class(g)
}

/// A function `f` with `div f = A - B`, if the divisors are equivalent.
pub fn equivalence_witness(a: &Divisor, b: &Divisor) -> Result<Option<RationalFunction>> {
    if !a.curve().same_as(b.curve()) {
        return Err(Error::CurveMismatch);
    }
    if a.degree() != b.degree() {
        return Ok(None);
    }
    let space = riemann_roch_space(&(b - a))?;
    Ok(space.functions()?.into_iter().next())
}

pub fn is_equivalent(a: &Divisor, b: &Divisor) -> Result<bool> {
    Ok(equivalence_witness(a, b)?.is_some())
}

/// `|A| + |B| = |A + B|`.
pub fn sum_complete(a: &Divisor, b: &Divisor) -> Result<LinearSeries> {
    complete_series(&a.checked_add(b)?)
}

/// `|A| - |B| = |A - B|`, defined when `A - B` is equivalent to an
/// effective divisor.
pub fn diff_complete(a: &Divisor, b: &Divisor) -> Result<LinearSeries> {
    if !a.is_effective() || !b.is_effective() {
        return Err(Error::NotEffective);
    }
    series_of_class(&a.checked_sub(b)?)
}

/// `l(K - G)`, the index of speciality.
pub fn speciality(g: &Divisor) -> Result<usize> {
    let k = canonical_divisor(g.curve())?;
    l_dim(&(&k - g))
}
