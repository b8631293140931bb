//! Linear series `g^r_n` cut on a curve by linear systems of forms.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::form::{Exps, Form3};
use crate::algebra::linalg;
use crate::algebra::pseries::PSeries;
use crate::algebra::Elem;
use crate::curve::PlaneCurve;
use crate::divisor::{intersect, Divisor};
use crate::error::{Error, Result};
use crate::puiseux::Branch;

const VALIDATION_SEED: u64 = 0x0b5e_55ed;

/// Series of every monomial of degree `e` along a branch, modulo `t^prec`.
struct MonomialTable {
    index: BTreeMap<Exps, usize>,
    series: Vec<PSeries>,
}

impl MonomialTable {
    fn new(b: &Branch, e: u32, prec: usize) -> MonomialTable {
        let (x, y) = b.chart_series(prec);
        let one = PSeries::constant(Elem::one());
        let mut xp = vec![one.clone()];
        let mut yp = vec![one];
        for k in 1..=e as usize {
            let nx = xp[k - 1].mul_trunc(&x, prec);
            let ny = yp[k - 1].mul_trunc(&y, prec);
            xp.push(nx);
            yp.push(ny);
        }
        let chart = b.chart();
        let (ia, ib) = chart.local();
        let mut index = BTreeMap::new();
        let mut series = Vec::new();
        for m in Form3::monomials(e) {
            let s = xp[m[ia] as usize].mul_trunc(&yp[m[ib] as usize], prec);
            index.insert(m, series.len());
            series.push(s);
        }
        MonomialTable { index, series }
    }

    fn eval(&self, phi: &Form3, prec: usize) -> PSeries {
        let mut acc = PSeries::zero(prec);
        for (m, c) in phi.terms() {
            acc = &acc + &self.series[self.index[m]].scale(c);
        }
        acc
    }
}

/// Linear equations over the curve's field on the coefficients `c` of
/// `sum c_i forms_i` expressing `I_b(C, sum c_i forms_i) >= k` for every
/// requirement `(b, k)`. All forms share one degree.
pub(crate) fn condition_rows(curve: &PlaneCurve, forms: &[Form3], reqs: &[(Arc<Branch>, usize)]) -> Vec<Vec<Elem>> {
    let mut rows = Vec::new();
    let Some(first) = forms.first() else { return rows };
    let e = first.degree();
    let base = curve.base();
    for (b, k) in reqs {
        if *k == 0 {
            continue;
        }
        let table = MonomialTable::new(b, e, *k);
        let series: Vec<PSeries> = forms.iter().map(|f| table.eval(f, *k)).collect();
        let tower = b.tower();
        let width = tower.degree_over(base);
        for j in 0..*k {
            let coords: Vec<Vec<Elem>> = series
                .iter()
                .map(|s| tower.coords_over(&s.coeff(j), base))
                .collect();
            for l in 0..width {
                let row: Vec<Elem> = coords.iter().map(|c| c[l].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// `sum c_i forms_i`.
pub(crate) fn combine(forms: &[Form3], c: &[Elem]) -> Form3 {
    let mut acc = Form3::zero(forms[0].degree());
    for (f, x) in forms.iter().zip(c) {
        if !x.is_zero() {
            acc = &acc + &f.scale(x);
        }
    }
    acc
}

/// Normal form of `phi` modulo the curve equation: linear in `phi`, zero
/// exactly on multiples of `F`.
pub(crate) fn reduce(curve: &PlaneCurve, phi: &Form3) -> Form3 {
    if phi.degree() >= curve.degree() {
        phi.divrem(curve.form()).1
    } else {
        phi.clone()
    }
}

fn vectors(forms: &[Form3], e: u32) -> Vec<Vec<Elem>> {
    let mons = Form3::monomials(e);
    forms.iter().map(|f| f.to_vector(&mons)).collect()
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Elem> {
    (0..n).map(|_| Elem::from_int(rng.gen_range(1..=97))).collect()
}

/// A linear series: the weighted sets `C ⊓ phi - removed` for `phi` in the
/// span of a system of forms of one degree.
#[derive(Clone)]
pub struct LinearSeries {
    curve: Arc<PlaneCurve>,
    degree: u32,
    system: Vec<Form3>,
    basis: Vec<Form3>,
    h: i64,
    removed: Divisor,
    fixed: OnceLock<Divisor>,
}

impl LinearSeries {
    /// The series cut by the span of `forms`.
    pub fn from_system(curve: &Arc<PlaneCurve>, forms: &[Form3]) -> Result<LinearSeries> {
        let forms: Vec<Form3> = forms.iter().filter(|f| !f.is_zero()).cloned().collect();
        let Some(first) = forms.first() else {
            return Err(Error::AllFormsContainCurve);
        };
        let e = first.degree();
        if forms.iter().any(|f| f.degree() != e) {
            return Err(Error::MixedDegrees);
        }
        if e == 0 {
            return Err(Error::DegreeTooLow);
        }
        let cols = Form3::monomials(e).len();
        let keep = linalg::independent_subset(&vectors(&forms, e), cols);
        let system: Vec<Form3> = keep.iter().map(|&i| forms[i].clone()).collect();
        let reduced: Vec<Form3> = system.iter().map(|f| reduce(curve, f)).collect();
        let qkeep = linalg::independent_subset(&vectors(&reduced, e), cols);
        if qkeep.is_empty() {
            return Err(Error::AllFormsContainCurve);
        }
        let basis: Vec<Form3> = qkeep.iter().map(|&i| system[i].clone()).collect();
        let h = system.len() as i64 - basis.len() as i64 - 1;
        Ok(LinearSeries {
            curve: curve.clone(),
            degree: e,
            system,
            basis,
            h,
            removed: Divisor::zero(curve),
            fixed: OnceLock::new(),
        })
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    /// Degree of the forms.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Independent forms spanning the input system.
    pub fn system(&self) -> &[Form3] {
        &self.system
    }

    /// Forms independent modulo the curve, spanning the series.
    pub fn basis(&self) -> &[Form3] {
        &self.basis
    }

    /// Projective dimension of the system.
    pub fn system_dim(&self) -> i64 {
        self.system.len() as i64 - 1
    }

    /// Projective dimension of the subsystem of forms containing the curve
    /// (`-1` when there are none).
    pub fn h(&self) -> i64 {
        self.h
    }

    /// Dimension `r` of the series.
    pub fn dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    /// Order `n`: total multiplicity of every member.
    pub fn order(&self) -> i64 {
        (self.curve.degree() * self.degree) as i64 - self.removed.degree()
    }

    /// The fixed contribution removed so far.
    pub fn removed(&self) -> &Divisor {
        &self.removed
    }

    /// Branchwise minimum of `C ⊓ phi` over the system, before removal.
    pub fn system_fixed(&self) -> Result<Divisor> {
        if let Some(f) = self.fixed.get() {
            return Ok(f.clone());
        }
        let cuts: Vec<Divisor> = self
            .basis
            .iter()
            .map(|f| intersect(&self.curve, f))
            .collect::<Result<_>>()?;
        let mut fixed = cuts[0].clone();
        for c in &cuts[1..] {
            fixed = fixed.meet(c);
        }
        // a generic member attains the minimum
        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        let mut attained = false;
        for _ in 0..4 {
            let g = combine(&self.basis, &random_coeffs(&mut rng, self.basis.len()));
            let cut = intersect(&self.curve, &g)?;
            if !cut.dominates(&fixed) {
                return Err(Error::Invariant("member below the basis minimum".into()));
            }
            if fixed.support().iter().all(|b| cut.count_at(b) == fixed.count_at(b)) {
                attained = true;
                break;
            }
        }
        if !attained {
            return Err(Error::Invariant("no random member attains the fixed part".into()));
        }
        let _ = self.fixed.set(fixed.clone());
        Ok(fixed)
    }

    /// Fixed contribution still present in every member.
    pub fn fixed_contribution(&self) -> Result<Divisor> {
        Ok(&self.system_fixed()? - &self.removed)
    }

    /// True when `phi` lies in the span of the system modulo the curve.
    pub fn contains_form(&self, phi: &Form3) -> bool {
        if phi.degree() != self.degree && !phi.is_zero() {
            return false;
        }
        let e = self.degree;
        let cols = Form3::monomials(e).len();
        let mut vs = vectors(&self.basis.iter().map(|f| reduce(&self.curve, f)).collect::<Vec<_>>(), e);
        let before = linalg::rank(&vs, cols);
        vs.push(reduce(&self.curve, phi).to_vector(&Form3::monomials(e)));
        linalg::rank(&vs, cols) == before
    }

    /// The member weighted set cut by `phi`.
    pub fn member_set(&self, phi: &Form3) -> Result<Divisor> {
        if !self.contains_form(phi) {
            return Err(Error::NotInSystem);
        }
        Ok(&intersect(&self.curve, phi)? - &self.removed)
    }

    /// Member weighted sets of the basis forms.
    pub fn basis_cuts(&self) -> Result<Vec<Divisor>> {
        self.basis.iter().map(|f| self.member_set(f)).collect()
    }

    /// A form of the system cutting exactly `w` (plus the removed part), if
    /// `w` belongs to the series.
    pub fn member(&self, w: &Divisor) -> Result<Option<Form3>> {
        if !w.is_effective() {
            return Err(Error::NotEffective);
        }
        if w.degree() != self.order() {
            return Err(Error::WrongOrder {
                expected: self.order(),
                got: w.degree(),
            });
        }
        let target = w + &self.removed;
        let reqs: Vec<(Arc<Branch>, usize)> = target.entries().map(|(b, n)| (b.clone(), n as usize)).collect();
        let mut rows = condition_rows(&self.curve, &self.basis, &reqs);
        let kernel = linalg::nullspace(&mut rows, self.basis.len());
        match kernel.len() {
            0 => Ok(None),
            1 => {
                let phi = combine(&self.basis, &kernel[0]).normalized();
                debug_assert_eq!(intersect(&self.curve, &phi)?, target);
                Ok(Some(phi))
            }
            k => Err(Error::Invariant(format!("{k} independent witnesses for one member"))),
        }
    }

    /// Adds `w0` to every member: multiplies the system by a form `G` with
    /// `C ⊓ G >= w0` and removes the surplus `C ⊓ G - w0`.
    pub fn add_fixed(&self, w0: &Divisor) -> Result<LinearSeries> {
        if !w0.is_effective() {
            return Err(Error::NotEffective);
        }
        if w0.is_zero() {
            return Ok(self.clone());
        }
        let g = form_through(&self.curve, w0)?;
        let surplus = &intersect(&self.curve, &g)? - w0;
        let system: Vec<Form3> = self.system.iter().map(|f| f * &g).collect();
        let mut out = LinearSeries::from_system(&self.curve, &system)?;
        out.removed = &self.removed + &surplus;
        Ok(out)
    }

    /// Removes part of the fixed contribution.
    pub fn remove_fixed(&self, w0: &Divisor) -> Result<LinearSeries> {
        if !w0.is_effective() {
            return Err(Error::NotEffective);
        }
        if !self.fixed_contribution()?.dominates(w0) {
            return Err(Error::NotInFixedPart);
        }
        let mut out = self.clone();
        out.removed = &self.removed + w0;
        Ok(out)
    }

    /// Multiplicity of a member form at a branch beyond the system's fixed
    /// contribution there.
    pub fn mobile_multiplicity(&self, b: &Arc<Branch>, phi: &Form3) -> Result<i64> {
        if !self.contains_form(phi) {
            return Err(Error::NotInSystem);
        }
        let total = crate::divisor::branch_multiplicity(&self.curve, b, phi)? as i64;
        Ok(total - self.system_fixed()?.count_at(b))
    }

    /// A member form with seeded random coefficients.
    pub fn random_form(&self, rng: &mut ChaCha8Rng) -> Form3 {
        combine(&self.basis, &random_coeffs(rng, self.basis.len()))
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subordinate(&self, other: &LinearSeries) -> Result<bool> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::CurveMismatch);
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        let mut probes = self.basis.clone();
        probes.push(self.random_form(&mut rng));
        for phi in &probes {
            let w = self.member_set(phi)?;
            if other.member(&w)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Extensional equality: mutual subordination with equal orders.
    pub fn same_series(&self, other: &LinearSeries) -> Result<bool> {
        Ok(self.order() == other.order() && self.is_subordinate(other)? && other.is_subordinate(self)?)
    }

    /// The amalgam of two series of equal order sharing the member `g`.
    pub fn amalgamate(s1: &LinearSeries, s2: &LinearSeries, g: &Divisor) -> Result<LinearSeries> {
        if !s1.curve.same_as(&s2.curve) {
            return Err(Error::CurveMismatch);
        }
        if s1.order() != s2.order() {
            return Err(Error::OrderMismatch(s1.order(), s2.order()));
        }
        let phi0 = s1.member(g)?.ok_or(Error::NotCommonMember)?;
        let psi0 = s2.member(g)?.ok_or(Error::NotCommonMember)?;
        let mut forms: Vec<Form3> = s1.system.iter().map(|f| &psi0 * f).collect();
        forms.extend(s2.system.iter().map(|f| &phi0 * f));
        let joined = LinearSeries::from_system(&s1.curve, &forms)?;
        let removal = &(g + &s1.removed) + &s2.removed;
        joined.remove_fixed(&removal)
    }

    pub fn describe(&self) -> String {
        format!("g^{}_{}", self.dim(), self.order())
    }
}

/// A form of least degree, not containing the curve, whose cut dominates the
/// effective divisor `w`.
pub fn form_through(curve: &Arc<PlaneCurve>, w: &Divisor) -> Result<Form3> {
    let d = curve.degree() as i64;
    let mut e = ((w.degree() + d - 1) / d).max(1) as u32;
    let reqs: Vec<(Arc<Branch>, usize)> = w.entries().map(|(b, n)| (b.clone(), n as usize)).collect();
    loop {
        if let Some(f) = solve_through(curve, e, &reqs) {
            return Ok(f);
        }
        e += 1;
        if e > 64 {
            return Err(Error::Invariant("no form through the divisor".into()));
        }
    }
}

/// First basis vector of the solution space of degree-`e` forms with the
/// given branch conditions that does not contain the curve.
pub(crate) fn solve_through(curve: &PlaneCurve, e: u32, reqs: &[(Arc<Branch>, usize)]) -> Option<Form3> {
    let sols = solution_space(curve, e, reqs);
    sols.into_iter().find(|f| !curve.divides(f))
}

/// Basis of the degree-`e` forms satisfying the branch conditions.
pub(crate) fn solution_space(curve: &PlaneCurve, e: u32, reqs: &[(Arc<Branch>, usize)]) -> Vec<Form3> {
    let mons = Form3::monomials(e);
    let forms: Vec<Form3> = mons.iter().map(|&m| Form3::monomial(Elem::one(), m)).collect();
    let mut rows = condition_rows(curve, &forms, reqs);
    linalg::nullspace(&mut rows, forms.len())
        .into_iter()
        .map(|v| Form3::from_vector(e, &mons, &v))
        .collect()
}
