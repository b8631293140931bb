//! Birational maps between plane curves and the branch correspondence they
//! induce.

use std::sync::Arc;

use crate::algebra::form::Form3;
use crate::algebra::pseries::PSeries;
use crate::algebra::Elem;
use crate::curve::{PlaneCurve, PointCluster};
use crate::divisor::{branch_multiplicity, Divisor, RationalFunction};
use crate::error::{Error, Result};
use crate::puiseux::{branches_at, Branch};
use crate::series::{solution_space, LinearSeries};

/// Evaluates a form on projective power series, modulo `t^prec`.
pub fn eval_form(phi: &Form3, p: &[PSeries; 3], prec: usize) -> PSeries {
    let deg = phi.degree() as usize;
    let powers: Vec<Vec<PSeries>> = p
        .iter()
        .map(|s| {
            let mut v = vec![PSeries::constant(Elem::one())];
            for k in 1..=deg {
                let next = v[k - 1].mul_trunc(s, prec);
                v.push(next);
            }
            v
        })
        .collect();
    let mut acc = PSeries::zero(prec);
    for (e, c) in phi.terms() {
        let m = powers[0][e[0] as usize]
            .mul_trunc(&powers[1][e[1] as usize], prec)
            .mul_trunc(&powers[2][e[2] as usize], prec);
        acc = &acc + &m.scale(c);
    }
    acc
}

/// Projective series `(X(t) : Y(t) : Z(t))` of a branch, chart coordinate 1.
pub fn projective_series(b: &Branch, prec: usize) -> [PSeries; 3] {
    let (x, y) = b.chart_series(prec);
    let chart = b.chart();
    let (ia, ib) = chart.local();
    let mut out = [PSeries::zero(prec), PSeries::zero(prec), PSeries::zero(prec)];
    out[chart.fixed()] = PSeries::constant(Elem::one());
    out[ia] = x;
    out[ib] = y;
    out
}

/// A birational map `C1 -> C2` given by three forms of one degree.
#[derive(Clone)]
pub struct BirationalMap {
    source: Arc<PlaneCurve>,
    target: Arc<PlaneCurve>,
    forms: [Form3; 3],
    inverse: Option<[Form3; 3]>,
}

impl std::fmt::Debug for BirationalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} : {} : {}]", self.forms[0], self.forms[1], self.forms[2])
    }
}

/// Degree of the map on function fields, from level-set totals of a pulled
/// back coordinate ratio.
fn fiber_degree(source: &Arc<PlaneCurve>, target: &Arc<PlaneCurve>, forms: &[Form3; 3]) -> Result<i64> {
    for (i, j) in [(0, 2), (1, 2), (0, 1), (1, 0), (2, 0), (2, 1)] {
        let den = Form3::var(j);
        if target.divides(&den) {
            continue;
        }
        let f = RationalFunction::new(target, Form3::var(i), den)?;
        if f.is_constant() {
            continue;
        }
        let pulled = match RationalFunction::new(source, forms[i].clone(), forms[j].clone()) {
            Ok(p) => p,
            Err(Error::ZeroFunction) => continue,
            Err(e) => return Err(e),
        };
        if pulled.is_constant() {
            return Ok(0);
        }
        let (dt, ds) = (f.degree()?, pulled.degree()?);
        if ds % dt != 0 {
            return Err(Error::Invariant(format!("fiber totals {ds} and {dt} are not proportional")));
        }
        return Ok(ds / dt);
    }
    Ok(0)
}

impl BirationalMap {
    pub fn new(source: &Arc<PlaneCurve>, target: &Arc<PlaneCurve>, forms: [Form3; 3]) -> Result<BirationalMap> {
        let deg = forms.iter().find(|f| !f.is_zero()).map(|f| f.degree()).ok_or(Error::AllFormsContainCurve)?;
        if forms.iter().any(|f| !f.is_zero() && f.degree() != deg) {
            return Err(Error::MixedDegrees);
        }
        let forms = forms.map(|f| if f.is_zero() { Form3::zero(deg) } else { f });
        if forms.iter().all(|f| source.divides(f)) {
            return Err(Error::AllFormsContainCurve);
        }
        if !source.divides(&target.form().compose(&forms)) {
            return Err(Error::ImageNotOnTarget);
        }
        let k = fiber_degree(source, target, &forms)?;
        if k != 1 {
            return Err(Error::NotBirational(k));
        }
        Ok(BirationalMap {
            source: source.clone(),
            target: target.clone(),
            forms,
            inverse: None,
        })
    }

    /// Attaches an explicit inverse triple after checking that it composes to
    /// the identity on the source curve.
    pub fn with_inverse(mut self, inverse: [Form3; 3]) -> Result<BirationalMap> {
        let back = BirationalMap::new(&self.target, &self.source, inverse.clone())?;
        let comp: Vec<Form3> = back.forms.iter().map(|g| g.compose(&self.forms)).collect();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let minor = &(&comp[i] * &Form3::var(j)) - &(&comp[j] * &Form3::var(i));
                if !self.source.divides(&minor) {
                    return Err(Error::Invariant("supplied inverse does not invert the map".into()));
                }
            }
        }
        self.inverse = Some(inverse);
        Ok(self)
    }

    pub fn source(&self) -> &Arc<PlaneCurve> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PlaneCurve> {
        &self.target
    }

    pub fn forms(&self) -> &[Form3; 3] {
        &self.forms
    }

    pub fn inverse_forms(&self) -> Option<&[Form3; 3]> {
        self.inverse.as_ref()
    }

    /// Image of a branch parametrization with the common `t`-power removed,
    /// as projective series modulo `t^prec`.
    fn image_series(&self, b: &Branch, prec: usize) -> Result<[PSeries; 3]> {
        let bound = self.source.degree() as usize * self.forms[0].degree() as usize + 1;
        let probe = projective_series(b, bound + 1);
        let shift = self
            .forms
            .iter()
            .filter_map(|f| eval_form(f, &probe, bound + 1).ord())
            .min()
            .ok_or(Error::IndeterminacyAtCenter)?;
        let p = projective_series(b, prec + shift);
        Ok(self.forms.clone().map(|f| eval_form(&f, &p, prec + shift).unshift(shift)))
    }

    /// The target branch corresponding to a source branch.
    pub fn transport_branch(&self, b: &Arc<Branch>) -> Result<Arc<Branch>> {
        let d2 = self.target.degree() as usize;
        let prec = d2 * 4 + 2;
        let img = self.image_series(b, prec)?;
        let center = img.clone().map(|s| s.coeff(0));
        let cluster = self.target.locate(&center)?;
        identify(&self.target, &cluster, &img, prec)
    }

    /// Source branches whose image is `b`.
    pub fn preimage_branch(&self, b: &Arc<Branch>) -> Result<Arc<Branch>> {
        let q = b.center();
        let chart = q.chart();
        let (ia, ib) = chart.local();
        let fixed = &self.forms[chart.fixed()];
        let mut pulled = None;
        for (coord, idx) in [(q.coords()[ia].clone(), ia), (q.coords()[ib].clone(), ib)] {
            let m = q.tower().min_poly_over(&coord, self.target.base());
            let s = m.degree().unwrap_or(0) as u32;
            let mut acc = Form3::zero(s * self.forms[0].degree());
            for (i, c) in m.coeffs().iter().enumerate() {
                let term = &self.forms[idx].pow(i as u32) * &fixed.pow(s - i as u32);
                acc = &acc + &term.scale(c);
            }
            if !acc.is_zero() && !self.source.divides(&acc) {
                pulled = Some(acc);
                break;
            }
        }
        let candidates: Vec<Arc<PointCluster>> = match pulled {
            Some(f) => self.source.intersection_points(&f)?.to_vec(),
            None => return Err(Error::Invariant("no form isolates the fiber".into())),
        };
        for p in candidates {
            for cand in branches_at(&self.source, &p)?.iter() {
                if Arc::ptr_eq(&self.transport_branch(cand)?, b) {
                    return Ok(cand.clone());
                }
            }
        }
        Err(Error::Invariant("target branch has no preimage".into()))
    }

    /// `f ∘ Φ` on the source curve.
    pub fn pullback_function(&self, f: &RationalFunction) -> Result<RationalFunction> {
        if !f.curve().same_as(&self.target) {
            return Err(Error::CurveMismatch);
        }
        let num = f.num().compose(&self.forms);
        let den = f.den().compose(&self.forms);
        if self.source.divides(&den) {
            return Err(Error::PullbackUndefined);
        }
        RationalFunction::new(&self.source, num, den)
    }

    pub fn pushforward_divisor(&self, d: &Divisor) -> Result<Divisor> {
        if !d.curve().same_as(&self.source) {
            return Err(Error::CurveMismatch);
        }
        let mut out = Divisor::zero(&self.target);
        for (b, n) in d.entries() {
            out.add_at(&self.transport_branch(b)?, n);
        }
        Ok(out)
    }

    pub fn pullback_divisor(&self, d: &Divisor) -> Result<Divisor> {
        if !d.curve().same_as(&self.target) {
            return Err(Error::CurveMismatch);
        }
        let mut out = Divisor::zero(&self.source);
        for (b, n) in d.entries() {
            out.add_at(&self.preimage_branch(b)?, n);
        }
        Ok(out)
    }

    /// The series on the target spanned by the transported basis cuts of a
    /// source series, rebuilt inside the complete series of one of them.
    pub fn transport_series(&self, s: &LinearSeries) -> Result<LinearSeries> {
        let cuts = s.basis_cuts()?;
        let moved: Vec<Divisor> = cuts.iter().map(|c| self.pushforward_divisor(c)).collect::<Result<_>>()?;
        let complete = crate::equiv::complete_series(&moved[0])?;
        let mut forms = Vec::new();
        for w in &moved {
            forms.push(complete.member(w)?.ok_or(Error::Invariant("transported cut left its class".into()))?);
        }
        let out = LinearSeries::from_system(&self.target, &forms)?;
        out.remove_fixed(complete.removed())
    }
}

/// Picks among the branches at `cluster` the one traced by projective series
/// `img`, comparing contact orders with osculating forms.
fn identify(curve: &Arc<PlaneCurve>, cluster: &Arc<PointCluster>, img: &[PSeries; 3], prec: usize) -> Result<Arc<Branch>> {
    let cands = branches_at(curve, cluster)?;
    if cands.len() == 1 {
        return Ok(cands[0].clone());
    }
    let d = curve.degree() as usize;
    let mut alive: Vec<Arc<Branch>> = cands.to_vec();
    for k in 1..=4u32 {
        if d * k as usize >= prec {
            break;
        }
        for c in cands.iter() {
            let mut best = None;
            for m in 1..=d * k as usize {
                match solution_space(curve, k, &[(c.clone(), m)]).into_iter().find(|f| !curve.divides(f)) {
                    Some(f) => best = Some(f),
                    None => break,
                }
            }
            let Some(psi) = best else { continue };
            let seen = eval_form(&psi, img, prec).ord();
            let mut keep = Vec::new();
            for a in alive {
                let want = branch_multiplicity(curve, &a, &psi)?;
                if seen == Some(want) {
                    keep.push(a);
                }
            }
            alive = keep;
            if alive.len() <= 1 {
                break;
            }
        }
        if alive.len() <= 1 {
            break;
        }
    }
    match alive.len() {
        1 => Ok(alive[0].clone()),
        0 => Err(Error::Invariant("image series matches no branch".into())),
        _ => Err(Error::Invariant("image series matches several branches".into())),
    }
}
