//! Branch intersection multiplicities, `ord`/`val` of rational functions,
//! divisors and weighted-set arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde_json::json;

use crate::algebra::form::Form3;
use crate::algebra::pseries::PSeries;
use crate::algebra::Elem;
use crate::curve::PlaneCurve;
use crate::error::{Error, Result};
use crate::puiseux::{branch_support, Branch};

/// Precision that certifies the order of a form of degree `e` along any
/// branch of a degree `d` curve: the order never exceeds `d * e`.
pub fn bezout_precision(curve: &PlaneCurve, e: u32) -> usize {
    (curve.degree() as usize) * (e as usize) + 1
}

/// Intersection multiplicity of `phi` with the curve along `branch`.
pub fn branch_multiplicity(curve: &PlaneCurve, branch: &Branch, phi: &Form3) -> Result<usize> {
    if curve.divides(phi) {
        return Err(Error::InfiniteIntersection);
    }
    if phi.degree() == 0 {
        return Ok(0);
    }
    let prec = bezout_precision(curve, phi.degree());
    branch
        .form_order(phi, prec)
        .ok_or_else(|| Error::Invariant("intersection order above the Bezout bound".into()))
}

/// Finitely supported integer combination of branch clusters on one curve.
/// Weighted sets are the effective ones.
#[derive(Clone)]
pub struct Divisor {
    curve: Arc<PlaneCurve>,
    entries: BTreeMap<Arc<Branch>, i64>,
}

pub type WeightedSet = Divisor;

impl Divisor {
    pub fn zero(curve: &Arc<PlaneCurve>) -> Divisor {
        Divisor {
            curve: curve.clone(),
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(curve: &Arc<PlaneCurve>, it: impl IntoIterator<Item = (Arc<Branch>, i64)>) -> Divisor {
        let mut d = Divisor::zero(curve);
        for (b, n) in it {
            d.add_at(&b, n);
        }
        d
    }

    pub fn single(curve: &Arc<PlaneCurve>, b: &Arc<Branch>, n: i64) -> Divisor {
        Divisor::from_entries(curve, [(b.clone(), n)])
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    /// Adds `n` to the coefficient of `b`, dropping zero entries.
    pub fn add_at(&mut self, b: &Arc<Branch>, n: i64) {
        if n == 0 {
            return;
        }
        let slot = self.entries.entry(b.clone()).or_insert(0);
        *slot += n;
        if *slot == 0 {
            self.entries.remove(b);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Arc<Branch>, i64)> {
        self.entries.iter().map(|(b, n)| (b, *n))
    }

    pub fn support(&self) -> Vec<Arc<Branch>> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coefficient at `b` (zero off the support).
    pub fn count_at(&self, b: &Branch) -> i64 {
        self.entries.get(b).copied().unwrap_or(0)
    }

    /// The branch is counted exactly `s` times.
    pub fn is_s_fold(&self, b: &Branch, s: i64) -> bool {
        self.count_at(b) == s
    }

    pub fn is_simple(&self, b: &Branch) -> bool {
        self.is_s_fold(b, 1)
    }

    pub fn is_multiple(&self, b: &Branch) -> bool {
        self.count_at(b) > 1
    }

    /// Total multiplicity, counting each conjugate branch.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(b, n)| n * b.conj() as i64).sum()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.values().all(|&n| n > 0)
    }

    /// Positive and negative parts: `self = pos - neg`.
    pub fn decompose(&self) -> (Divisor, Divisor) {
        let mut pos = Divisor::zero(&self.curve);
        let mut neg = Divisor::zero(&self.curve);
        for (b, &n) in &self.entries {
            if n > 0 {
                pos.add_at(b, n);
            } else {
                neg.add_at(b, -n);
            }
        }
        (pos, neg)
    }

    /// `self >= other` coefficientwise.
    pub fn dominates(&self, other: &Divisor) -> bool {
        (self - other).is_effective()
    }

    /// Branchwise minimum.
    pub fn meet(&self, other: &Divisor) -> Divisor {
        let mut out = Divisor::zero(&self.curve);
        for b in self.entries.keys().chain(other.entries.keys()) {
            if out.entries.contains_key(b) {
                continue;
            }
            let n = self.count_at(b).min(other.count_at(b));
            out.add_at(b, n);
        }
        out
    }

    /// Branchwise maximum.
    pub fn join(&self, other: &Divisor) -> Divisor {
        let mut out = Divisor::zero(&self.curve);
        for b in self.entries.keys().chain(other.entries.keys()) {
            if out.entries.contains_key(b) {
                continue;
            }
            out.add_at(b, self.count_at(b).max(other.count_at(b)));
        }
        out
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::from_entries(&self.curve, self.entries.iter().map(|(b, n)| (b.clone(), n * k)))
    }

    pub fn checked_add(&self, other: &Divisor) -> Result<Divisor> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::CurveMismatch);
        }
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Divisor) -> Result<Divisor> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::CurveMismatch);
        }
        Ok(self - other)
    }

    /// Text rendering like `2*gamma[C/(0:0:1)/0] - gamma[C/(0:1:0)/0]`.
    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (b, &n)) in self.entries.iter().enumerate() {
            let label = b.label(self.curve.name());
            let mag = n.abs();
            let term = if mag == 1 { label } else { format!("{mag}*{label}") };
            if i == 0 {
                if n < 0 {
                    out.push('-');
                }
                out.push_str(&term);
            } else {
                out.push_str(if n < 0 { " - " } else { " + " });
                out.push_str(&term);
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(b, n)| json!({ "branch": b.label(self.curve.name()), "mult": n }))
            .collect();
        json!({ "curve": self.curve.name(), "entries": entries, "degree": self.degree() })
    }
}

impl PartialEq for Divisor {
    fn eq(&self, other: &Self) -> bool {
        self.curve.same_as(&other.curve) && self.entries == other.entries
    }
}

impl Eq for Divisor {}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<'a> Add<&'a Divisor> for &'a Divisor {
    type Output = Divisor;
    fn add(self, rhs: &'a Divisor) -> Divisor {
        debug_assert!(self.curve.same_as(&rhs.curve));
        let mut out = self.clone();
        for (b, &n) in &rhs.entries {
            out.add_at(b, n);
        }
        out
    }
}

impl<'a> Sub<&'a Divisor> for &'a Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &'a Divisor) -> Divisor {
        self + &(-rhs)
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        self.scale(-1)
    }
}

/// `C ⊓ phi`: every branch at an intersection point with its multiplicity.
pub fn intersect(curve: &Arc<PlaneCurve>, phi: &Form3) -> Result<Divisor> {
    let mut out = Divisor::zero(curve);
    for b in branch_support(curve, phi)? {
        let n = branch_multiplicity(curve, &b, phi)?;
        out.add_at(&b, n as i64);
    }
    Ok(out)
}

/// A point of the projective line over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Finite(Elem),
    Infinity,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(e) => write!(f, "{e}"),
            Value::Infinity => write!(f, "inf"),
        }
    }
}

/// A rational function `num/den` on a curve, with forms of equal degree.
#[derive(Clone)]
pub struct RationalFunction {
    curve: Arc<PlaneCurve>,
    num: Form3,
    den: Form3,
}

impl RationalFunction {
    pub fn new(curve: &Arc<PlaneCurve>, num: Form3, den: Form3) -> Result<RationalFunction> {
        if num.degree() != den.degree() && !num.is_zero() {
            return Err(Error::MixedDegrees);
        }
        if curve.divides(&den) {
            return Err(Error::ZeroFunction);
        }
        let num = if num.is_zero() { Form3::zero(den.degree()) } else { num };
        Ok(RationalFunction {
            curve: curve.clone(),
            num,
            den,
        })
    }

    pub fn constant(curve: &Arc<PlaneCurve>, c: Elem) -> RationalFunction {
        RationalFunction {
            curve: curve.clone(),
            num: Form3::constant(c),
            den: Form3::constant(Elem::one()),
        }
    }

    pub fn curve(&self) -> &Arc<PlaneCurve> {
        &self.curve
    }

    pub fn num(&self) -> &Form3 {
        &self.num
    }

    pub fn den(&self) -> &Form3 {
        &self.den
    }

    /// Degree of the numerator and denominator forms.
    pub fn form_degree(&self) -> u32 {
        self.den.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.curve.divides(&self.num)
    }

    /// True when the function takes a single value on the curve.
    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// The value of a constant function.
    pub fn constant_value(&self) -> Option<Elem> {
        let f = self.curve.form();
        let reduce = |g: &Form3| if g.degree() >= f.degree() { g.divrem(f).1 } else { g.clone() };
        let rn = reduce(&self.num);
        let rd = reduce(&self.den);
        if rn.is_zero() {
            return Some(Elem::zero());
        }
        let (en, cn) = rn.leading()?;
        let (ed, cd) = rd.leading()?;
        if en != ed {
            return None;
        }
        let c = &cn / &cd;
        if (&rn - &rd.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::CurveMismatch);
        }
        RationalFunction::new(&self.curve, &self.num * &other.num, &self.den * &other.den)
    }

    pub fn inverse(&self) -> Result<RationalFunction> {
        RationalFunction::new(&self.curve, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        self.mul(&other.inverse()?)
    }

    /// `self - c`.
    pub fn minus_constant(&self, c: &Elem) -> RationalFunction {
        RationalFunction {
            curve: self.curve.clone(),
            num: &self.num - &self.den.scale(c),
            den: self.den.clone(),
        }
    }

    /// Equality as functions on the curve.
    pub fn same_function(&self, other: &RationalFunction) -> bool {
        let cross = &(&self.num * &other.den) - &(&other.num * &self.den);
        self.curve.divides(&cross)
    }

    /// `(ord, val)` at a branch.
    pub fn ord_val(&self, b: &Branch) -> Result<(usize, Value)> {
        if self.is_constant() {
            return Err(Error::ConstantFunction);
        }
        let e = self.form_degree();
        let prec = bezout_precision(&self.curve, e);
        let ns = b.form_series(&self.num, prec);
        let ds = b.form_series(&self.den, prec);
        let i = ns.ord().ok_or_else(|| Error::Invariant("numerator order above bound".into()))?;
        let j = ds.ord().ok_or_else(|| Error::Invariant("denominator order above bound".into()))?;
        if i > j {
            return Ok((i - j, Value::Finite(Elem::zero())));
        }
        if i < j {
            return Ok((j - i, Value::Infinity));
        }
        let h0 = &ns.coeff(i) / &ds.coeff(j);
        let shifted = &self.num - &self.den.scale(&h0);
        if self.curve.divides(&shifted) {
            return Err(Error::ConstantFunction);
        }
        let k = b
            .form_order(&shifted, prec)
            .ok_or_else(|| Error::Invariant("order above the Bezout bound".into()))?;
        Ok((k - j, Value::Finite(h0)))
    }

    /// Signed order: negative at poles.
    pub fn signed_ord(&self, b: &Branch) -> Result<i64> {
        let (o, v) = self.ord_val(b)?;
        Ok(match v {
            Value::Infinity => -(o as i64),
            Value::Finite(c) if c.is_zero() => o as i64,
            Value::Finite(_) => 0,
        })
    }

    /// The weighted set `(f = lambda)`.
    pub fn level_set(&self, lambda: &Value) -> Result<Divisor> {
        let mut out = Divisor::zero(&self.curve);
        if self.is_constant() {
            return Ok(out);
        }
        let cut = match lambda {
            Value::Infinity => self.den.clone(),
            Value::Finite(c) => &self.num - &self.den.scale(c),
        };
        for b in branch_support(&self.curve, &cut)? {
            let (o, v) = self.ord_val(&b)?;
            if &v == lambda {
                out.add_at(&b, o as i64);
            }
        }
        Ok(out)
    }

    /// `div(f) = (f = 0) - (f = inf)`.
    pub fn divisor(&self) -> Result<Divisor> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        if self.is_constant() {
            return Ok(Divisor::zero(&self.curve));
        }
        let zeros = self.level_set(&Value::Finite(Elem::zero()))?;
        let poles = self.level_set(&Value::Infinity)?;
        Ok(&zeros - &poles)
    }

    /// `deg f` as the total of a level set, checked against a second one.
    pub fn degree(&self) -> Result<i64> {
        if self.is_constant() {
            return Ok(0);
        }
        let a = self.level_set(&Value::Infinity)?.degree();
        let b = self.level_set(&Value::Finite(Elem::zero()))?.degree();
        if a != b {
            return Err(Error::Invariant(format!("level sets of sizes {a} and {b}")));
        }
        Ok(a)
    }

    /// The form ratio as text, re-parseable by the expression grammar.
    pub fn render(&self) -> String {
        format!("({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `div` of a function given by forms.
pub fn divisor_of(f: &RationalFunction) -> Result<Divisor> {
    f.divisor()
}

/// Substituted numerator and denominator series at a branch.
pub fn function_series(f: &RationalFunction, b: &Branch, prec: usize) -> (PSeries, PSeries) {
    (b.form_series(f.num(), prec), b.form_series(f.den(), prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::{parse_expression, parse_form, Parsed};
    use crate::puiseux::branches_at;

    fn curve(s: &str) -> Arc<PlaneCurve> {
        PlaneCurve::with_name("C", parse_form(s, &Default::default()).unwrap()).unwrap()
    }

    fn form(s: &str) -> Form3 {
        parse_form(s, &Default::default()).unwrap()
    }

    fn func(c: &Arc<PlaneCurve>, s: &str) -> RationalFunction {
        match parse_expression(s, &Default::default()).unwrap() {
            Parsed::Ratio(n, d) => RationalFunction::new(c, n, d).unwrap(),
            Parsed::Form(f) => RationalFunction::new(c, f, Form3::constant(Elem::one())).unwrap(),
        }
    }

    fn q(n: i64) -> Elem {
        Elem::from_int(n)
    }

    fn cusp_branches(c: &Arc<PlaneCurve>) -> (Arc<Branch>, Arc<Branch>) {
        let g0 = branches_at(c, &c.point([q(0), q(0), q(1)]).unwrap()).unwrap()[0].clone();
        let ginf = branches_at(c, &c.point([q(0), q(1), q(0)]).unwrap()).unwrap()[0].clone();
        (g0, ginf)
    }

    #[test]
    fn multiplicities_on_the_cusp() {
        let c = curve("Y^2*Z - X^3");
        let (g0, _) = cusp_branches(&c);
        assert_eq!(branch_multiplicity(&c, &g0, &form("Y")).unwrap(), 3);
        assert_eq!(branch_multiplicity(&c, &g0, &form("X")).unwrap(), 2);
        assert_eq!(branch_multiplicity(&c, &g0, &form("Z")).unwrap(), 0);
    }

    #[test]
    fn intersections_have_bezout_totals() {
        let c = curve("Y^2*Z - X^3");
        let (g0, ginf) = cusp_branches(&c);
        assert_eq!(intersect(&c, &form("Y")).unwrap(), Divisor::single(&c, &g0, 3));
        assert_eq!(intersect(&c, &form("Z")).unwrap(), Divisor::single(&c, &ginf, 3));
        let node = curve("Y^2*Z - X^2*Z - X^3");
        let cut = intersect(&node, &form("Y - X")).unwrap();
        let mut mults: Vec<i64> = cut.entries().map(|(_, n)| n).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2]);
        assert_eq!(cut.degree(), 3);
    }

    #[test]
    fn ord_val_cases() {
        let c = curve("Y^2*Z - X^3");
        let (g0, _) = cusp_branches(&c);
        assert_eq!(func(&c, "Y/X").ord_val(&g0).unwrap(), (1, Value::Finite(q(0))));
        assert_eq!(func(&c, "X/Y").ord_val(&g0).unwrap(), (1, Value::Infinity));
        assert_eq!(func(&c, "(X+Z)/Z").ord_val(&g0).unwrap(), (2, Value::Finite(q(1))));
        assert!(matches!(
            RationalFunction::constant(&c, q(5)).ord_val(&g0),
            Err(Error::ConstantFunction)
        ));
    }

    #[test]
    fn level_sets_and_divisors() {
        let c = curve("Y^2*Z - X^3");
        let (g0, ginf) = cusp_branches(&c);
        let f = func(&c, "Y/X");
        assert_eq!(f.level_set(&Value::Finite(q(0))).unwrap(), Divisor::single(&c, &g0, 1));
        assert_eq!(f.level_set(&Value::Infinity).unwrap(), Divisor::single(&c, &ginf, 1));
        assert!(RationalFunction::constant(&c, q(5)).level_set(&Value::Finite(q(0))).unwrap().is_zero());
        let expect = &Divisor::single(&c, &g0, 2) - &Divisor::single(&c, &ginf, 2);
        assert_eq!(func(&c, "X/Z").divisor().unwrap(), expect);
        assert_eq!(
            func(&c, "X/Z").divisor().unwrap().render(),
            "2*gamma[C/(0:0:1)/0] - 2*gamma[C/(0:1:0)/0]"
        );
        assert!(RationalFunction::constant(&c, q(7)).divisor().unwrap().is_zero());
    }

    #[test]
    fn weighted_set_arithmetic() {
        let c = curve("Y^2*Z - X^3");
        let (g0, ginf) = cusp_branches(&c);
        let a = &Divisor::single(&c, &g0, 2) - &Divisor::single(&c, &ginf, 2);
        let b = &Divisor::single(&c, &g0, 1) - &Divisor::single(&c, &ginf, 1);
        assert_eq!(&a + &b, &Divisor::single(&c, &g0, 3) - &Divisor::single(&c, &ginf, 3));
        let (p, n) = a.decompose();
        assert_eq!(p, Divisor::single(&c, &g0, 2));
        assert_eq!(n, Divisor::single(&c, &ginf, 2));
        let g = Divisor::single(&c, &g0, 1);
        assert!((&g - &g).is_zero());
        assert!(g.is_simple(&g0) && !g.is_multiple(&g0));
        let other = curve("X*Z - Y^2");
        assert!(matches!(g.checked_add(&Divisor::zero(&other)), Err(Error::CurveMismatch)));
    }
}
