//! Rational Newton–Puiseux expansions of plane curve branches.
//!
//! Each branch at a point `p` is recorded in a local frame `(u, v)` (a linear
//! change of the recentered chart coordinates chosen so that no tangent of
//! the curve at `p` is the line `u = 0`) as
//!
//! ```text
//! u = lambda * t^e,    v = A(t) + B * t^b * w(t)
//! ```
//!
//! where `A` is a polynomial, and `w` is the unique power series root with
//! `w(0) = 0` of a polynomial `g(t, w)` that is regular in `w`. The tail `w`
//! is computed lazily by Newton iteration, so precision can be raised at any
//! time without recomputing the singular part. Conjugate branches are never
//! split: one expansion with coefficients in an extension field stands for a
//! whole Galois orbit.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::algebra::bipoly::BiPoly;
use crate::algebra::factor::factor;
use crate::algebra::form::{Chart, Form3};
use crate::algebra::irreducible::small_ints;
use crate::algebra::poly::UPoly;
use crate::algebra::pseries::{PSeries, EXACT};
use crate::algebra::{Elem, FieldTower};
use crate::curve::{PlaneCurve, PointCluster};
use crate::error::{Error, Result};

/// Linear change between the recentered chart coordinates `(x, y)` and the
/// expansion frame `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Frame {
    /// `u = x`, `v = y`.
    Identity,
    /// `u = y`, `v = x`.
    Swap,
    /// `u = x + c*y`, `v = y`.
    Shear(Elem),
}

impl Frame {
    fn choose(f: &BiPoly) -> Frame {
        let m = f.order().expect("local equation is nonzero");
        let cone = f.homogeneous_part(m);
        if !cone.coeff(0, m).is_zero() {
            return Frame::Identity;
        }
        if !cone.coeff(m, 0).is_zero() {
            return Frame::Swap;
        }
        for c in small_ints().skip(1) {
            let c = Elem::from_int(c);
            // tangent cone in the new frame at (u, v) = (0, 1) is cone(-c, 1)
            if !cone.eval(&-&c, &Elem::one()).is_zero() {
                return Frame::Shear(c);
            }
        }
        unreachable!()
    }

    /// The local equation rewritten in frame coordinates.
    fn apply(&self, f: &BiPoly) -> BiPoly {
        match self {
            Frame::Identity => f.clone(),
            Frame::Swap => f.swap(),
            Frame::Shear(c) => {
                let x = &BiPoly::x() - &BiPoly::y().scale(c);
                f.compose(&x, &BiPoly::y())
            }
        }
    }

    /// Chart offsets `(x, y)` from frame series `(u, v)`.
    fn to_chart(&self, u: &PSeries, v: &PSeries) -> (PSeries, PSeries) {
        match self {
            Frame::Identity => (u.clone(), v.clone()),
            Frame::Swap => (v.clone(), u.clone()),
            Frame::Shear(c) => (u - &v.scale(c), v.clone()),
        }
    }
}

#[derive(Clone, Debug)]
enum Tail {
    /// `w = 0` exactly.
    Zero,
    /// `w` is the root with `w(0) = 0` of `g`, where `g(0,0) = 0` and
    /// `g_w(0,0) != 0`.
    Regular { g: BiPoly, gw: BiPoly },
}

/// A Galois orbit of branches of a plane curve, with a lazily refined
/// parametrization.
pub struct Branch {
    center: Arc<PointCluster>,
    index: usize,
    tower: FieldTower,
    frame: Frame,
    frame_eq: Arc<BiPoly>,
    e: usize,
    lambda: Elem,
    a: Vec<Elem>,
    b_coef: Elem,
    b_exp: usize,
    tail: Tail,
    conj: usize,
    conj_point: usize,
    w_cache: Mutex<PSeries>,
}

impl Branch {
    pub fn center(&self) -> &Arc<PointCluster> {
        &self.center
    }

    /// Position of the branch in the canonical order at its center.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn chart(&self) -> Chart {
        self.center.chart()
    }

    /// Field containing the coefficients of the representative expansion.
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Ramification index: the multiplicity of the branch.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Number of conjugate branches represented, over the curve's field.
    pub fn conj(&self) -> usize {
        self.conj
    }

    /// Number of conjugate branches at each conjugate of the center.
    pub fn conj_point(&self) -> usize {
        self.conj_point
    }

    /// The `u` coefficient: `u = lambda * t^e`.
    pub fn lambda(&self) -> &Elem {
        &self.lambda
    }

    /// True when the parametrization is a pair of polynomials.
    pub fn is_exact(&self) -> bool {
        matches!(self.tail, Tail::Zero)
    }

    /// The local equation at the center in frame coordinates.
    pub fn frame_equation(&self) -> &BiPoly {
        &self.frame_eq
    }

    /// Identity used for ordering and display: `(point, index)`.
    pub fn id(&self) -> (&crate::curve::PointKey, usize) {
        (self.center.key(), self.index)
    }

    pub fn label(&self, curve: &str) -> String {
        format!("gamma[{}/{}/{}]", curve, self.center.label(), self.index)
    }

    fn tail_series(&self, prec: usize) -> PSeries {
        match &self.tail {
            Tail::Zero => PSeries::zero(EXACT),
            Tail::Regular { g, gw } => {
                let mut cache = self.w_cache.lock().unwrap();
                if cache.prec() < prec {
                    *cache = newton(g, gw, &cache, prec);
                }
                cache.truncate(prec)
            }
        }
    }

    /// Frame series `(u(t), v(t))` modulo `t^prec`.
    pub fn frame_series(&self, prec: usize) -> (PSeries, PSeries) {
        let u = PSeries::monomial(self.lambda.clone(), self.e);
        let a = PSeries::exact(self.a.clone());
        let v = if self.is_exact() {
            a
        } else if self.b_exp >= prec {
            a.truncate(prec)
        } else {
            let w = self.tail_series(prec - self.b_exp);
            &a + &w.scale(&self.b_coef).shift(self.b_exp)
        };
        (u, v)
    }

    /// Recentered chart series `(x(t) - x0, y(t) - y0)` modulo `t^prec`.
    pub fn local_series(&self, prec: usize) -> (PSeries, PSeries) {
        let (u, v) = self.frame_series(prec);
        self.frame.to_chart(&u, &v)
    }

    /// Chart series `(x(t), y(t))` modulo `t^prec`, center included.
    pub fn chart_series(&self, prec: usize) -> (PSeries, PSeries) {
        let (x, y) = self.local_series(prec);
        let (x0, y0) = self.center.local();
        (&x + &PSeries::constant(x0), &y + &PSeries::constant(y0))
    }

    /// A form evaluated along the branch in the center's chart, modulo
    /// `t^prec`.
    pub fn form_series(&self, phi: &Form3, prec: usize) -> PSeries {
        let (x, y) = self.chart_series(prec);
        PSeries::eval_bipoly(&phi.dehomogenize(self.chart()), &x, &y, prec)
    }

    /// `ord_t` of a form along the branch, if visible below `prec`.
    pub fn form_order(&self, phi: &Form3, prec: usize) -> Option<usize> {
        self.form_series(phi, prec).ord()
    }

    /// Residual of the recentered defining polynomial along the branch.
    pub fn residual(&self, curve: &PlaneCurve, prec: usize) -> PSeries {
        let (x, y) = self.local_series(prec);
        PSeries::eval_bipoly(&curve.local_equation(&self.center), &x, &y, prec)
    }

    /// Gcd of the exponents occurring in the recentered chart series.
    pub fn support_gcd(&self, prec: usize) -> usize {
        let (x, y) = self.local_series(prec);
        let mut g = 0usize;
        for s in [&x, &y] {
            for (k, c) in s.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    g = g.gcd(&k);
                }
            }
        }
        g
    }

    /// Text rendering `gamma[C/P/i]: x=..., y=... (+O(t^N))`.
    pub fn describe(&self, curve: &str, prec: usize) -> String {
        let (x, y) = self.chart_series(prec);
        let (a, b) = self.chart().local();
        let names = ["X", "Y", "Z"];
        let tail = if x.is_exact() && y.is_exact() {
            String::new()
        } else {
            format!(" (+O(t^{prec}))")
        };
        format!(
            "{}: {}={}, {}={}{}",
            self.label(curve),
            names[a].to_lowercase(),
            x.display("t", prec),
            names[b].to_lowercase(),
            y.display("t", prec),
            tail
        )
    }

    fn sort_key(&self) -> (usize, usize, &Elem, &[Elem], usize, &Elem) {
        (self.e, self.conj_point, &self.lambda, &self.a, self.b_exp, &self.b_coef)
    }
}

impl PartialEq for Branch {
    fn eq(&self, other: &Self) -> bool {
        self.id() == other.id()
    }
}

impl Eq for Branch {}

impl PartialOrd for Branch {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Branch {
    fn cmp(&self, other: &Self) -> Ordering {
        self.id().cmp(&other.id())
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma[{}/{}]", self.center.label(), self.index)
    }
}

/// Newton iteration for the tail, extending `w` to precision `target`.
fn newton(g: &BiPoly, gw: &BiPoly, w: &PSeries, target: usize) -> PSeries {
    let t = PSeries::monomial(Elem::one(), 1);
    let mut w = w.clone();
    while w.prec() < target {
        let p = (w.prec() * 2).min(target);
        let cur = PSeries::exact(w.coeffs().to_vec());
        let num = PSeries::eval_bipoly(g, &t, &cur, p);
        let den = PSeries::eval_bipoly(gw, &t, &cur, p);
        let step = num.mul_trunc(&den.inverse(p), p);
        w = PSeries::new((&cur - &step).coeffs().to_vec(), p);
    }
    w
}

/// Expansion state while descending the Newton polygon tree.
#[derive(Clone)]
struct State {
    g: BiPoly,
    tower: FieldTower,
    lambda: Elem,
    e: usize,
    a: Vec<Elem>,
    b_coef: Elem,
    b_exp: usize,
}

struct Raw {
    state: State,
    tail: Tail,
}

/// Lowest `j` with a term `w^j` free of `s`.
fn w_order_at_zero(g: &BiPoly) -> Option<u32> {
    g.terms().filter(|(&(i, _), _)| i == 0).map(|(&(_, j), _)| j).min()
}

/// Edges of the lower Newton polygon between `(0, r)` and the `s` axis, each
/// as `(upper_left, lower_right)`.
fn lower_edges(g: &BiPoly, r: u32) -> Vec<((u32, u32), (u32, u32))> {
    let mut lowest: Vec<Option<u32>> = vec![None; r as usize + 1];
    for (&(i, j), _) in g.terms() {
        if j <= r {
            let slot = &mut lowest[j as usize];
            if slot.map_or(true, |v| i < v) {
                *slot = Some(i);
            }
        }
    }
    let mut edges = Vec::new();
    let mut cur = (0u32, r);
    while cur.1 > 0 {
        let mut best: Option<(u32, u32)> = None;
        for j in (0..cur.1).rev() {
            let Some(i) = lowest[j as usize] else { continue };
            let better = match best {
                None => true,
                Some((bi, bj)) => {
                    // slope (i - ci)/(cj - j) compared with (bi - ci)/(cj - bj)
                    let lhs = (i as i64 - cur.0 as i64) * (cur.1 - bj) as i64;
                    let rhs = (bi as i64 - cur.0 as i64) * (cur.1 - j) as i64;
                    lhs <= rhs
                }
            };
            if better {
                best = Some((i, j));
            }
        }
        let next = best.expect("polynomial reaches the s axis");
        edges.push((cur, next));
        cur = next;
    }
    edges
}

/// `g(xi^v s^q, s^m (xi^u + w)) / s^l`.
fn substitute(g: &BiPoly, xv: &Elem, xu: &Elem, q: u32, m: u32, l: u32) -> BiPoly {
    let dy = g.deg_y().unwrap_or(0) as usize;
    let shift = UPoly::from_coeffs(vec![xu.clone(), Elem::one()]);
    let mut pows = vec![UPoly::one()];
    for k in 1..=dy {
        let next = &pows[k - 1] * &shift;
        pows.push(next);
    }
    let mut out = BiPoly::zero();
    for (&(i, j), c) in g.terms() {
        let coef = c * &xv.pow(i as u64);
        let sexp = q * i + m * j - l;
        for (k, pc) in pows[j as usize].coeffs().iter().enumerate() {
            out.add_term(sexp, k as u32, &(&coef * pc));
        }
    }
    out
}

fn divide_by_w(g: &BiPoly) -> BiPoly {
    g.div_monomial(0, 1)
}

fn expand(state: State, out: &mut Vec<Raw>) -> Result<()> {
    let g = &state.g;
    let r = w_order_at_zero(g).ok_or_else(|| Error::Invariant("local equation divisible by s".into()))?;
    if r == 0 {
        return Ok(());
    }
    let w_divides = g.y_adic_order().unwrap_or(0) >= 1;
    if r == 1 {
        let tail = if w_divides {
            Tail::Zero
        } else {
            Tail::Regular {
                g: g.clone(),
                gw: g.derivative_y(),
            }
        };
        out.push(Raw { state, tail });
        return Ok(());
    }
    if w_divides {
        out.push(Raw {
            state: state.clone(),
            tail: Tail::Zero,
        });
        let mut rest = state;
        rest.g = divide_by_w(&rest.g);
        return expand(rest, out);
    }
    for ((i0, j0), (i1, j1)) in lower_edges(g, r) {
        let di = i1 - i0;
        let dj = j0 - j1;
        let h = di.gcd(&dj);
        let (m, q) = (di / h, dj / h);
        let coeffs: Vec<Elem> = (0..=h)
            .map(|k| state.g.coeff(i1 - k * m, j1 + k * q))
            .collect();
        let phi = UPoly::from_coeffs(coeffs);
        // u*q - v*m = 1 with 0 <= v < q
        let v = (0..q).find(|v| (v * m + 1) % q == 0).unwrap_or(0);
        let u = (1 + v * m) / q;
        let l = q * i1 + m * j1;
        for (psi, _) in factor(&phi, &state.tower)? {
            let ext = state.tower.extend_irreducible(&psi);
            let xi = ext.root;
            let xv = xi.pow(v as u64);
            let xu = xi.pow(u as u64);
            let ng = substitute(&state.g, &xv, &xu, q, m, l);
            let mut na = vec![Elem::zero(); 0];
            for (k, c) in state.a.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let idx = k * q as usize;
                if na.len() <= idx {
                    na.resize(idx + 1, Elem::zero());
                }
                na[idx] = c * &xi.pow((v as usize * k) as u64);
            }
            let lead_exp = q as usize * state.b_exp + m as usize;
            let lead = &state.b_coef * &xi.pow((v as usize * state.b_exp) as u64 + u as u64);
            if na.len() <= lead_exp {
                na.resize(lead_exp + 1, Elem::zero());
            }
            na[lead_exp] = &na[lead_exp] + &lead;
            while na.last().is_some_and(|c| c.is_zero()) {
                na.pop();
            }
            let next = State {
                g: ng,
                tower: ext.tower,
                lambda: &state.lambda * &xi.pow((v as usize * state.e) as u64),
                e: state.e * q as usize,
                a: na,
                b_coef: &state.b_coef * &xi.pow((v as usize * state.b_exp) as u64),
                b_exp: lead_exp,
            };
            expand(next, out)?;
        }
    }
    Ok(())
}

/// All branches of `curve` centered at `p`, in canonical order. Results are
/// cached on the curve.
pub fn branches_at(curve: &PlaneCurve, p: &Arc<PointCluster>) -> Result<Arc<Vec<Arc<Branch>>>> {
    if let Some(hit) = curve.branch_cache.lock().unwrap().get(p.key()) {
        return Ok(hit.clone());
    }
    if !curve.form().eval(p.coords()).is_zero() {
        return Err(Error::PointNotOnCurve);
    }
    let local = curve.local_equation(p);
    let frame = Frame::choose(&local);
    let g = frame.apply(&local);
    let mut raw = Vec::new();
    expand(
        State {
            g: g.clone(),
            tower: p.tower().clone(),
            lambda: Elem::one(),
            e: 1,
            a: Vec::new(),
            b_coef: Elem::one(),
            b_exp: 0,
        },
        &mut raw,
    )?;
    let frame_eq = Arc::new(g);
    let mut branches: Vec<Branch> = raw
        .into_iter()
        .map(|r| {
            let conj_point = r.state.tower.degree_over(p.tower());
            Branch {
                center: p.clone(),
                index: 0,
                conj: r.state.tower.degree_over(curve.base()),
                conj_point,
                tower: r.state.tower,
                frame: frame.clone(),
                frame_eq: frame_eq.clone(),
                e: r.state.e,
                lambda: r.state.lambda,
                a: r.state.a,
                b_coef: r.state.b_coef,
                b_exp: r.state.b_exp,
                tail: r.tail,
                w_cache: Mutex::new(PSeries::zero(1)),
            }
        })
        .collect();
    branches.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    let total: usize = branches.iter().map(|b| b.e * b.conj_point).sum();
    let m = curve.multiplicity(p);
    if total != m {
        return Err(Error::Invariant(format!(
            "branch multiplicities sum to {total}, point multiplicity is {m}"
        )));
    }
    let list: Vec<Arc<Branch>> = branches
        .into_iter()
        .enumerate()
        .map(|(i, mut b)| {
            b.index = i;
            Arc::new(b)
        })
        .collect();
    let list = Arc::new(list);
    curve.branch_cache.lock().unwrap().insert(p.key().clone(), list.clone());
    Ok(list)
}

/// All branches centered at points of `C ∩ {phi = 0}`.
pub fn branch_support(curve: &PlaneCurve, phi: &Form3) -> Result<Vec<Arc<Branch>>> {
    if phi.is_zero() || curve.divides(phi) {
        return Err(Error::InfiniteIntersection);
    }
    let mut out = Vec::new();
    for p in curve.intersection_points(phi)?.iter() {
        out.extend(branches_at(curve, p)?.iter().cloned());
    }
    Ok(out)
}

/// Working precision for computations involving forms of degree up to `e`.
pub fn default_precision(d: u32, e: u32) -> usize {
    let d = d as usize;
    let e = e as usize;
    d * e + (d - 1) * d.saturating_sub(2) + 4
}
