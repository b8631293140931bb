//! Brute-force cross-checks: resultant intersection numbers, branch value
//! semigroups, local delta invariants by rank counting, and series-division
//! orders.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::form::{Chart, Form3};
use crate::algebra::poly::UPoly;
use crate::algebra::pseries::PSeries;
use crate::algebra::Elem;
use crate::curve::{PlaneCurve, PointCluster};
use crate::divisor::{branch_multiplicity, RationalFunction};
use crate::error::{Error, Result};
use crate::puiseux::{branches_at, Branch};

type Matrix = [[Elem; 3]; 3];

fn det(m: &Matrix) -> Elem {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0]);
    let a = &m[0][0] * &minor(1, 2, 1, 2);
    let b = &m[0][1] * &minor(1, 2, 0, 2);
    let c = &m[0][2] * &minor(1, 2, 0, 1);
    &(&a - &b) + &c
}

fn inverse(m: &Matrix) -> Option<Matrix> {
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let dinv = d.inv();
    Some(std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // cofactor of (j, i)
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            let v = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]]) - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
            let v = if (i + j) % 2 == 0 { v } else { -&v };
            &v * &dinv
        })
    }))
}

fn apply(m: &Matrix, p: &[Elem; 3]) -> [Elem; 3] {
    std::array::from_fn(|i| {
        let mut acc = Elem::zero();
        for j in 0..3 {
            acc = &acc + &(&m[i][j] * &p[j]);
        }
        acc
    })
}

/// A curve after a seeded projective change of coordinates `X -> M X`.
#[derive(Clone, Debug)]
pub struct ShearedModel {
    seed: u64,
    matrix: Matrix,
    inverse: Matrix,
    form: Form3,
}

impl ShearedModel {
    pub fn new(curve: &PlaneCurve, seed: u64) -> ShearedModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let m: Matrix = std::array::from_fn(|_| std::array::from_fn(|_| Elem::from_int(rng.gen_range(-5..=5))));
            if let Some(inv) = inverse(&m) {
                return ShearedModel {
                    seed,
                    form: curve.form().linear_substitute(&m),
                    matrix: m,
                    inverse: inv,
                };
            }
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The sheared defining form `F(M X)`.
    pub fn form(&self) -> &Form3 {
        &self.form
    }

    /// A form in sheared coordinates.
    pub fn shear(&self, phi: &Form3) -> Form3 {
        phi.linear_substitute(&self.matrix)
    }

    /// Coordinates of a point in the sheared model.
    pub fn to_sheared(&self, p: &[Elem; 3]) -> [Elem; 3] {
        apply(&self.inverse, p)
    }
}

/// Order of vanishing at `x0` of `Res_y(f, g)` in the sheared affine chart.
pub fn resultant_multiplicity(phi: &Form3, x0: &Elem, model: &ShearedModel) -> Result<usize> {
    let f = model.form().dehomogenize(Chart::Z).to_bpoly();
    let g = model.shear(phi).dehomogenize(Chart::Z).to_bpoly();
    let mut r = f.resultant_y(&g);
    if r.is_zero() {
        return Err(Error::InfiniteIntersection);
    }
    let lin = UPoly::linear_root(x0);
    let mut k = 0;
    while r.eval(x0).is_zero() {
        r = r.div_exact(&lin);
        k += 1;
    }
    Ok(k)
}

/// One intersection fiber: primary branch sum against the resultant order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRow {
    pub point: String,
    /// Number of conjugate points in the cluster.
    pub size: usize,
    pub branch_sum: usize,
    pub resultant_order: usize,
}

/// Compares branch multiplicity sums with resultant orders fiber by fiber,
/// retrying up to five shears when fibers collide.
pub fn fiber_comparison(curve: &Arc<PlaneCurve>, phi: &Form3, seed: u64) -> Result<(u64, Vec<FiberRow>)> {
    if curve.divides(phi) {
        return Err(Error::InfiniteIntersection);
    }
    let points = curve.intersection_points(phi)?;
    for attempt in 0..5u64 {
        let model = ShearedModel::new(curve, seed.wrapping_add(attempt));
        if let Some(rows) = try_fibers(curve, phi, &points, &model)? {
            return Ok((model.seed(), rows));
        }
    }
    Err(Error::SharedFiber)
}

fn try_fibers(
    curve: &Arc<PlaneCurve>,
    phi: &Form3,
    points: &[Arc<PointCluster>],
    model: &ShearedModel,
) -> Result<Option<Vec<FiberRow>>> {
    let vertical = [Elem::zero(), Elem::one(), Elem::zero()];
    if model.form().eval(&vertical).is_zero() {
        return Ok(None);
    }
    let mut seen: BTreeMap<Vec<Elem>, ()> = BTreeMap::new();
    let mut fibers = Vec::new();
    for p in points {
        let s = model.to_sheared(p.coords());
        if s[2].is_zero() {
            return Ok(None);
        }
        let x0 = &s[0] / &s[2];
        let m = p.tower().min_poly_over(&x0, curve.base());
        if m.degree() != Some(p.size()) || seen.insert(m.coeffs().to_vec(), ()).is_some() {
            return Ok(None);
        }
        fibers.push((p.clone(), x0));
    }
    let mut rows = Vec::new();
    for (p, x0) in fibers {
        let mut sum = 0;
        for b in branches_at(curve, &p)?.iter() {
            sum += branch_multiplicity(curve, b, phi)? * b.conj_point();
        }
        rows.push(FiberRow {
            point: p.label().to_string(),
            size: p.size(),
            branch_sum: sum,
            resultant_order: resultant_multiplicity(phi, &x0, model)?,
        });
    }
    Ok(Some(rows))
}

/// Value semigroup data of one branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semigroup {
    pub generators: Vec<usize>,
    pub gaps: Vec<usize>,
    pub delta: usize,
    pub conductor: usize,
}

/// Row-reduces coefficient vectors by lowest nonzero index; returns the set
/// of attained leading indices.
struct LowEchelon {
    rows: BTreeMap<usize, Vec<Elem>>,
}

impl LowEchelon {
    fn new() -> LowEchelon {
        LowEchelon { rows: BTreeMap::new() }
    }

    fn insert(&mut self, mut v: Vec<Elem>) -> bool {
        loop {
            let Some(lead) = v.iter().position(|c| !c.is_zero()) else { return false };
            match self.rows.get(&lead) {
                Some(r) => {
                    let k = &v[lead] / &r[lead];
                    for (a, b) in v.iter_mut().zip(r) {
                        *a = &*a - &(&k * b);
                    }
                }
                None => {
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn monomial_orders_below(x: &PSeries, y: &PSeries, n: usize) -> Vec<(usize, usize)> {
    let ox = x.ord().unwrap_or(n).max(1);
    let oy = y.ord().unwrap_or(n).max(1);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i * ox + j * oy < n {
                out.push((i, j));
            }
        }
    }
    out
}

/// The value semigroup of a branch from the orders of polynomial
/// combinations of its recentered coordinates, up to `prec`.
pub fn semigroup_delta(curve: &PlaneCurve, b: &Branch, prec: usize) -> Result<Semigroup> {
    let d = curve.degree() as usize;
    let bound = if d >= 3 { (d - 1) * (d - 2) + 2 } else { 2 };
    if prec < bound {
        return Err(Error::PrecisionTooLow(prec));
    }
    let n = prec + d;
    let (x, y) = b.local_series(n);
    let mut ech = LowEchelon::new();
    let mut xp = vec![PSeries::constant(Elem::one())];
    let mut yp = vec![PSeries::constant(Elem::one())];
    for (i, j) in monomial_orders_below(&x, &y, n) {
        while xp.len() <= i {
            let next = xp[xp.len() - 1].mul_trunc(&x, n);
            xp.push(next);
        }
        while yp.len() <= j {
            let next = yp[yp.len() - 1].mul_trunc(&y, n);
            yp.push(next);
        }
        let m = xp[i].mul_trunc(&yp[j], n);
        ech.insert((0..n).map(|k| m.coeff(k)).collect());
    }
    let values: Vec<usize> = ech.rows.keys().copied().collect();
    let gaps: Vec<usize> = (0..n).filter(|k| !ech.rows.contains_key(k)).collect();
    let conductor = gaps.last().map_or(0, |g| g + 1);
    if conductor > prec {
        return Err(Error::PrecisionTooLow(prec));
    }
    let delta = gaps.len();
    if conductor != 2 * delta {
        return Err(Error::Invariant(format!("conductor {conductor} differs from twice delta {delta}")));
    }
    let mut generators = Vec::new();
    for &v in values.iter().filter(|&&v| v > 0) {
        let decomposable = values
            .iter()
            .filter(|&&a| a > 0 && a < v)
            .any(|&a| ech.rows.contains_key(&(v - a)));
        if !decomposable {
            generators.push(v);
        }
    }
    Ok(Semigroup {
        generators,
        gaps,
        delta,
        conductor,
    })
}

/// `delta` of one point of a cluster: the codimension of the local ring in
/// its normalization, by rank counting modulo `t^N` on every branch.
pub fn local_delta(curve: &Arc<PlaneCurve>, p: &Arc<PointCluster>) -> Result<usize> {
    let d = curve.degree() as usize;
    let n = if d >= 3 { (d - 1) * (d - 2) + 2 } else { 2 };
    let branches = branches_at(curve, p)?;
    let series: Vec<(Arc<Branch>, PSeries, PSeries)> = branches
        .iter()
        .map(|b| {
            let (x, y) = b.local_series(n);
            (b.clone(), x, y)
        })
        .collect();
    let ptower = p.tower();
    let mut ech = LowEchelon::new();
    let mut total = 0;
    for (b, ..) in &series {
        total += n * b.tower().degree_over(ptower);
    }
    for i in 0..n {
        for j in 0..(n - i) {
            let mut v = Vec::with_capacity(total);
            for (b, x, y) in &series {
                let m = x.pow_trunc(i as u32, n).mul_trunc(&y.pow_trunc(j as u32, n), n);
                for k in 0..n {
                    v.extend(b.tower().coords_over(&m.coeff(k), ptower));
                }
            }
            ech.insert(v);
        }
    }
    let rank = ech.rank();
    if rank > total {
        return Err(Error::Invariant("rank exceeds the normalization dimension".into()));
    }
    Ok(total - rank)
}

/// Genus from the rank-counted delta invariants.
pub fn oracle_genus(curve: &Arc<PlaneCurve>) -> Result<i64> {
    let d = curve.degree() as i64;
    let mut delta = 0i64;
    for p in curve.singular_points() {
        delta += local_delta(curve, &p)? as i64 * p.size() as i64;
    }
    Ok((d - 1) * (d - 2) / 2 - delta)
}

/// The `ord` half of `ord_val` by direct Laurent division of the substituted
/// numerator by the substituted denominator.
pub fn brute_ord(f: &RationalFunction, b: &Branch, prec: usize) -> Result<usize> {
    let n = b.form_series(f.num(), 2 * prec);
    let d = b.form_series(f.den(), 2 * prec);
    let k = d.ord().ok_or(Error::Inconclusive)?;
    let m = n.ord().ok_or(Error::Inconclusive)?;
    if m < k {
        return Ok(k - m);
    }
    let q = n.unshift(k).mul_trunc(&d.unshift(k).inverse(prec), prec);
    let tail = &q - &PSeries::constant(q.coeff(0));
    tail.ord().ok_or(Error::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_form;
    use crate::fixtures;

    fn form(s: &str) -> Form3 {
        parse_form(s, &Default::default()).unwrap()
    }

    fn q(n: i64) -> Elem {
        Elem::from_int(n)
    }

    #[test]
    fn resultant_orders_in_the_identity_chart() {
        let cusp = fixtures::curve("cusp").unwrap();
        let id = ShearedModel {
            seed: 0,
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { q(1) } else { q(0) })),
            inverse: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { q(1) } else { q(0) })),
            form: cusp.form().clone(),
        };
        assert_eq!(resultant_multiplicity(&form("Y"), &q(0), &id).unwrap(), 3);
        let node = fixtures::curve("node").unwrap();
        let id = ShearedModel {
            form: node.form().clone(),
            ..id
        };
        assert_eq!(resultant_multiplicity(&form("Y - X"), &q(0), &id).unwrap(), 3);
        assert_eq!(resultant_multiplicity(&form("X - 3*Z"), &q(3), &id).unwrap(), 2);
    }

    #[test]
    fn fibers_agree_on_fixtures() {
        for name in ["cusp", "node", "tacnode", "conj_nodes"] {
            let c = fixtures::curve(name).unwrap();
            for phi in ["Y", "X - Z", "X^2 - Y*Z"] {
                let phi = form(phi);
                let (_, rows) = fiber_comparison(&c, &phi, 7).unwrap();
                let total: usize = rows.iter().map(|r| r.size * r.resultant_order).sum();
                assert_eq!(total, (c.degree() * phi.degree()) as usize, "{name} {phi}");
                for r in rows {
                    assert_eq!(r.branch_sum, r.resultant_order, "{name} {phi} {}", r.point);
                }
            }
        }
    }

    #[test]
    fn semigroups() {
        let cusp = fixtures::curve("cusp").unwrap();
        let p = cusp.point([q(0), q(0), q(1)]).unwrap();
        let s = semigroup_delta(&cusp, &branches_at(&cusp, &p).unwrap()[0], 4).unwrap();
        assert_eq!((s.generators, s.delta, s.conductor), (vec![2, 3], 1, 2));
        let e6 = fixtures::curve("e6_quartic").unwrap();
        let p = e6.point([q(0), q(0), q(1)]).unwrap();
        let s = semigroup_delta(&e6, &branches_at(&e6, &p).unwrap()[0], 8).unwrap();
        assert_eq!((s.generators, s.gaps, s.delta), (vec![3, 4], vec![1, 2, 5], 3));
        let smooth = cusp.point([q(1), q(1), q(1)]).unwrap();
        let s = semigroup_delta(&cusp, &branches_at(&cusp, &smooth).unwrap()[0], 4).unwrap();
        assert_eq!(s.delta, 0);
        assert!(matches!(
            semigroup_delta(&e6, &branches_at(&e6, &p).unwrap()[0], 3),
            Err(Error::PrecisionTooLow(3))
        ));
    }

    #[test]
    fn rank_counted_genus_matches_adjoints() {
        for c in fixtures::all() {
            assert_eq!(oracle_genus(&c).unwrap(), crate::equiv::genus(&c).unwrap(), "{}", c.name());
            for p in c.singular_points() {
                assert_eq!(
                    local_delta(&c, &p).unwrap() as i64,
                    crate::equiv::delta_at(&c, &p).unwrap(),
                    "{} {}",
                    c.name(),
                    p
                );
            }
        }
    }

    #[test]
    fn brute_orders() {
        let cusp = fixtures::curve("cusp").unwrap();
        let g0 = branches_at(&cusp, &cusp.point([q(0), q(0), q(1)]).unwrap()).unwrap()[0].clone();
        let f = RationalFunction::new(&cusp, form("Y"), form("X")).unwrap();
        assert_eq!(brute_ord(&f, &g0, 12).unwrap(), 1);
        assert_eq!(f.ord_val(&g0).unwrap().0, 1);
        let inv = RationalFunction::new(&cusp, form("Z"), form("X")).unwrap();
        assert_eq!(brute_ord(&inv, &g0, 12).unwrap(), 2);
        let one = RationalFunction::new(&cusp, form("X"), form("X")).unwrap();
        assert!(matches!(brute_ord(&one, &g0, 12), Err(Error::Inconclusive)));
    }
}
