//! Plane projective curves, their points and singular locus.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::bipoly::BiPoly;
use crate::algebra::factor::factor;
use crate::algebra::form::{Chart, Form3};
use crate::algebra::irreducible::{absolute_irreducibility, Irreducibility};
use crate::algebra::poly::{BPoly, UPoly};
use crate::algebra::{Elem, FieldTower};
use crate::error::{Error, Result};
use crate::puiseux::Branch;

/// Canonical identity of a point cluster: the chart plus the minimal
/// polynomials of the local coordinates (the second one over the field of
/// the first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PointKey {
    pub chart: Chart,
    pub data: Vec<Vec<Elem>>,
}

/// A Galois-conjugacy class of points, represented by one conjugate with
/// coordinates in `tower`.
pub struct PointCluster {
    key: PointKey,
    tower: FieldTower,
    coords: [Elem; 3],
    size: usize,
    label: String,
}

impl PointCluster {
    fn new(key: PointKey, base: &FieldTower, tower: FieldTower, coords: [Elem; 3]) -> PointCluster {
        let size = tower.degree_over(base);
        let label = point_label(&coords, &tower, base);
        PointCluster {
            key,
            tower,
            coords,
            size,
            label,
        }
    }

    pub fn key(&self) -> &PointKey {
        &self.key
    }

    pub fn chart(&self) -> Chart {
        self.key.chart
    }

    /// Field generated by the coordinates of the representative.
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// Projective coordinates, normalized so the chart coordinate is 1.
    pub fn coords(&self) -> &[Elem; 3] {
        &self.coords
    }

    /// Affine coordinates in the point's chart.
    pub fn local(&self) -> (Elem, Elem) {
        let (a, b) = self.key.chart.local();
        (self.coords[a].clone(), self.coords[b].clone())
    }

    /// Number of conjugate points in the cluster.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_rational(&self) -> bool {
        self.size == 1
    }

    /// Printable name such as `(0:0:1)` or `(a1:0:1|a1^2-2)`.
    pub fn label(&self) -> &str {
        &self.label
    }
}

impl PartialEq for PointCluster {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for PointCluster {}

impl PartialOrd for PointCluster {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointCluster {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Debug for PointCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

impl fmt::Display for PointCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

fn compact(s: String) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn point_label(coords: &[Elem; 3], tower: &FieldTower, base: &FieldTower) -> String {
    let body: Vec<String> = coords.iter().map(|c| compact(c.plain())).collect();
    let mut out = format!("({})", body.join(":"));
    let levels = tower.levels();
    if levels.len() > base.depth() {
        let mins: Vec<String> = levels[base.depth()..]
            .iter()
            .map(|l| compact(l.minpoly().display(l.name()).to_string()))
            .collect();
        out = format!("({}|{})", body.join(":"), mins.join(","));
    }
    out
}

/// A point of a common zero set, before registration on a curve.
struct Solved {
    key: PointKey,
    tower: FieldTower,
    coords: [Elem; 3],
}

fn gcd_nonzero(polys: impl IntoIterator<Item = UPoly>) -> Option<UPoly> {
    let mut acc: Option<UPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(a) => a.gcd(&p),
        });
    }
    acc
}

/// Common zeros of `forms` in the projective plane, grouped into conjugacy
/// clusters over `base`. The first form must be squarefree and the zero set
/// finite.
fn common_zeros(base: &FieldTower, forms: &[Form3]) -> Result<Vec<Solved>> {
    let forms: Vec<&Form3> = forms.iter().filter(|f| !f.is_zero()).collect();
    let mut out = Vec::new();

    // chart Z = 1
    let polys: Vec<BiPoly> = forms.iter().map(|f| f.dehomogenize(Chart::Z)).collect();
    let first = polys[0].to_bpoly();
    let eliminant = if first.deg_y().unwrap_or(0) == 0 {
        first.coeff(0)
    } else {
        eliminate(&first, &polys[1..])?
    };
    if !eliminant.is_zero() && eliminant.degree().unwrap_or(0) > 0 {
        for (m, _) in factor(&eliminant, base)? {
            let ext = base.extend_irreducible(&m);
            let fiber = gcd_nonzero(polys.iter().map(|p| p.eval_x(&ext.root)))
                .ok_or_else(|| Error::Invariant("vertical line in a finite zero set".into()))?;
            if fiber.degree().unwrap_or(0) == 0 {
                continue;
            }
            for (k, _) in factor(&fiber, &ext.tower)? {
                let ey = ext.tower.extend_irreducible(&k);
                out.push(Solved {
                    key: PointKey {
                        chart: Chart::Z,
                        data: vec![m.coeffs().to_vec(), k.coeffs().to_vec()],
                    },
                    coords: Chart::Z.to_projective(&ext.root, &ey.root),
                    tower: ey.tower,
                });
            }
        }
    }

    // chart Y = 1 on the line Z = 0; local coordinates (X, Z)
    let restricted = forms.iter().map(|f| f.dehomogenize(Chart::Y).eval_y(&Elem::zero()));
    let line = gcd_nonzero(restricted)
        .ok_or_else(|| Error::Invariant("line at infinity in a finite zero set".into()))?;
    if line.degree().unwrap_or(0) > 0 {
        for (k, _) in factor(&line, base)? {
            let ext = base.extend_irreducible(&k);
            out.push(Solved {
                key: PointKey {
                    chart: Chart::Y,
                    data: vec![k.coeffs().to_vec()],
                },
                coords: Chart::Y.to_projective(&ext.root, &Elem::zero()),
                tower: ext.tower,
            });
        }
    }

    // the point (1:0:0)
    let p = [Elem::one(), Elem::zero(), Elem::zero()];
    if forms.iter().all(|f| f.eval(&p).is_zero()) {
        out.push(Solved {
            key: PointKey {
                chart: Chart::X,
                data: Vec::new(),
            },
            coords: p,
            tower: base.clone(),
        });
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

/// Resultant in `y` of `first` against a combination of `rest`, retrying
/// combinations until it is not identically zero.
fn eliminate(first: &BPoly, rest: &[BiPoly]) -> Result<UPoly> {
    for k in 1..=8i64 {
        let mut g = BiPoly::zero();
        for (i, p) in rest.iter().enumerate() {
            g = &g + &p.scale(&Elem::from_int(1 + k * i as i64));
        }
        if g.is_zero() {
            continue;
        }
        let r = first.resultant_y(&g.to_bpoly());
        if !r.is_zero() {
            return Ok(r);
        }
    }
    Err(Error::InfiniteIntersection)
}

/// An absolutely irreducible plane projective curve `F(X, Y, Z) = 0`.
pub struct PlaneCurve {
    name: String,
    form: Form3,
    base: FieldTower,
    points: Mutex<BTreeMap<PointKey, Arc<PointCluster>>>,
    singular: OnceLock<Vec<Arc<PointCluster>>>,
    cuts: Mutex<BTreeMap<Form3, Arc<Vec<Arc<PointCluster>>>>>,
    pub(crate) branch_cache: Mutex<BTreeMap<PointKey, Arc<Vec<Arc<Branch>>>>>,
    pub(crate) adjoint_cache: OnceLock<Vec<(Arc<Branch>, i64)>>,
}

impl PlaneCurve {
    /// Validates `form` and builds the curve. The name defaults to the form.
    pub fn new(form: Form3) -> Result<Arc<PlaneCurve>> {
        let name = form.to_string();
        PlaneCurve::with_name(&name, form)
    }

    pub fn with_name(name: &str, form: Form3) -> Result<Arc<PlaneCurve>> {
        if form.is_zero() || form.degree() == 0 {
            return Err(Error::DegreeTooLow);
        }
        match absolute_irreducibility(&form) {
            Irreducibility::Irreducible => {}
            Irreducibility::Reducible(k) => return Err(Error::NotIrreducible(k)),
            Irreducibility::NotSquarefree(r) => return Err(Error::NotSquarefree(r)),
        }
        let form = form.normalized();
        let base = FieldTower::containing(form.terms().map(|(_, c)| c));
        Ok(Arc::new(PlaneCurve {
            name: name.to_string(),
            form,
            base,
            points: Mutex::new(BTreeMap::new()),
            singular: OnceLock::new(),
            cuts: Mutex::new(BTreeMap::new()),
            branch_cache: Mutex::new(BTreeMap::new()),
            adjoint_cache: OnceLock::new(),
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Defining form, normalized to a monic leading coefficient.
    pub fn form(&self) -> &Form3 {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }

    /// Field of definition of the curve.
    pub fn base(&self) -> &FieldTower {
        &self.base
    }

    /// True when both handles describe the same curve.
    pub fn same_as(&self, other: &PlaneCurve) -> bool {
        std::ptr::eq(self, other) || self.form == other.form
    }

    /// True iff `F` divides `phi`. Forms of positive degree below `d` are
    /// rejected with `DegreeTooSmall`.
    pub fn contains(&self, phi: &Form3) -> Result<bool> {
        if phi.is_zero() {
            return Ok(true);
        }
        if phi.degree() < self.degree() {
            if phi.degree() == 0 {
                return Ok(false);
            }
            return Err(Error::DegreeTooSmall(phi.degree(), self.degree()));
        }
        Ok(phi.div_exact(&self.form).is_some())
    }

    /// Containment test that treats low-degree forms as non-containing.
    pub fn divides(&self, phi: &Form3) -> bool {
        phi.is_zero() || (phi.degree() >= self.degree() && phi.div_exact(&self.form).is_some())
    }

    fn register(&self, s: Solved) -> Arc<PointCluster> {
        let mut points = self.points.lock().unwrap();
        points
            .entry(s.key.clone())
            .or_insert_with(|| Arc::new(PointCluster::new(s.key, &self.base, s.tower, s.coords)))
            .clone()
    }

    /// The point cluster of a point with coordinates in the base field.
    pub fn point(&self, coords: [Elem; 3]) -> Result<Arc<PointCluster>> {
        let chart = [Chart::Z, Chart::Y, Chart::X]
            .into_iter()
            .find(|c| !coords[c.fixed()].is_zero())
            .ok_or(Error::PointNotOnCurve)?;
        let inv = coords[chart.fixed()].inv();
        let p: [Elem; 3] = [&coords[0] * &inv, &coords[1] * &inv, &coords[2] * &inv];
        if !self.form.eval(&p).is_zero() {
            return Err(Error::PointNotOnCurve);
        }
        let (a, b) = chart.local();
        let data = match chart {
            Chart::Z => vec![
                UPoly::linear_root(&p[a]).coeffs().to_vec(),
                UPoly::linear_root(&p[b]).coeffs().to_vec(),
            ],
            Chart::Y => vec![UPoly::linear_root(&p[a]).coeffs().to_vec()],
            Chart::X => Vec::new(),
        };
        Ok(self.register(Solved {
            key: PointKey { chart, data },
            tower: self.base.clone(),
            coords: p,
        }))
    }

    /// The cluster containing a point whose coordinates lie in some extension
    /// of the base field.
    pub fn locate(&self, coords: &[Elem; 3]) -> Result<Arc<PointCluster>> {
        let chart = [Chart::Z, Chart::Y, Chart::X]
            .into_iter()
            .find(|c| !coords[c.fixed()].is_zero())
            .ok_or(Error::PointNotOnCurve)?;
        let inv = coords[chart.fixed()].inv();
        let p: [Elem; 3] = [&coords[0] * &inv, &coords[1] * &inv, &coords[2] * &inv];
        if !self.form.eval(&p).is_zero() {
            return Err(Error::PointNotOnCurve);
        }
        if p.iter().all(|c| c.depth() <= self.base.depth()) {
            return self.point(p);
        }
        let mut tower = FieldTower::containing(p.iter());
        if !tower.extends(&self.base) {
            tower = self.base.clone();
        }
        let (ia, ib) = chart.local();
        let (a, b) = (&p[ia], &p[ib]);
        let m = tower.min_poly_over(a, &self.base).monic();
        let homogenize = |poly: &UPoly, var: usize| -> Form3 {
            let s = poly.degree().unwrap_or(0) as u32;
            let mut f = Form3::zero(s);
            for (i, c) in poly.coeffs().iter().enumerate() {
                let mut e = [0u32; 3];
                e[var] = i as u32;
                e[chart.fixed()] = s - i as u32;
                f.add_term(e, c);
            }
            f
        };
        let mut cut = homogenize(&m, ia);
        if self.divides(&cut) {
            cut = homogenize(&tower.min_poly_over(b, &self.base).monic(), ib);
        }
        let candidates = self.intersection_points(&cut)?;
        for c in candidates.iter().filter(|c| c.chart() == chart) {
            let data = &c.key.data;
            if UPoly::from_coeffs(data[0].clone()).monic() != m {
                continue;
            }
            if chart == Chart::Y {
                return Ok(c.clone());
            }
            let ct = c.tower();
            let images = [a.clone(), b.clone()];
            let k: Vec<Elem> = data[1].iter().map(|x| ct.embed(x, &self.base, &images)).collect();
            if UPoly::from_coeffs(k).eval(b).is_zero() {
                return Ok(c.clone());
            }
        }
        Err(Error::Invariant("located point matches no cluster".into()))
    }

    /// Looks up a registered point cluster by its label.
    pub fn point_by_label(&self, label: &str) -> Option<Arc<PointCluster>> {
        let wanted = compact(label.to_string());
        self.points.lock().unwrap().values().find(|p| p.label == wanted).cloned()
    }

    /// Singular points, as conjugacy clusters in canonical order.
    pub fn singular_points(&self) -> Vec<Arc<PointCluster>> {
        self.singular
            .get_or_init(|| {
                let mut forms = vec![self.form.clone()];
                forms.extend((0..3).map(|k| self.form.partial(k)));
                let solved = common_zeros(&self.base, &forms).expect("singular locus is finite");
                solved.into_iter().map(|s| self.register(s)).collect()
            })
            .clone()
    }

    /// Points of `C ∩ {phi = 0}` as clusters in canonical order.
    pub fn intersection_points(&self, phi: &Form3) -> Result<Arc<Vec<Arc<PointCluster>>>> {
        if self.divides(phi) {
            return Err(Error::InfiniteIntersection);
        }
        if FieldTower::containing(phi.terms().map(|(_, c)| c)).depth() > self.base.depth() {
            return Err(Error::Invariant("form defined over a larger field than the curve".into()));
        }
        let key = phi.normalized();
        if let Some(hit) = self.cuts.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let solved = common_zeros(&self.base, &[self.form.clone(), key.clone()])?;
        let pts: Arc<Vec<Arc<PointCluster>>> =
            Arc::new(solved.into_iter().map(|s| self.register(s)).collect());
        self.cuts.lock().unwrap().insert(key, pts.clone());
        Ok(pts)
    }

    /// The defining polynomial in the chart of `p`, recentered at `p`.
    pub fn local_equation(&self, p: &PointCluster) -> BiPoly {
        let (x0, y0) = p.local();
        self.form.dehomogenize(p.chart()).translate(&x0, &y0)
    }

    /// Multiplicity of the curve at `p`.
    pub fn multiplicity(&self, p: &PointCluster) -> usize {
        self.local_equation(p).order().unwrap_or(0) as usize
    }

    /// Multiplicity at `p` computed in another chart in which `p` is affine.
    pub fn multiplicity_in_chart(&self, p: &PointCluster, chart: Chart) -> Option<usize> {
        let c = p.coords();
        let s = c[chart.fixed()].checked_inv()?;
        let (a, b) = chart.local();
        let f = self.form.dehomogenize(chart).translate(&(&c[a] * &s), &(&c[b] * &s));
        f.order().map(|o| o as usize)
    }

    /// Checks that a point with base-field coordinates lies on the curve and
    /// returns its multiplicity.
    pub fn multiplicity_at(&self, coords: [Elem; 3]) -> Result<usize> {
        let p = self.point(coords)?;
        Ok(self.multiplicity(&p))
    }
}

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneCurve({}: {})", self.name, self.form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_form;

    fn curve(s: &str) -> Arc<PlaneCurve> {
        PlaneCurve::new(parse_form(s, &Default::default()).unwrap()).unwrap()
    }

    fn q(n: i64) -> Elem {
        Elem::from_int(n)
    }

    #[test]
    fn rejects_reducible_forms() {
        let f = parse_form("X^2 + Y^2", &Default::default()).unwrap();
        assert!(matches!(PlaneCurve::new(f), Err(Error::NotIrreducible(2))));
        let g = parse_form("(Y^2*Z - X^3)*X", &Default::default()).unwrap();
        assert!(matches!(PlaneCurve::new(g), Err(Error::NotIrreducible(_))));
    }

    #[test]
    fn cusp_and_node_singularities() {
        for s in ["Y^2*Z - X^3", "Y^2*Z - X^2*Z - X^3"] {
            let c = curve(s);
            let sing = c.singular_points();
            assert_eq!(sing.len(), 1, "{s}");
            assert_eq!(sing[0].label(), "(0:0:1)");
            assert_eq!(c.multiplicity(&sing[0]), 2);
        }
        assert!(curve("X*Z - Y^2").singular_points().is_empty());
    }

    #[test]
    fn conjugate_singular_pair() {
        let c = curve("(X^2 - 2*Z^2)^2 + Y^2*(X - 3*Z)*Z");
        let sing = c.singular_points();
        let labels: Vec<&str> = sing.iter().map(|p| p.label()).collect();
        assert_eq!(labels, vec!["(a1:0:1|a1^2-2)", "(0:1:0)"]);
        assert_eq!(sing[0].size(), 2);
        let other = FieldTower::rationals().adjoin("b", &UPoly::from_ints(&[-2, 0, 1])).unwrap();
        let b = other.generator().unwrap();
        let hit = c.locate(&[-&b, Elem::zero(), Elem::one()]).unwrap();
        assert_eq!(hit.key(), sing[0].key());
        let inf = c.locate(&[Elem::zero(), q(5), Elem::zero()]).unwrap();
        assert_eq!(inf.label(), "(0:1:0)");
    }

    #[test]
    fn multiplicity_checks_membership() {
        let c = curve("Y^2*Z - X^3");
        assert!(matches!(c.multiplicity_at([q(2), q(2), q(1)]), Err(Error::PointNotOnCurve)));
        assert_eq!(c.multiplicity_at([q(1), q(1), q(1)]).unwrap(), 1);
        let conic = curve("X*Z - Y^2");
        assert_eq!(conic.multiplicity_at([q(1), q(1), q(1)]).unwrap(), 1);
    }

    #[test]
    fn containment() {
        let c = curve("Y^2*Z - X^3");
        let f = c.form().clone();
        let fx = &f * &Form3::var(0);
        assert!(c.contains(&fx).unwrap());
        assert!(!c.contains(&parse_form("Y^3", &Default::default()).unwrap()).unwrap());
        assert!(c.contains(&Form3::zero(3)).unwrap());
        assert!(matches!(c.contains(&Form3::var(1)), Err(Error::DegreeTooSmall(1, 3))));
    }

    #[test]
    fn cut_by_coordinate_lines() {
        let c = curve("Y^2*Z - X^3");
        let y = c.intersection_points(&Form3::var(1)).unwrap();
        assert_eq!(y.iter().map(|p| p.label().to_string()).collect::<Vec<_>>(), vec!["(0:0:1)"]);
        let z = c.intersection_points(&Form3::var(2)).unwrap();
        assert_eq!(z.iter().map(|p| p.label().to_string()).collect::<Vec<_>>(), vec!["(0:1:0)"]);
        let inf = &c.form().clone() * &Form3::var(0);
        assert!(matches!(c.intersection_points(&inf), Err(Error::InfiniteIntersection)));
    }
}
