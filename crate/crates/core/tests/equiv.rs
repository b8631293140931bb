mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use branchdiv::algebra::form::Form3;
use branchdiv::divisor::{Divisor, RationalFunction};
use branchdiv::equiv::{
    adjoint_divisor, complete_series, equivalence_witness, genus, l_dim, riemann_roch_space, sum_complete,
};
use branchdiv::fixtures;
use branchdiv::puiseux::branches_at;
use branchdiv::{Branch, PlaneCurve};
use common::{branch, curve, form, func, q};

/// Number of gaps of the semigroup generated by the orders of the chart
/// monomials `x^i y^j` along a branch centered at the chart origin.
fn monomial_gaps(b: &Branch) -> usize {
    let (x, y) = b.local_series(40);
    let (ox, oy) = (x.ord().unwrap(), y.ord().unwrap());
    let mut reach = BTreeSet::from([0usize]);
    for n in 1..40 {
        if (n >= ox && reach.contains(&(n - ox))) || (n >= oy && reach.contains(&(n - oy))) {
            reach.insert(n);
        }
    }
    (1..40).filter(|n| !reach.contains(n)).count()
}

/// Intersection number of two smooth branches `y = s(x)` in the same frame.
fn separation(a: &Branch, b: &Branch) -> usize {
    let (_, ya) = a.chart_series(20);
    let (_, yb) = b.chart_series(20);
    (0..20).find(|&k| ya.coeff(k) != yb.coeff(k)).unwrap()
}

/// delta of a double point: its branches' gaps plus pairwise separation.
fn oracle_delta(c: &Arc<PlaneCurve>, p: [i64; 3]) -> usize {
    let bs = branches_at(c, &c.point([q(p[0]), q(p[1]), q(p[2])]).unwrap()).unwrap();
    let mut delta: usize = bs.iter().map(|b| monomial_gaps(b)).sum();
    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            delta += separation(&bs[i], &bs[j]);
        }
    }
    delta
}

fn plane_genus(c: &Arc<PlaneCurve>, deltas: usize) -> i64 {
    let d = c.degree() as i64;
    (d - 1) * (d - 2) / 2 - deltas as i64
}

#[test]
fn adjoint_exponents() {
    let cusp = curve("Y^2*Z - X^3");
    let g0 = branch(&cusp, [0, 0, 1], 0);
    assert_eq!(monomial_gaps(&g0), 1);
    let a = adjoint_divisor(&cusp).unwrap();
    assert_eq!(a.count_at(&g0), 2 * monomial_gaps(&g0) as i64);
    assert_eq!(genus(&cusp).unwrap(), plane_genus(&cusp, 1));

    let node = curve("Y^2*Z - X^2*Z - X^3");
    assert_eq!(oracle_delta(&node, [0, 0, 1]), 1);
    let a = adjoint_divisor(&node).unwrap();
    for i in 0..2 {
        assert_eq!(a.count_at(&branch(&node, [0, 0, 1], i)), 1);
    }
    assert_eq!(a.degree(), 2);
    assert_eq!(genus(&node).unwrap(), 0);

    let conic = curve("X*Z - Y^2");
    assert!(adjoint_divisor(&conic).unwrap().is_zero());
    assert_eq!(genus(&conic).unwrap(), 0);
}

#[test]
fn genera_from_the_plane_formula() {
    assert_eq!(genus(&curve("Y^2*Z - X^3 - X*Z^2")).unwrap(), 1);
    let quartic = fixtures::curve("node_quartic").unwrap();
    let sing = quartic.singular_points();
    assert_eq!(sing.iter().map(|p| p.label().to_string()).collect::<Vec<_>>(), vec!["(0:0:1)"]);
    assert_eq!(quartic.multiplicity(&sing[0]), 2);
    let delta = oracle_delta(&quartic, [0, 0, 1]);
    assert_eq!(delta, 1);
    assert_eq!(genus(&quartic).unwrap(), plane_genus(&quartic, delta));
    assert_eq!(genus(&quartic).unwrap(), 2);
}

/// `f` lies in L(G) when div f + G is effective.
fn in_space(f: &RationalFunction, g: &Divisor) -> bool {
    f.is_constant() || (&f.divisor().unwrap() + g).is_effective()
}

#[test]
fn riemann_roch_spaces_on_the_cusp() {
    let c = curve("Y^2*Z - X^3");
    let g0 = branch(&c, [0, 0, 1], 0);
    let g = Divisor::single(&c, &g0, 2);
    let space = riemann_roch_space(&g).unwrap();
    assert_eq!(space.dim(), 3);
    let candidates = ["X/Y", "X^2/Y^2"].map(|s| func(&c, s));
    assert_eq!(candidates[0].signed_ord(&g0).unwrap(), -1);
    assert_eq!(candidates[1].signed_ord(&g0).unwrap(), -2);
    for f in &candidates {
        assert!(in_space(f, &g));
    }
    for f in space.functions().unwrap() {
        assert!(in_space(&f, &g), "{}", f.render());
    }
}

#[test]
fn only_constants_are_regular() {
    for c in fixtures::all() {
        let space = riemann_roch_space(&Divisor::zero(&c)).unwrap();
        assert_eq!(space.dim(), 1, "{}", c.name());
        assert!(space.functions().unwrap()[0].is_constant());
    }
}

/// Linear forms with coefficients in -1..=1, up to sign.
fn small_lines() -> Vec<Form3> {
    let mut out = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                let f = &(&form("X").scale(&q(a)) + &form("Y").scale(&q(b))) + &form("Z").scale(&q(c));
                if !f.is_zero() && !out.contains(&f.normalized()) {
                    out.push(f.normalized());
                }
            }
        }
    }
    out
}

#[test]
fn one_point_on_an_elliptic_curve() {
    let c = curve("Y^2*Z - X^3 - X*Z^2");
    let p = branch(&c, [0, 0, 1], 0);
    let g = Divisor::single(&c, &p, 1);
    assert_eq!(l_dim(&g).unwrap(), 1);
    // no ratio of small lines has at most a simple pole at p and nowhere else
    let lines = small_lines();
    for num in &lines {
        for den in &lines {
            let Ok(f) = RationalFunction::new(&c, num.clone(), den.clone()) else { continue };
            if !f.is_constant() {
                assert!(!in_space(&f, &g), "{}", f.render());
            }
        }
    }
    let s = complete_series(&g).unwrap();
    assert_eq!((s.dim(), s.order()), (0, 1));
}

#[test]
fn complete_series_on_the_cusp() {
    let c = curve("Y^2*Z - X^3");
    let g0 = branch(&c, [0, 0, 1], 0);
    let s = complete_series(&Divisor::single(&c, &g0, 2)).unwrap();
    assert_eq!((s.dim(), s.order()), (2, 2));
    let z = complete_series(&Divisor::zero(&c)).unwrap();
    assert_eq!((z.dim(), z.order()), (0, 0));

    let one = Divisor::single(&c, &g0, 1);
    let sum = sum_complete(&one, &one).unwrap();
    assert_eq!((sum.dim(), sum.order()), (2, 2));
    assert!(sum.same_series(&s).unwrap());
    let same = sum_complete(&one, &Divisor::zero(&c)).unwrap();
    assert!(same.same_series(&complete_series(&one).unwrap()).unwrap());
}

#[test]
fn two_points_on_an_elliptic_curve() {
    let c = curve("Y^2*Z - X^3 - X*Z^2");
    let (p, r) = (branch(&c, [0, 0, 1], 0), branch(&c, [0, 1, 0], 0));
    let s = sum_complete(&Divisor::single(&c, &p, 1), &Divisor::single(&c, &r, 1)).unwrap();
    // deg 2 > 2g - 2 = 0, so l = 2 - g + 1 = 2
    assert_eq!((s.dim(), s.order()), (1, 2));
}

#[test]
fn equivalence_witnesses() {
    let c = curve("Y^2*Z - X^3");
    let (g0, ginf) = (branch(&c, [0, 0, 1], 0), branch(&c, [0, 1, 0], 0));
    let (a, b) = (Divisor::single(&c, &g0, 2), Divisor::single(&c, &ginf, 2));
    let w = equivalence_witness(&a, &b).unwrap().expect("equivalent");
    assert_eq!(w.divisor().unwrap(), &a - &b);
    assert_eq!(w.divisor().unwrap(), func(&c, "X/Z").divisor().unwrap());

    let w = equivalence_witness(&a, &a).unwrap().expect("reflexive");
    assert!(w.is_constant());

    let e = curve("Y^2*Z - X^3 - X*Z^2");
    let (p, r) = (branch(&e, [0, 0, 1], 0), branch(&e, [0, 1, 0], 0));
    assert_eq!(l_dim(&(&Divisor::single(&e, &r, 1) - &Divisor::single(&e, &p, 1))).unwrap(), 0);
    assert!(equivalence_witness(&Divisor::single(&e, &p, 1), &Divisor::single(&e, &r, 1))
        .unwrap()
        .is_none());
}
