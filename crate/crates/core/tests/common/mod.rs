#![allow(dead_code)]

use std::sync::Arc;

use branchdiv::algebra::form::Form3;
use branchdiv::algebra::parse::{parse_expression, parse_form, Parsed};
use branchdiv::algebra::{Elem, UPoly};
use branchdiv::divisor::RationalFunction;
use branchdiv::puiseux::branches_at;
use branchdiv::{Branch, PlaneCurve};

pub fn q(n: i64) -> Elem {
    Elem::from_int(n)
}

pub fn form(s: &str) -> Form3 {
    parse_form(s, &Default::default()).unwrap()
}

pub fn curve(s: &str) -> Arc<PlaneCurve> {
    PlaneCurve::with_name("C", form(s)).unwrap()
}

pub fn func(c: &Arc<PlaneCurve>, s: &str) -> RationalFunction {
    match parse_expression(s, &Default::default()).unwrap() {
        Parsed::Ratio(n, d) => RationalFunction::new(c, n, d).unwrap(),
        Parsed::Form(f) => RationalFunction::new(c, f, Form3::constant(Elem::one())).unwrap(),
    }
}

/// Branch number `i` at a rational point.
pub fn branch(c: &Arc<PlaneCurve>, p: [i64; 3], i: usize) -> Arc<Branch> {
    let pt = c.point([q(p[0]), q(p[1]), q(p[2])]).unwrap();
    branches_at(c, &pt).unwrap()[i].clone()
}

pub fn poly(c: &[i64]) -> UPoly {
    UPoly::from_ints(c)
}

/// Product of two polynomials cut off at `t^n`.
pub fn mul_trunc(a: &UPoly, b: &UPoly, n: usize) -> UPoly {
    let mut out = vec![Elem::zero(); n];
    for (i, x) in a.coeffs().iter().enumerate().take(n) {
        for (j, y) in b.coeffs().iter().enumerate().take(n - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    UPoly::from_coeffs(out)
}

/// `phi(x(t), y(t), z(t))` modulo `t^n`, by plain term-by-term expansion.
pub fn substitute(phi: &Form3, p: &[UPoly; 3], n: usize) -> UPoly {
    let mut acc = UPoly::zero();
    for (e, c) in phi.terms() {
        let mut m = UPoly::constant(c.clone());
        for k in 0..3 {
            for _ in 0..e[k] {
                m = mul_trunc(&m, &p[k], n);
            }
        }
        acc = &acc + &m;
    }
    acc
}

/// Determinant by plain Gaussian elimination over the field.
pub fn det(mut m: Vec<Vec<Elem>>) -> Elem {
    let n = m.len();
    let mut d = Elem::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Elem::zero();
        };
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        d = &d * &m[col][col];
        let inv = m[col][col].inv();
        for r in col + 1..n {
            let k = &m[r][col] * &inv;
            for c in col..n {
                let v = &m[r][c] - &(&k * &m[col][c]);
                m[r][c] = v;
            }
        }
    }
    d
}

/// Sylvester matrix of two univariate polynomials with given coefficients.
pub fn sylvester(f: &[Elem], g: &[Elem]) -> Vec<Vec<Elem>> {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::new();
    for i in 0..n {
        let mut r = vec![Elem::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![Elem::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            r[i + k] = c.clone();
        }
        rows.push(r);
    }
    rows
}
