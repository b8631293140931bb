//! Sparse bivariate polynomials in `(x, y)` used for affine charts and local
//! equations at points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Elem;
use super::poly::{BPoly, UPoly};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct BiPoly {
    /// `(i, j) -> coefficient of x^i y^j`, zero coefficients never stored.
    terms: BTreeMap<(u32, u32), Elem>,
}

impl BiPoly {
    pub fn zero() -> BiPoly {
        BiPoly::default()
    }

    pub fn constant(c: Elem) -> BiPoly {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Elem, i: u32, j: u32) -> BiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn x() -> BiPoly {
        BiPoly::monomial(Elem::one(), 1, 0)
    }

    pub fn y() -> BiPoly {
        BiPoly::monomial(Elem::one(), 0, 1)
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), Elem)>) -> BiPoly {
        let mut p = BiPoly::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, &c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &Elem) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Elem::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Elem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Elem {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn deg_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn deg_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Lowest total degree of a term (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == k)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Elem) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn eval(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for (&(i, j), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(i as u64)) * &y.pow(j as u64));
        }
        acc
    }

    /// Polynomial in `y` after substituting `x = a`.
    pub fn eval_x(&self, a: &Elem) -> UPoly {
        let mut c = vec![Elem::zero(); self.deg_y().map_or(0, |d| d as usize + 1)];
        for (&(i, j), v) in &self.terms {
            c[j as usize] = &c[j as usize] + &(v * &a.pow(i as u64));
        }
        UPoly::from_coeffs(c)
    }

    /// Polynomial in `x` after substituting `y = b`.
    pub fn eval_y(&self, b: &Elem) -> UPoly {
        self.swap().eval_x(b)
    }

    pub fn derivative_x(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(&(i, _), _)| i > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * &Elem::from_int(i as i64))),
        )
    }

    pub fn derivative_y(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(&(_, j), _)| j > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * &Elem::from_int(j as i64))),
        )
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::constant(Elem::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(P(x, y), Q(x, y))`.
    pub fn compose(&self, p: &BiPoly, q: &BiPoly) -> BiPoly {
        let dx = self.deg_x().unwrap_or(0) as usize;
        let dy = self.deg_y().unwrap_or(0) as usize;
        let mut ppow = vec![BiPoly::constant(Elem::one())];
        for k in 1..=dx {
            ppow.push(&ppow[k - 1] * p);
        }
        let mut qpow = vec![BiPoly::constant(Elem::one())];
        for k in 1..=dy {
            qpow.push(&qpow[k - 1] * q);
        }
        let mut acc = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            let t = &ppow[i as usize] * &qpow[j as usize];
            acc = &acc + &t.scale(c);
        }
        acc
    }

    /// `self(x + a, y + b)`.
    pub fn translate(&self, a: &Elem, b: &Elem) -> BiPoly {
        let px = &BiPoly::x() + &BiPoly::constant(a.clone());
        let py = &BiPoly::y() + &BiPoly::constant(b.clone());
        self.compose(&px, &py)
    }

    /// Largest `k` with `y^k` dividing `self`.
    pub fn y_adic_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    pub fn x_adic_order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    /// Divides by `x^a y^b`; all terms must be divisible.
    pub fn div_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    debug_assert!(i >= a && j >= b);
                    ((i - a, j - b), c.clone())
                })
                .collect(),
        }
    }

    /// As a polynomial in `y` with coefficients in `K[x]`.
    pub fn to_bpoly(&self) -> BPoly {
        let dy = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut cols: Vec<Vec<Elem>> = vec![Vec::new(); dy];
        for (&(i, j), c) in &self.terms {
            let col = &mut cols[j as usize];
            if col.len() <= i as usize {
                col.resize(i as usize + 1, Elem::zero());
            }
            col[i as usize] = c.clone();
        }
        BPoly::from_coeffs(cols.into_iter().map(UPoly::from_coeffs).collect())
    }

    pub fn from_bpoly(b: &BPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (j, p) in b.coeffs().iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                out.add_term(i as u32, j as u32, c);
            }
        }
        out
    }

    pub fn max_depth(&self) -> usize {
        self.terms.values().map(|c| c.depth()).max().unwrap_or(0)
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &'a BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c);
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &'a BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &'a BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, &(a * b));
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&Elem::from_int(-1))
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*x^{i}*y^{j}")?;
        }
        Ok(())
    }
}
