//! Homogeneous polynomials in `X, Y, Z` (plane forms).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::bipoly::BiPoly;
use super::field::Elem;

/// Affine chart of the projective plane, named after the coordinate set to 1.
/// Local coordinates are `(X, Y)` for `Z`, `(X, Z)` for `Y`, `(Y, Z)` for `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    Z,
    Y,
    X,
}

impl Chart {
    /// Index of the normalized coordinate.
    pub fn fixed(self) -> usize {
        match self {
            Chart::Z => 2,
            Chart::Y => 1,
            Chart::X => 0,
        }
    }

    /// Indices of the two local coordinates `(x, y)`.
    pub fn local(self) -> (usize, usize) {
        match self {
            Chart::Z => (0, 1),
            Chart::Y => (0, 2),
            Chart::X => (1, 2),
        }
    }

    /// Projective coordinates of the affine point `(x, y)`.
    pub fn to_projective(self, x: &Elem, y: &Elem) -> [Elem; 3] {
        let mut p = [Elem::zero(), Elem::zero(), Elem::zero()];
        let (a, b) = self.local();
        p[a] = x.clone();
        p[b] = y.clone();
        p[self.fixed()] = Elem::one();
        p
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Chart::Z => "Z",
            Chart::Y => "Y",
            Chart::X => "X",
        };
        write!(f, "{s}")
    }
}

pub type Exps = [u32; 3];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Form3 {
    deg: u32,
    /// Exponents of `(X, Y, Z)`; lexicographic key order puts `X` first.
    terms: BTreeMap<Exps, Elem>,
}

impl Form3 {
    pub fn zero(deg: u32) -> Form3 {
        Form3 {
            deg,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: Elem, e: Exps) -> Form3 {
        let mut f = Form3::zero(e[0] + e[1] + e[2]);
        f.add_term(e, &c);
        f
    }

    pub fn var(k: usize) -> Form3 {
        let mut e = [0; 3];
        e[k] = 1;
        Form3::monomial(Elem::one(), e)
    }

    pub fn constant(c: Elem) -> Form3 {
        Form3::monomial(c, [0, 0, 0])
    }

    /// Builds a form from terms; returns `None` if the terms are not all of
    /// degree `deg`.
    pub fn from_terms(deg: u32, it: impl IntoIterator<Item = (Exps, Elem)>) -> Option<Form3> {
        let mut f = Form3::zero(deg);
        for (e, c) in it {
            if e[0] + e[1] + e[2] != deg {
                return None;
            }
            f.add_term(e, &c);
        }
        Some(f)
    }

    pub fn add_term(&mut self, e: Exps, c: &Elem) {
        debug_assert_eq!(e[0] + e[1] + e[2], self.deg, "inhomogeneous term");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Elem::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exps) -> Elem {
        self.terms.get(&e).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn max_depth(&self) -> usize {
        self.terms.values().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Elem) -> Form3 {
        if c.is_zero() {
            return Form3::zero(self.deg);
        }
        Form3 {
            deg: self.deg,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Leading term in the lexicographic order `X > Y > Z`.
    pub fn leading(&self) -> Option<(Exps, Elem)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))
    }

    /// Scales so the leading coefficient is one.
    pub fn normalized(&self) -> Form3 {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn eval(&self, p: &[Elem; 3]) -> Elem {
        let mut acc = Elem::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for k in 0..3 {
                if e[k] > 0 {
                    t = &t * &p[k].pow(e[k] as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn partial(&self, k: usize) -> Form3 {
        let mut out = Form3::zero(self.deg.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut e2 = *e;
                e2[k] -= 1;
                out.add_term(e2, &(c * &Elem::from_int(e[k] as i64)));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Form3 {
        let mut acc = Form3::constant(Elem::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Dehomogenizes in the given chart.
    pub fn dehomogenize(&self, chart: Chart) -> BiPoly {
        let (a, b) = chart.local();
        BiPoly::from_terms(self.terms.iter().map(|(e, c)| ((e[a], e[b]), c.clone())))
    }

    /// Homogenizes an affine polynomial of total degree at most `deg`.
    pub fn homogenize(p: &BiPoly, chart: Chart, deg: u32) -> Form3 {
        let (a, b) = chart.local();
        let mut out = Form3::zero(deg);
        for (&(i, j), c) in p.terms() {
            assert!(i + j <= deg, "affine degree exceeds target degree");
            let mut e = [0; 3];
            e[a] = i;
            e[b] = j;
            e[chart.fixed()] = deg - i - j;
            out.add_term(e, c);
        }
        out
    }

    /// `self(g[0], g[1], g[2])` for forms `g` of a common degree.
    pub fn compose(&self, g: &[Form3; 3]) -> Form3 {
        let e = g[0].deg;
        debug_assert!(g.iter().all(|h| h.deg == e));
        let mut pows: [Vec<Form3>; 3] = [vec![], vec![], vec![]];
        for k in 0..3 {
            let maxe = self.terms.keys().map(|x| x[k]).max().unwrap_or(0);
            pows[k].push(Form3::constant(Elem::one()));
            for n in 1..=maxe as usize {
                let next = &pows[k][n - 1] * &g[k];
                pows[k].push(next);
            }
        }
        let mut out = Form3::zero(self.deg * e);
        for (ex, c) in &self.terms {
            let t = &(&pows[0][ex[0] as usize] * &pows[1][ex[1] as usize]) * &pows[2][ex[2] as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Applies the linear substitution `X_k -> sum_l m[k][l] X_l`.
    pub fn linear_substitute(&self, m: &[[Elem; 3]; 3]) -> Form3 {
        let lin: [Form3; 3] = std::array::from_fn(|k| {
            let mut f = Form3::zero(1);
            for l in 0..3 {
                let mut e = [0; 3];
                e[l] = 1;
                f.add_term(e, &m[k][l]);
            }
            f
        });
        self.compose(&lin)
    }

    /// Monomials of degree `deg` in canonical order (lexicographically
    /// decreasing: `X^deg` first, `Z^deg` last).
    pub fn monomials(deg: u32) -> Vec<Exps> {
        let mut out = Vec::new();
        for a in (0..=deg).rev() {
            for b in (0..=deg - a).rev() {
                out.push([a, b, deg - a - b]);
            }
        }
        out
    }

    pub fn to_vector(&self, basis: &[Exps]) -> Vec<Elem> {
        basis.iter().map(|e| self.coeff(*e)).collect()
    }

    pub fn from_vector(deg: u32, basis: &[Exps], v: &[Elem]) -> Form3 {
        let mut f = Form3::zero(deg);
        for (e, c) in basis.iter().zip(v) {
            f.add_term(*e, c);
        }
        f
    }

    /// Division by `d`: returns `(q, r)` with `self = q*d + r` and no term of
    /// `r` divisible by the leading monomial of `d`. The remainder depends
    /// linearly on `self`.
    pub fn divrem(&self, d: &Form3) -> (Form3, Form3) {
        let (lm, lc) = d.leading().expect("division by the zero form");
        let inv = lc.inv();
        let qdeg = self.deg.saturating_sub(d.deg);
        let mut q = Form3::zero(qdeg);
        let mut r = Form3::zero(self.deg);
        let mut p = self.clone();
        while let Some((e, c)) = p.leading() {
            if self.deg >= d.deg && (0..3).all(|k| e[k] >= lm[k]) {
                let qe = [e[0] - lm[0], e[1] - lm[1], e[2] - lm[2]];
                let qc = &c * &inv;
                let t = Form3::monomial(qc.clone(), qe);
                q.add_term(qe, &qc);
                p = &p - &(&t * d);
            } else {
                p.terms.remove(&e);
                r.add_term(e, &c);
            }
        }
        (q, r)
    }

    /// Exact quotient by `d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Form3) -> Option<Form3> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn display_with<'a>(&'a self, names: &'a [&'a str; 3]) -> FormDisplay<'a> {
        FormDisplay { f: self, names }
    }
}

pub struct FormDisplay<'a> {
    f: &'a Form3,
    names: &'a [&'a str; 3],
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.f.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.f.terms.iter().rev() {
            let (neg, prefix) = c.coeff_prefix();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if let Some(p) = prefix {
                parts.push(p);
            }
            for k in 0..3 {
                match e[k] {
                    0 => {}
                    1 => parts.push(self.names[k].to_string()),
                    n => parts.push(format!("{}^{}", self.names[k], n)),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Form3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&["X", "Y", "Z"]))
    }
}

impl fmt::Debug for Form3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Form3> for &'a Form3 {
    type Output = Form3;
    fn add(self, rhs: &'a Form3) -> Form3 {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.deg, rhs.deg, "adding forms of different degrees");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a Form3> for &'a Form3 {
    type Output = Form3;
    fn sub(self, rhs: &'a Form3) -> Form3 {
        self + &(-rhs)
    }
}

impl Neg for &Form3 {
    type Output = Form3;
    fn neg(self) -> Form3 {
        self.scale(&Elem::from_int(-1))
    }
}

impl<'a> Mul<&'a Form3> for &'a Form3 {
    type Output = Form3;
    fn mul(self, rhs: &'a Form3) -> Form3 {
        let mut out = Form3::zero(self.deg + rhs.deg);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], &(x * y));
            }
        }
        out
    }
}
