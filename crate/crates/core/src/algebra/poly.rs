//! Dense univariate polynomials over [`Elem`], and bivariate polynomials
//! stored as univariate polynomials in `y` with coefficients in `K[x]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Elem;

/// Univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct UPoly {
    c: Vec<Elem>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly { c: Vec::new() }
    }

    pub fn one() -> UPoly {
        UPoly::constant(Elem::one())
    }

    pub fn constant(e: Elem) -> UPoly {
        UPoly::from_coeffs(vec![e])
    }

    /// The polynomial `x`.
    pub fn x() -> UPoly {
        UPoly::from_coeffs(vec![Elem::zero(), Elem::one()])
    }

    /// `x - a`.
    pub fn linear_root(a: &Elem) -> UPoly {
        UPoly::from_coeffs(vec![-a, Elem::one()])
    }

    pub fn from_coeffs(mut c: Vec<Elem>) -> UPoly {
        while c.last().is_some_and(|e| e.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> UPoly {
        UPoly::from_coeffs(c.iter().map(|&n| Elem::from_int(n)).collect())
    }

    pub fn monomial(coef: Elem, k: usize) -> UPoly {
        let mut c = vec![Elem::zero(); k + 1];
        c[k] = coef;
        UPoly::from_coeffs(c)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.c.get(i).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn coeff_ref(&self, i: usize) -> Option<&Elem> {
        self.c.get(i)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for the zero polynomial.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Elem {
        self.c.last().cloned().unwrap_or_else(Elem::zero)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|e| !e.is_zero())
    }

    pub fn max_depth(&self) -> usize {
        self.c.iter().map(|e| e.depth()).max().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.max_depth() == 0
    }

    pub fn scale(&self, k: &Elem) -> UPoly {
        if k.is_zero() {
            return UPoly::zero();
        }
        UPoly::from_coeffs(self.c.iter().map(|e| e * k).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let l = self.lc();
        if l.is_one() {
            return self.clone();
        }
        self.scale(&l.inv())
    }

    pub fn mul_xn(&self, n: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Elem::zero(); n];
        c.extend(self.c.iter().cloned());
        UPoly { c }
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for e in self.c.iter().rev() {
            acc = &(&acc * x) + e;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.c.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, e)| e * &Elem::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> UPoly {
        let mut base = self.clone();
        let mut acc = UPoly::one();
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

    /// Returns `(q, r)` with `self = q * d + r` and `deg r < deg d`.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lc().inv();
        let mut r = self.c.clone();
        let mut q = vec![Elem::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let t = top * &inv;
            for (i, di) in d.c.iter().enumerate() {
                if di.is_zero() {
                    continue;
                }
                r[k + i] = &r[k + i] - &(&t * di);
            }
            q[k] = t;
        }
        r.truncate(dd);
        (UPoly::from_coeffs(q), UPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `g = s*self + t*other`, `g` the (not
    /// necessarily monic) last nonzero remainder.
    pub fn ext_gcd(&self, other: &UPoly) -> (UPoly, UPoly, UPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
        let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        (r0, s0, t0)
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &Elem) -> UPoly {
        if c.is_zero() || self.c.len() <= 1 {
            return self.clone();
        }
        // Horner with the linear polynomial x + c
        let lin = UPoly::from_coeffs(vec![c.clone(), Elem::one()]);
        self.compose(&lin)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for e in self.c.iter().rev() {
            acc = &(&acc * g) + &UPoly::constant(e.clone());
        }
        acc
    }

    /// `x^deg * self(1/x)`.
    pub fn reverse(&self) -> UPoly {
        let mut c = self.c.clone();
        c.reverse();
        UPoly::from_coeffs(c)
    }

    /// Yun's squarefree decomposition: monic `(s_i, i)` with
    /// `monic(self) = prod s_i^i`, only nontrivial factors listed.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut c = fp.div_exact(&a0);
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn squarefree_part(&self) -> UPoly {
        let mut acc = UPoly::one();
        for (s, _) in self.squarefree_decomposition() {
            acc = &acc * &s;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Resultant over the coefficient field.
    pub fn resultant(&self, other: &UPoly) -> Elem {
        if self.is_zero() || other.is_zero() {
            return Elem::zero();
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = Elem::one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                return &acc * &b.lc().pow(da as u64);
            }
            if da == 0 {
                return &acc * &a.lc().pow(db as u64);
            }
            let r = a.rem(&b);
            if r.is_zero() {
                return Elem::zero();
            }
            let dr = r.degree().unwrap();
            if (da * db) % 2 == 1 {
                acc = -&acc;
            }
            acc = &acc * &b.lc().pow((da - dr) as u64);
            a = b;
            b = r;
        }
    }

    pub fn display<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { p: self, var }
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Elem], ys: &[Elem]) -> UPoly {
        let n = xs.len();
        let mut dd: Vec<Elem> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &xs[i] - &xs[i - j];
                dd[i] = &num / &den;
            }
        }
        let mut acc = UPoly::zero();
        for i in (0..n).rev() {
            acc = &(&acc * &UPoly::linear_root(&xs[i])) + &UPoly::constant(dd[i].clone());
        }
        acc
    }
}

pub struct PolyDisplay<'a> {
    p: &'a UPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.p.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, prefix) = c.coeff_prefix();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, i),
            };
            match (prefix, mono.is_empty()) {
                (Some(p), true) => write!(f, "{p}")?,
                (Some(p), false) => write!(f, "{p}*{mono}")?,
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("x"))
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &'a UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::from_coeffs(c)
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &'a UPoly) -> UPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        UPoly::from_coeffs(c)
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &'a UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Elem::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        UPoly::from_coeffs(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            c: self.c.iter().map(|e| -e).collect(),
        }
    }
}

/// Bivariate polynomial `sum_j c_j(x) y^j` with `c_j` in `K[x]`.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct BPoly {
    c: Vec<UPoly>,
}

impl BPoly {
    pub fn zero() -> BPoly {
        BPoly { c: Vec::new() }
    }

    pub fn from_coeffs(mut c: Vec<UPoly>) -> BPoly {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        BPoly { c }
    }

    /// A polynomial in `x` alone.
    pub fn from_x(p: UPoly) -> BPoly {
        BPoly::from_coeffs(vec![p])
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.c
    }

    pub fn coeff(&self, j: usize) -> UPoly {
        self.c.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.c.iter().filter_map(|p| p.degree()).max()
    }

    pub fn lc_y(&self) -> UPoly {
        self.c.last().cloned().unwrap_or_default()
    }

    /// Substitutes `x = a`, leaving a polynomial in `y`.
    pub fn eval_x(&self, a: &Elem) -> UPoly {
        UPoly::from_coeffs(self.c.iter().map(|p| p.eval(a)).collect())
    }

    pub fn derivative_y(&self) -> BPoly {
        BPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, p)| p.scale(&Elem::from_int(j as i64)))
                .collect(),
        )
    }

    pub fn derivative_x(&self) -> BPoly {
        BPoly::from_coeffs(self.c.iter().map(|p| p.derivative()).collect())
    }

    pub fn scale_x(&self, p: &UPoly) -> BPoly {
        BPoly::from_coeffs(self.c.iter().map(|q| q * p).collect())
    }

    fn mul_yn(&self, n: usize) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let mut c = vec![UPoly::zero(); n];
        c.extend(self.c.iter().cloned());
        BPoly { c }
    }

    /// `Res_y(self, other)` as a polynomial in `x`, by evaluation at integer
    /// points where neither leading coefficient vanishes, then interpolation.
    pub fn resultant_y(&self, other: &BPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let m = self.deg_y().unwrap();
        let n = other.deg_y().unwrap();
        let bound = n * self.deg_x().unwrap_or(0) + m * other.deg_x().unwrap_or(0);
        let lc1 = self.lc_y();
        let lc2 = other.lc_y();
        let mut xs = Vec::with_capacity(bound + 1);
        let mut ys = Vec::with_capacity(bound + 1);
        let mut k: i64 = 0;
        while xs.len() <= bound {
            let a = Elem::from_int(k);
            k = if k > 0 { -k } else { -k + 1 };
            if lc1.eval(&a).is_zero() || lc2.eval(&a).is_zero() {
                continue;
            }
            let r = self.eval_x(&a).resultant(&other.eval_x(&a));
            xs.push(a);
            ys.push(r);
        }
        UPoly::interpolate(&xs, &ys)
    }

    /// Gcd of the `K[x]` coefficients (monic in `x`).
    pub fn content(&self) -> UPoly {
        let mut g = UPoly::zero();
        for p in &self.c {
            g = g.gcd(p);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> BPoly {
        let c = self.content();
        if c.is_zero() {
            return BPoly::zero();
        }
        BPoly::from_coeffs(self.c.iter().map(|p| p.div_exact(&c)).collect())
    }

    fn prem(&self, d: &BPoly) -> BPoly {
        let dd = d.deg_y().unwrap();
        let lcd = d.lc_y();
        let mut r = self.clone();
        while let Some(dr) = r.deg_y() {
            if dr < dd {
                break;
            }
            let lcr = r.lc_y();
            let t = d.scale_x(&lcr).mul_yn(dr - dd);
            r = &r.scale_x(&lcd) - &t;
        }
        r
    }

    /// Greatest common divisor in `K[x, y]`, normalized so the leading
    /// coefficient (in `y`, then `x`) is one.
    pub fn gcd(&self, other: &BPoly) -> BPoly {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let cg = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.deg_y() < b.deg_y() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg_y() == Some(0) {
                a = BPoly::from_x(UPoly::one());
                break;
            }
            let r = a.prem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.scale_x(&cg).normalized()
    }

    pub fn normalized(&self) -> BPoly {
        if self.is_zero() {
            return BPoly::zero();
        }
        let l = self.lc_y().lc();
        let inv = UPoly::constant(l.inv());
        self.scale_x(&inv)
    }

    /// Exact division by `d`, `None` if `d` does not divide.
    pub fn div_exact(&self, d: &BPoly) -> Option<BPoly> {
        let dd = d.deg_y()?;
        let lcd = d.lc_y();
        let mut r = self.clone();
        let mut q = vec![UPoly::zero(); self.c.len().saturating_sub(dd)];
        while let Some(dr) = r.deg_y() {
            if dr < dd {
                return None;
            }
            let (t, rem) = r.lc_y().divrem(&lcd);
            if !rem.is_zero() {
                return None;
            }
            let sub = d.scale_x(&t).mul_yn(dr - dd);
            q[dr - dd] = t;
            r = &r - &sub;
            if r.deg_y() == Some(dr) {
                return None;
            }
        }
        Some(BPoly::from_coeffs(q))
    }
}

impl<'a> Add<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn add(self, rhs: &'a BPoly) -> BPoly {
        let n = self.c.len().max(rhs.c.len());
        BPoly::from_coeffs((0..n).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }
}

impl<'a> Sub<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &'a BPoly) -> BPoly {
        let n = self.c.len().max(rhs.c.len());
        BPoly::from_coeffs((0..n).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect())
    }
}

impl<'a> Mul<&'a BPoly> for &'a BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &'a BPoly) -> BPoly {
        if self.is_zero() || rhs.is_zero() {
            return BPoly::zero();
        }
        let mut c = vec![UPoly::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        BPoly::from_coeffs(c)
    }
}

/// Convenience: rational numbers as [`Elem`].
pub fn rat(n: i64, d: i64) -> Elem {
    Elem::from_ratio(n, d)
}
