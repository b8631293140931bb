//! Truncated power series in one variable `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::bipoly::BiPoly;
use super::field::Elem;
use super::poly::UPoly;

/// Marker precision for series known exactly (polynomials).
pub const EXACT: usize = usize::MAX;

/// A power series known modulo `t^prec`. Coefficients beyond the stored ones
/// and below `prec` are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct PSeries {
    c: Vec<Elem>,
    prec: usize,
}

impl PSeries {
    pub fn zero(prec: usize) -> PSeries {
        PSeries { c: Vec::new(), prec }
    }

    pub fn exact(c: Vec<Elem>) -> PSeries {
        PSeries::new(c, EXACT)
    }

    pub fn constant(c: Elem) -> PSeries {
        PSeries::exact(vec![c])
    }

    pub fn monomial(c: Elem, k: usize) -> PSeries {
        let mut v = vec![Elem::zero(); k + 1];
        v[k] = c;
        PSeries::exact(v)
    }

    pub fn from_poly(p: &UPoly) -> PSeries {
        PSeries::exact(p.coeffs().to_vec())
    }

    pub fn new(mut c: Vec<Elem>, prec: usize) -> PSeries {
        if c.len() > prec {
            c.truncate(prec);
        }
        while c.last().is_some_and(|e| e.is_zero()) {
            c.pop();
        }
        PSeries { c, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn coeff(&self, k: usize) -> Elem {
        debug_assert!(k < self.prec, "coefficient beyond known precision");
        self.c.get(k).cloned().unwrap_or_else(Elem::zero)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.c
    }

    /// Index of the first nonzero known coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|e| !e.is_zero())
    }

    /// True if every known coefficient vanishes.
    pub fn is_zero_to_prec(&self) -> bool {
        self.c.is_empty()
    }

    pub fn truncate(&self, prec: usize) -> PSeries {
        PSeries::new(self.c.clone(), prec.min(self.prec))
    }

    pub fn scale(&self, k: &Elem) -> PSeries {
        PSeries::new(self.c.iter().map(|e| e * k).collect(), self.prec)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> PSeries {
        let mut c = vec![Elem::zero(); k];
        c.extend(self.c.iter().cloned());
        PSeries::new(c, self.prec.saturating_add(k))
    }

    /// Divides by `t^k`; the first `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> PSeries {
        debug_assert!(self.c.iter().take(k).all(|e| e.is_zero()));
        let c = self.c.iter().skip(k).cloned().collect();
        let prec = if self.is_exact() { EXACT } else { self.prec.saturating_sub(k) };
        PSeries::new(c, prec)
    }

    pub fn mul_trunc(&self, other: &PSeries, prec: usize) -> PSeries {
        let va = self.ord().unwrap_or(self.prec);
        let vb = other.ord().unwrap_or(other.prec);
        let p = self
            .prec
            .saturating_add(vb)
            .min(other.prec.saturating_add(va))
            .min(prec);
        if self.c.is_empty() || other.c.is_empty() {
            return PSeries::zero(p);
        }
        let n = (self.c.len() + other.c.len() - 1).min(p);
        let mut out = vec![Elem::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if i >= n {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PSeries::new(out, p)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self, prec: usize) -> PSeries {
        let c0 = self.coeff(0);
        assert!(!c0.is_zero(), "inverse of a non-unit series");
        let p = prec.min(self.prec);
        let inv0 = c0.inv();
        let mut out: Vec<Elem> = Vec::with_capacity(p.min(1 << 20));
        out.push(inv0.clone());
        for k in 1..p {
            let mut s = Elem::zero();
            for i in 1..=k.min(self.c.len().saturating_sub(1)) {
                if self.c[i].is_zero() || out[k - i].is_zero() {
                    continue;
                }
                s = &s + &(&self.c[i] * &out[k - i]);
            }
            out.push(-&(&s * &inv0));
        }
        PSeries::new(out, p)
    }

    pub fn pow_trunc(&self, e: u32, prec: usize) -> PSeries {
        let mut acc = PSeries::constant(Elem::one());
        for _ in 0..e {
            acc = acc.mul_trunc(self, prec);
        }
        acc
    }

    /// Evaluates a univariate polynomial at this series.
    pub fn compose_poly(&self, p: &UPoly, prec: usize) -> PSeries {
        let mut acc = PSeries::zero(EXACT);
        for c in p.coeffs().iter().rev() {
            acc = &acc.mul_trunc(self, prec) + &PSeries::constant(c.clone());
        }
        acc.truncate(prec)
    }

    /// `f(x(t), y(t))` truncated at `prec`.
    pub fn eval_bipoly(f: &BiPoly, x: &PSeries, y: &PSeries, prec: usize) -> PSeries {
        let dx = f.deg_x().unwrap_or(0) as usize;
        let dy = f.deg_y().unwrap_or(0) as usize;
        let mut xp = vec![PSeries::constant(Elem::one())];
        for k in 1..=dx {
            let next = xp[k - 1].mul_trunc(x, prec);
            xp.push(next);
        }
        let mut yp = vec![PSeries::constant(Elem::one())];
        for k in 1..=dy {
            let next = yp[k - 1].mul_trunc(y, prec);
            yp.push(next);
        }
        let mut acc = PSeries::zero(EXACT);
        for (&(i, j), c) in f.terms() {
            let t = xp[i as usize].mul_trunc(&yp[j as usize], prec).scale(c);
            acc = &acc + &t;
        }
        acc.truncate(prec)
    }

    /// `self(c * t^k)`.
    pub fn substitute_monomial(&self, c: &Elem, k: usize) -> PSeries {
        let mut out = Vec::new();
        let mut pw = Elem::one();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                pw = &pw * c;
            }
            if a.is_zero() {
                continue;
            }
            let idx = i * k;
            if out.len() <= idx {
                out.resize(idx + 1, Elem::zero());
            }
            out[idx] = a * &pw;
        }
        let prec = if self.is_exact() { EXACT } else { self.prec.saturating_mul(k) };
        PSeries::new(out, prec)
    }

    pub fn display<'a>(&'a self, var: &'a str, upto: usize) -> SeriesDisplay<'a> {
        SeriesDisplay { s: self, var, upto }
    }
}

pub struct SeriesDisplay<'a> {
    s: &'a PSeries,
    var: &'a str,
    upto: usize,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.s.c.iter().enumerate().take(self.upto + 1) {
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
            let mono = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, k),
            };
            match (prefix, mono.is_empty()) {
                (Some(p), true) => write!(f, "{p}")?,
                (Some(p), false) => write!(f, "{p}*{mono}")?,
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{mono}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("t", self.c.len()))?;
        if !self.is_exact() {
            write!(f, " + O(t^{})", self.prec)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a PSeries> for &'a PSeries {
    type Output = PSeries;
    fn add(self, rhs: &'a PSeries) -> PSeries {
        let p = self.prec.min(rhs.prec);
        let n = self.c.len().max(rhs.c.len()).min(p);
        let c = (0..n)
            .map(|k| match (self.c.get(k), rhs.c.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Elem::zero(),
            })
            .collect();
        PSeries::new(c, p)
    }
}

impl<'a> Sub<&'a PSeries> for &'a PSeries {
    type Output = PSeries;
    fn sub(self, rhs: &'a PSeries) -> PSeries {
        self + &(-rhs)
    }
}

impl Neg for &PSeries {
    type Output = PSeries;
    fn neg(self) -> PSeries {
        PSeries {
            c: self.c.iter().map(|e| -e).collect(),
            prec: self.prec,
        }
    }
}

impl<'a> Mul<&'a PSeries> for &'a PSeries {
    type Output = PSeries;
    fn mul(self, rhs: &'a PSeries) -> PSeries {
        self.mul_trunc(rhs, EXACT)
    }
}
