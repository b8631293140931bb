//! Exact arithmetic in towers of simple algebraic extensions of the rationals.
//!
//! An element of level `k` is a polynomial in the level generator with
//! coefficients of strictly lower depth, reduced modulo the monic minimal
//! polynomial of that level. Elements carry their level (an `Arc<Level>`), so
//! arithmetic needs no external context and elements of a subfield mix freely
//! with elements of any extension built on top of it.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::UPoly;
use super::AlgebraError;

/// One simple extension step `K = K'(a)`, `m(a) = 0`.
pub struct Level {
    parent: Option<Arc<Level>>,
    depth: usize,
    name: String,
    /// Monic minimal polynomial over the parent, ascending, `len = degree + 1`.
    minpoly: Vec<Elem>,
}

impl Level {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn minpoly(&self) -> UPoly {
        UPoly::from_coeffs(self.minpoly.clone())
    }

    pub fn parent(&self) -> Option<&Arc<Level>> {
        self.parent.as_ref()
    }
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        self.depth == other.depth
            && self.minpoly == other.minpoly
            && match (&self.parent, &other.parent) {
                (None, None) => true,
                (Some(a), Some(b)) => Arc::ptr_eq(a, b) || **a == **b,
                _ => false,
            }
    }
}

impl Eq for Level {}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level({}: {})", self.name, self.minpoly().display(&self.name))
    }
}

/// An exact element of some field tower over the rationals.
#[derive(Clone)]
pub enum Elem {
    Rat(BigRational),
    /// Canonical: `2 <= coeffs.len() <= degree`, last coefficient nonzero,
    /// every coefficient of depth `< level.depth`.
    Alg(Arc<Level>, Vec<Elem>),
}

impl Elem {
    pub fn zero() -> Elem {
        Elem::Rat(BigRational::zero())
    }

    pub fn one() -> Elem {
        Elem::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Elem {
        Elem::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Elem {
        Elem::Rat(BigRational::from_integer(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Elem {
        Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(q: BigRational) -> Elem {
        Elem::Rat(q)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Elem::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Elem::Rat(q) if q.is_one())
    }

    pub fn depth(&self) -> usize {
        match self {
            Elem::Rat(_) => 0,
            Elem::Alg(l, _) => l.depth,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Rat(q) => Some(q),
            Elem::Alg(..) => None,
        }
    }

    /// Builds the canonical element `sum coeffs[i] * a^i` at `level`, reducing
    /// modulo the minimal polynomial when needed.
    pub fn from_level_coeffs(level: &Arc<Level>, coeffs: Vec<Elem>) -> Elem {
        let mut coeffs = coeffs;
        reduce_mod_minpoly(level, &mut coeffs);
        normalize(level, coeffs)
    }

    /// Coefficients with respect to the generator of `level`, padded to the
    /// level degree. `self` must live in the tower ending at `level`.
    pub fn level_coeffs(&self, level: &Arc<Level>) -> Vec<Elem> {
        let deg = level.degree();
        let mut out = vec![Elem::zero(); deg];
        match self {
            Elem::Alg(l, cs) if l.depth == level.depth => {
                debug_assert!(**l == **level);
                for (i, c) in cs.iter().enumerate() {
                    out[i] = c.clone();
                }
            }
            other => {
                debug_assert!(other.depth() < level.depth);
                out[0] = other.clone();
            }
        }
        out
    }

    pub fn inv(&self) -> Elem {
        self.checked_inv().expect("inverse of zero")
    }

    pub fn checked_inv(&self) -> Option<Elem> {
        match self {
            Elem::Rat(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Elem::Rat(q.recip()))
                }
            }
            Elem::Alg(level, cs) => {
                let a = UPoly::from_coeffs(cs.clone());
                let m = level.minpoly();
                let (g, s, _) = a.ext_gcd(&m);
                // g is a nonzero constant since m is irreducible
                let g0 = g.coeff(0);
                let s = s.scale(&g0.inv());
                Some(Elem::from_level_coeffs(level, s.into_coeffs()))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Elem {
        let mut base = self.clone();
        let mut acc = Elem::one();
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

    /// Integer power allowing negative exponents for nonzero elements.
    pub fn powi(&self, e: i64) -> Elem {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().pow(e.unsigned_abs())
        }
    }

    fn is_negative_rational(&self) -> bool {
        matches!(self, Elem::Rat(q) if q.is_negative())
    }
}

fn reduce_mod_minpoly(level: &Arc<Level>, coeffs: &mut Vec<Elem>) {
    let deg = level.degree();
    while coeffs.len() > deg {
        let k = coeffs.len() - 1;
        let c = coeffs.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        // a^k = a^(k-deg) * a^deg = -a^(k-deg) * sum_{i<deg} m_i a^i
        for i in 0..deg {
            let mi = &level.minpoly[i];
            if mi.is_zero() {
                continue;
            }
            let idx = k - deg + i;
            coeffs[idx] = &coeffs[idx] - &(&c * mi);
        }
    }
}

fn normalize(level: &Arc<Level>, mut coeffs: Vec<Elem>) -> Elem {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    match coeffs.len() {
        0 => Elem::zero(),
        1 => coeffs.pop().unwrap(),
        _ => Elem::Alg(level.clone(), coeffs),
    }
}

fn add_impl(a: &Elem, b: &Elem, negate_b: bool) -> Elem {
    match (a, b) {
        (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(if negate_b { x - y } else { x + y }),
        _ => {
            let (da, db) = (a.depth(), b.depth());
            match da.cmp(&db) {
                Ordering::Greater => {
                    let Elem::Alg(level, cs) = a else { unreachable!() };
                    let mut cs = cs.clone();
                    cs[0] = add_impl(&cs[0], b, negate_b);
                    normalize(level, cs)
                }
                Ordering::Less => {
                    let Elem::Alg(level, cs) = b else { unreachable!() };
                    let mut out: Vec<Elem> = if negate_b {
                        cs.iter().map(|c| -c).collect()
                    } else {
                        cs.clone()
                    };
                    out[0] = &out[0] + a;
                    normalize(level, out)
                }
                Ordering::Equal => {
                    let (Elem::Alg(level, ca), Elem::Alg(_, cb)) = (a, b) else { unreachable!() };
                    let n = ca.len().max(cb.len());
                    let mut out = Vec::with_capacity(n);
                    for i in 0..n {
                        let x = ca.get(i);
                        let y = cb.get(i);
                        out.push(match (x, y) {
                            (Some(x), Some(y)) => add_impl(x, y, negate_b),
                            (Some(x), None) => x.clone(),
                            (None, Some(y)) => {
                                if negate_b {
                                    -y
                                } else {
                                    y.clone()
                                }
                            }
                            (None, None) => unreachable!(),
                        });
                    }
                    normalize(level, out)
                }
            }
        }
    }
}

fn mul_impl(a: &Elem, b: &Elem) -> Elem {
    match (a, b) {
        (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
        _ => {
            if a.is_zero() || b.is_zero() {
                return Elem::zero();
            }
            let (da, db) = (a.depth(), b.depth());
            match da.cmp(&db) {
                Ordering::Greater => {
                    let Elem::Alg(level, cs) = a else { unreachable!() };
                    normalize(level, cs.iter().map(|c| mul_impl(c, b)).collect())
                }
                Ordering::Less => mul_impl(b, a),
                Ordering::Equal => {
                    let (Elem::Alg(level, ca), Elem::Alg(_, cb)) = (a, b) else { unreachable!() };
                    let mut out = vec![Elem::zero(); ca.len() + cb.len() - 1];
                    for (i, x) in ca.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in cb.iter().enumerate() {
                            if y.is_zero() {
                                continue;
                            }
                            out[i + j] = &out[i + j] + &mul_impl(x, y);
                        }
                    }
                    reduce_mod_minpoly(level, &mut out);
                    normalize(level, out)
                }
            }
        }
    }
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, rhs: &'a Elem) -> Elem {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, rhs: &'a Elem) -> Elem {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, rhs: &'a Elem) -> Elem {
        mul_impl(self, rhs)
    }
}

impl<'a> Div<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn div(self, rhs: &'a Elem) -> Elem {
        mul_impl(self, &rhs.inv())
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        match self {
            Elem::Rat(q) => Elem::Rat(-q),
            Elem::Alg(l, cs) => Elem::Alg(l.clone(), cs.iter().map(|c| -c).collect()),
        }
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &'a Elem) -> Elem {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Elem::Rat(a), Elem::Rat(b)) => a == b,
            (Elem::Alg(la, ca), Elem::Alg(lb, cb)) => {
                ca == cb && (Arc::ptr_eq(la, lb) || **la == **lb)
            }
            _ => false,
        }
    }
}

impl Eq for Elem {}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical structural order: rationals first by value, then algebraic
/// elements by depth and coefficient vector.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Elem::Rat(a), Elem::Rat(b)) => a.cmp(b),
            (Elem::Rat(_), Elem::Alg(..)) => Ordering::Less,
            (Elem::Alg(..), Elem::Rat(_)) => Ordering::Greater,
            (Elem::Alg(la, ca), Elem::Alg(lb, cb)) => la
                .depth
                .cmp(&lb.depth)
                .then_with(|| ca.cmp(cb))
                .then_with(|| {
                    if Arc::ptr_eq(la, lb) {
                        Ordering::Equal
                    } else {
                        la.minpoly.cmp(&lb.minpoly)
                    }
                }),
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Elem::Alg(level, cs) => {
                let p = UPoly::from_coeffs(cs.clone());
                write!(f, "({})", p.display(&level.name))
            }
        }
    }
}

impl Elem {
    /// Like `Display`, without the parentheses around an algebraic element.
    pub fn plain(&self) -> String {
        match self {
            Elem::Rat(_) => self.to_string(),
            Elem::Alg(level, cs) => UPoly::from_coeffs(cs.clone()).display(&level.name).to_string(),
        }
    }

    /// Formats as a coefficient in front of a monomial: returns the prefix
    /// (without the sign) and whether the coefficient is negative.
    pub(crate) fn coeff_prefix(&self) -> (bool, Option<String>) {
        if self.is_negative_rational() {
            let pos = -self;
            if pos.is_one() {
                (true, None)
            } else {
                (true, Some(pos.to_string()))
            }
        } else if self.is_one() {
            (false, None)
        } else {
            (false, Some(self.to_string()))
        }
    }
}

/// A tower `Q = K_0 ⊂ K_1 ⊂ ... ⊂ K_n` identified by its top level.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTower {
    top: Option<Arc<Level>>,
}

/// Result of [`FieldTower::extend`]: the (possibly unchanged) tower and a root
/// of the requested polynomial in it.
#[derive(Clone, Debug)]
pub struct Extension {
    pub tower: FieldTower,
    pub root: Elem,
}

impl FieldTower {
    pub fn rationals() -> FieldTower {
        FieldTower { top: None }
    }

    /// Smallest tower of the session containing every given element: the
    /// tower of the deepest one.
    pub fn containing<'a>(elems: impl IntoIterator<Item = &'a Elem>) -> FieldTower {
        let mut top: Option<Arc<Level>> = None;
        for e in elems {
            if let Elem::Alg(l, _) = e {
                if top.as_ref().map_or(true, |t| t.depth < l.depth) {
                    top = Some(l.clone());
                }
            }
        }
        FieldTower { top }
    }

    pub fn top(&self) -> Option<&Arc<Level>> {
        self.top.as_ref()
    }

    pub fn depth(&self) -> usize {
        self.top.as_ref().map_or(0, |l| l.depth)
    }

    pub fn is_rationals(&self) -> bool {
        self.top.is_none()
    }

    pub fn degree(&self) -> usize {
        self.levels().iter().map(|l| l.degree()).product()
    }

    /// Levels from the bottom (depth 1) to the top.
    pub fn levels(&self) -> Vec<Arc<Level>> {
        let mut out = Vec::new();
        let mut cur = self.top.clone();
        while let Some(l) = cur {
            cur = l.parent.clone();
            out.push(l);
        }
        out.reverse();
        out
    }

    pub fn parent(&self) -> FieldTower {
        FieldTower {
            top: self.top.as_ref().and_then(|l| l.parent.clone()),
        }
    }

    pub fn generator(&self) -> Option<Elem> {
        self.top.as_ref().map(|l| {
            if l.degree() == 1 {
                -&l.minpoly[0]
            } else {
                Elem::Alg(l.clone(), vec![Elem::zero(), Elem::one()])
            }
        })
    }

    /// True when `self` is `base` or an extension built on top of it.
    pub fn extends(&self, base: &FieldTower) -> bool {
        let bd = base.depth();
        if bd > self.depth() {
            return false;
        }
        let mut cur = self.top.clone();
        while cur.as_ref().map_or(0, |l| l.depth) > bd {
            cur = cur.and_then(|l| l.parent.clone());
        }
        match (&cur, &base.top) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || **a == **b,
            _ => false,
        }
    }

    pub fn degree_over(&self, base: &FieldTower) -> usize {
        debug_assert!(self.extends(base));
        self.levels()
            .iter()
            .skip(base.depth())
            .map(|l| l.degree())
            .product()
    }

    /// Adjoins a root of `minpoly` without checking irreducibility. The
    /// polynomial is made monic; it must have degree at least 2.
    pub fn adjoin_unchecked(&self, name: &str, minpoly: &UPoly) -> FieldTower {
        let m = minpoly.monic();
        debug_assert!(m.degree().unwrap_or(0) >= 2);
        let level = Level {
            parent: self.top.clone(),
            depth: self.depth() + 1,
            name: name.to_string(),
            minpoly: m.into_coeffs(),
        };
        FieldTower {
            top: Some(Arc::new(level)),
        }
    }

    /// Adjoins a root of an irreducible polynomial, verifying irreducibility.
    pub fn adjoin(&self, name: &str, minpoly: &UPoly) -> Result<FieldTower, AlgebraError> {
        if minpoly.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let deg = minpoly.degree().unwrap();
        if deg < 2 {
            return Err(AlgebraError::NotIrreducible(format!(
                "degree {deg} polynomial does not define a proper extension"
            )));
        }
        let factors = super::factor::factor(minpoly, self)?;
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(AlgebraError::NotIrreducible(minpoly.display("x").to_string()));
        }
        Ok(self.adjoin_unchecked(name, minpoly))
    }

    /// Extends the tower by a root of `minpoly` (monic over this tower). An
    /// irreducible polynomial adds one level; a reducible one adds a level for
    /// an irreducible factor of maximal degree; a linear factor of maximal
    /// degree leaves the tower unchanged and returns its root.
    pub fn extend(&self, minpoly: &UPoly) -> Result<Extension, AlgebraError> {
        if minpoly.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        if !minpoly.lc().is_one() {
            return Err(AlgebraError::NonMonic);
        }
        if minpoly.degree() == Some(0) {
            return Err(AlgebraError::ConstantPolynomial);
        }
        let factors = super::factor::factor(minpoly, self)?;
        let maxdeg = factors.iter().map(|(f, _)| f.degree().unwrap()).max().unwrap();
        let chosen = factors
            .iter()
            .find(|(f, _)| f.degree().unwrap() == maxdeg)
            .map(|(f, _)| f.clone())
            .unwrap();
        Ok(self.extend_irreducible(&chosen))
    }

    /// Adjoins a root of an already irreducible monic factor (linear factors
    /// return their root without a new level).
    pub fn extend_irreducible(&self, factor: &UPoly) -> Extension {
        let f = factor.monic();
        if f.degree() == Some(1) {
            return Extension {
                tower: self.clone(),
                root: -&f.coeff(0),
            };
        }
        let name = format!("a{}", self.depth() + 1);
        let tower = self.adjoin_unchecked(&name, &f);
        let root = tower.generator().unwrap();
        Extension { tower, root }
    }

    /// Coordinates of `x` (an element of this tower) as a vector over `base`,
    /// of length `degree_over(base)`.
    pub fn coords_over(&self, x: &Elem, base: &FieldTower) -> Vec<Elem> {
        let mut out = Vec::with_capacity(self.degree_over(base));
        coords_rec(x, &self.levels()[base.depth()..], &mut out);
        out
    }

    /// Inverse of [`coords_over`].
    pub fn from_coords(&self, coords: &[Elem], base: &FieldTower) -> Elem {
        let levels = self.levels();
        let mut idx = 0;
        let e = from_coords_rec(coords, &levels[base.depth()..], &mut idx);
        debug_assert_eq!(idx, coords.len());
        e
    }

    /// Minimal polynomial of `x` over `base` (monic), found by linear
    /// dependence of successive powers.
    pub fn min_poly_over(&self, x: &Elem, base: &FieldTower) -> UPoly {
        let n = self.degree_over(base);
        let mut powers: Vec<Vec<Elem>> = Vec::new();
        let mut p = Elem::one();
        for k in 0..=n {
            powers.push(self.coords_over(&p, base));
            // columns = powers; find kernel vector with last coefficient 1
            let cols = powers.len();
            let rows = n;
            let mut mat: Vec<Vec<Elem>> = (0..rows)
                .map(|r| (0..cols).map(|c| powers[c][r].clone()).collect())
                .collect();
            let kernel = super::linalg::nullspace(&mut mat, cols);
            if let Some(v) = kernel.first() {
                // a relation among 1..x^k with nonzero top coefficient
                let top = v[cols - 1].clone();
                debug_assert!(!top.is_zero());
                let coeffs: Vec<Elem> = v.iter().map(|c| c / &top).collect();
                return UPoly::from_coeffs(coeffs);
            }
            if k < n {
                p = &p * x;
            }
        }
        unreachable!("minimal polynomial degree exceeds field degree")
    }

    /// Applies the field homomorphism that sends each level generator above
    /// `base` to the matching entry of `images` (elements of some other tower
    /// extending `base`).
    pub fn embed(&self, x: &Elem, base: &FieldTower, images: &[Elem]) -> Elem {
        let levels = self.levels();
        embed_rec(x, &levels[base.depth()..], images)
    }
}

fn coords_rec(x: &Elem, levels: &[Arc<Level>], out: &mut Vec<Elem>) {
    match levels.split_last() {
        None => out.push(x.clone()),
        Some((top, rest)) => {
            for c in x.level_coeffs(top) {
                coords_rec(&c, rest, out);
            }
        }
    }
}

fn from_coords_rec(coords: &[Elem], levels: &[Arc<Level>], idx: &mut usize) -> Elem {
    match levels.split_last() {
        None => {
            let e = coords[*idx].clone();
            *idx += 1;
            e
        }
        Some((top, rest)) => {
            let cs: Vec<Elem> = (0..top.degree())
                .map(|_| from_coords_rec(coords, rest, idx))
                .collect();
            Elem::from_level_coeffs(top, cs)
        }
    }
}

fn embed_rec(x: &Elem, levels: &[Arc<Level>], images: &[Elem]) -> Elem {
    match levels.split_last() {
        None => x.clone(),
        Some((top, rest)) => {
            if x.depth() < top.depth {
                return embed_rec(x, rest, images);
            }
            let img = &images[levels.len() - 1];
            let cs = x.level_coeffs(top);
            // Horner in the image of the generator
            let mut acc = Elem::zero();
            for c in cs.iter().rev() {
                acc = &(&acc * img) + &embed_rec(c, rest, images);
            }
            acc
        }
    }
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        for l in self.levels() {
            write!(f, "({}: {})", l.name, l.minpoly().display(&l.name))?;
        }
        Ok(())
    }
}
