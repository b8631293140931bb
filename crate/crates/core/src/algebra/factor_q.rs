//! Factorization of rational univariate polynomials (Zassenhaus): modular
//! factorization by Cantor-Zassenhaus, Hensel lifting, and exhaustive
//! recombination of the lifted factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Elem;
use super::poly::UPoly;

type ZPoly = Vec<BigInt>;
type PPoly = Vec<u64>;

/// Factors a rational polynomial into monic irreducible factors with
/// multiplicities. Constants yield an empty list.
pub fn factor_rational(f: &UPoly) -> Vec<(UPoly, u32)> {
    debug_assert!(f.is_rational());
    let mut out = Vec::new();
    for (s, mult) in f.squarefree_decomposition() {
        for g in factor_squarefree(&s) {
            out.push((g, mult));
        }
    }
    out
}

/// Irreducible monic factors of a squarefree rational polynomial.
pub fn factor_squarefree(f: &UPoly) -> Vec<UPoly> {
    let z = to_primitive_int(f);
    let mut out = Vec::new();
    for g in factor_zpoly(z) {
        out.push(from_int(&g).monic());
    }
    out
}

fn to_primitive_int(f: &UPoly) -> ZPoly {
    let qs: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|e| e.as_rational().expect("rational polynomial").clone())
        .collect();
    let mut den = BigInt::one();
    for q in &qs {
        den = den.lcm(q.denom());
    }
    let z: ZPoly = qs.iter().map(|q| (q * &den).to_integer()).collect();
    primitive(&z)
}

fn from_int(z: &ZPoly) -> UPoly {
    UPoly::from_coeffs(z.iter().map(|c| Elem::from_bigint(c.clone())).collect())
}

fn primitive(z: &ZPoly) -> ZPoly {
    let mut g = BigInt::zero();
    for c in z {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return z.clone();
    }
    if z.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    z.iter().map(|c| c / &g).collect()
}

fn trim(z: &mut ZPoly) {
    while z.last().is_some_and(|c| c.is_zero()) {
        z.pop();
    }
}

/// Factors a primitive squarefree integer polynomial into primitive
/// irreducible factors.
fn factor_zpoly(mut f: ZPoly) -> Vec<ZPoly> {
    trim(&mut f);
    let mut out = Vec::new();
    // strip the factor x
    if f.len() > 1 && f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    if f.len() <= 1 {
        return out;
    }
    if f.len() == 2 {
        out.push(primitive(&f));
        return out;
    }
    // monic transform g(y) = lc^(n-1) f(y / lc)
    let n = f.len() - 1;
    let lc = f[n].clone();
    let mut gm: ZPoly = vec![BigInt::one(); n + 1];
    let mut pw = BigInt::one();
    for i in (0..n).rev() {
        gm[i] = &f[i] * &pw;
        pw *= &lc;
    }
    for h in factor_monic(gm) {
        // h(y) with y = lc x
        let mut back = Vec::with_capacity(h.len());
        let mut pw = BigInt::one();
        for c in &h {
            back.push(c * &pw);
            pw *= &lc;
        }
        out.push(primitive(&back));
    }
    out
}

fn factor_monic(g: ZPoly) -> Vec<ZPoly> {
    let n = g.len() - 1;
    if n == 1 {
        return vec![g];
    }
    let (p, modular) = choose_prime(&g);
    if modular.len() == 1 {
        return vec![g];
    }
    let bound = mignotte_bound(&g);
    let mut k = 1u32;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= &bound * 2 {
        pk *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(&g, &modular, p, k);
    recombine(g, lifted, &pk)
}

fn mignotte_bound(g: &ZPoly) -> BigInt {
    let n = g.len() - 1;
    let norm2: BigInt = g.iter().map(|c| c * c).sum();
    let root = norm2.sqrt() + 1;
    root << n
}

const PRIMES: [u64; 40] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
];

fn choose_prime(g: &ZPoly) -> (u64, Vec<PPoly>) {
    let mut best: Option<(u64, Vec<PPoly>)> = None;
    let mut tried = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut candidates: Vec<u64> = PRIMES.to_vec();
    let mut extra = 181u64;
    let mut idx = 0;
    loop {
        if idx == candidates.len() {
            while !is_prime(extra) {
                extra += 2;
            }
            candidates.push(extra);
            extra += 2;
        }
        let p = candidates[idx];
        idx += 1;
        let gp = reduce(g, p);
        if !p_squarefree(&gp, p) {
            continue;
        }
        let factors = factor_mod_p(&gp, p, &mut rng);
        let better = best.as_ref().is_none_or(|(_, b)| factors.len() < b.len());
        if better {
            best = Some((p, factors));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.unwrap()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn reduce(g: &ZPoly, p: u64) -> PPoly {
    let pb = BigInt::from(p);
    let mut out: PPoly = g.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    ptrim(&mut out);
    out
}

// ---- arithmetic in F_p[x] ----

fn ptrim(a: &mut PPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pinv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn padd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let n = a.len().max(b.len());
    let mut out: PPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    ptrim(&mut out);
    out
}

fn psub(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let n = a.len().max(b.len());
    let mut out: PPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    ptrim(&mut out);
    out
}

fn pmul(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn pdivrem(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = pinv(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let t = r[k + db] * inv % p;
        if t == 0 {
            continue;
        }
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - t * bi % p) % p;
        }
        q[k] = t;
    }
    r.truncate(db);
    ptrim(&mut r);
    ptrim(&mut q);
    (q, r)
}

fn pmonic(a: &PPoly, p: u64) -> PPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = pinv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn pgcd(a: &PPoly, b: &PPoly, p: u64) -> PPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = pdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    pmonic(&a, p)
}

/// Returns `(s, t)` with `s*a + t*b = 1` for coprime `a`, `b`.
fn pext_gcd(a: &PPoly, b: &PPoly, p: u64) -> (PPoly, PPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s = psub(&s0, &pmul(&q, &s1, p), p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    debug_assert_eq!(r0.len(), 1);
    let inv = pinv(r0[0], p);
    let scale = |v: &PPoly| -> PPoly { v.iter().map(|&c| c * inv % p).collect() };
    (scale(&s0), scale(&t0))
}

fn pderiv(a: &PPoly, p: u64) -> PPoly {
    let mut out: PPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    ptrim(&mut out);
    out
}

fn p_squarefree(a: &PPoly, p: u64) -> bool {
    pgcd(a, &pderiv(a, p), p).len() == 1
}

fn ppow_mod(base: &PPoly, e: &BigUint, m: &PPoly, p: u64) -> PPoly {
    let mut acc = vec![1u64];
    let b = pdivrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = pdivrem(&pmul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = pdivrem(&pmul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p.
fn factor_mod_p(f: &PPoly, p: u64, rng: &mut ChaCha8Rng) -> Vec<PPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        equal_degree(&g, d, p, rng, &mut out);
    }
    out.sort();
    out
}

fn distinct_degree(f: &PPoly, p: u64) -> Vec<(PPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: PPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    let pe = BigUint::from(p);
    while 2 * d <= f.len() - 1 {
        h = ppow_mod(&h, &pe, &f, p);
        let g = pgcd(&psub(&h, &x, p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = pdivrem(&f, &g, p).0;
            h = pdivrem(&h, &f, p).1;
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

fn equal_degree(f: &PPoly, d: usize, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<PPoly>) {
    let n = f.len() - 1;
    if n == d {
        out.push(pmonic(f, p));
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
    loop {
        let mut a: PPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        ptrim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = ppow_mod(&a, &e, f, p);
        let g = pgcd(&psub(&b, &vec![1], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = pdivrem(f, &g, p).0;
            equal_degree(&g, d, p, rng, out);
            equal_degree(&h, d, p, rng, out);
            return;
        }
    }
}

// ---- Hensel lifting ----

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn symmetric_mod(z: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    let mut out: ZPoly = z
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut out);
    out
}

fn to_z(a: &PPoly) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `g = a*b (mod p)` with monic `a`, `b` to `g = A*B (mod p^k)`.
fn hensel_pair(g: &ZPoly, a: &PPoly, b: &PPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (s, t) = pext_gcd(a, b, p);
    let pb = BigInt::from(p);
    let mut az = to_z(a);
    let mut bz = to_z(b);
    let mut pj = pb.clone();
    for _ in 1..k {
        let ab = zmul(&az, &bz);
        let n = g.len().max(ab.len());
        let diff: ZPoly = (0..n)
            .map(|i| {
                g.get(i).cloned().unwrap_or_default() - ab.get(i).cloned().unwrap_or_default()
            })
            .collect();
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let ep = reduce(&e, p);
        if !ep.is_empty() {
            let te = pmul(&t, &ep, p);
            let (q, da) = pdivrem(&te, a, p);
            let db = padd(&pmul(&s, &ep, p), &pmul(&q, b, p), p);
            for (i, c) in da.iter().enumerate() {
                az[i] += &pj * BigInt::from(*c);
            }
            for (i, c) in db.iter().enumerate() {
                bz[i] += &pj * BigInt::from(*c);
            }
        }
        pj *= &pb;
    }
    (az, bz)
}

fn hensel_lift_all(g: &ZPoly, factors: &[PPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        return vec![g.clone()];
    }
    let mid = factors.len() / 2;
    let mut a = vec![1u64];
    for f in &factors[..mid] {
        a = pmul(&a, f, p);
    }
    let mut b = vec![1u64];
    for f in &factors[mid..] {
        b = pmul(&b, f, p);
    }
    let (az, bz) = hensel_pair(g, &a, &b, p, k);
    let pk = BigInt::from(p).pow(k);
    let az = symmetric_mod(&az, &pk);
    let bz = symmetric_mod(&bz, &pk);
    let mut out = hensel_lift_all(&az, &factors[..mid], p, k);
    out.extend(hensel_lift_all(&bz, &factors[mid..], p, k));
    out
}

// ---- recombination ----

fn zdiv_monic(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() <= db {
        return None;
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let t = r[k + db].clone();
        if t.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            r[k + i] -= &t * bi;
        }
        q[k] = t;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

fn recombine(mut g: ZPoly, mut lifted: Vec<ZPoly>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        let r = lifted.len();
        let mut combo: Vec<usize> = (0..s).collect();
        loop {
            let mut h = vec![BigInt::one()];
            for &i in &combo {
                h = symmetric_mod(&zmul(&h, &lifted[i]), pk);
            }
            let const_ok = h[0].is_zero() || (&g[0] % &h[0]).is_zero();
            if const_ok {
                if let Some(q) = zdiv_monic(&g, &h) {
                    out.push(h);
                    g = q;
                    for &i in combo.iter().rev() {
                        lifted.remove(i);
                    }
                    found = true;
                    break;
                }
            }
            if !next_combination(&mut combo, r) {
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if g.len() > 1 {
        out.push(g);
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
