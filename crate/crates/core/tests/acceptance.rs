//! Acceptance battery: one PASS/FAIL line per criterion, exact checks only.
//! Run with `cargo test -p branchdiv --test acceptance`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use branchdiv::algebra::form::Form3;
use branchdiv::algebra::linalg;
use branchdiv::algebra::parse::parse_form;
use branchdiv::algebra::Elem;
use branchdiv::divisor::{intersect, Divisor, RationalFunction, Value};
use branchdiv::equiv::{
    canonical_divisor, complete_series, equivalence_witness, genus, is_equivalent, l_dim,
};
use branchdiv::fixtures;
use branchdiv::maps::{eval_form, projective_series, BirationalMap};
use branchdiv::oracle::{fiber_comparison, oracle_genus};
use branchdiv::puiseux::{branch_support, branches_at, default_precision, Branch};
use branchdiv::series::LinearSeries;
use branchdiv::{Error, PlaneCurve, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DEFAULT_SEED: u64 = 20_240_917;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn from(res: Result<(bool, String)>) -> Outcome {
        match res {
            Ok((pass, detail)) => Outcome { pass, detail },
            Err(e) => Outcome {
                pass: false,
                detail: format!("error {}: {e}", e.code()),
            },
        }
    }
}

/// Every series built anywhere in a run, as `(label, r, n)`.
static SERIES_SEEN: Mutex<Vec<(String, i64, i64)>> = Mutex::new(Vec::new());

fn track(label: &str, s: &LinearSeries) {
    SERIES_SEEN.lock().unwrap().push((label.to_string(), s.dim(), s.order()));
}

fn form(s: &str) -> Form3 {
    parse_form(s, &Default::default()).expect("valid form")
}

fn q(n: i64) -> Elem {
    Elem::from_int(n)
}

fn rand_coeff(rng: &mut ChaCha8Rng) -> Elem {
    let c = rng.gen_range(1..=3i64);
    q(if rng.gen_bool(0.5) { c } else { -c })
}

/// A random form of degree `e` with up to `terms` monomials.
fn rand_form(rng: &mut ChaCha8Rng, e: u32, terms: usize) -> Form3 {
    let mons = Form3::monomials(e);
    loop {
        let mut f = Form3::zero(e);
        for _ in 0..terms {
            let m = mons[rng.gen_range(0..mons.len())];
            f.add_term(m, &rand_coeff(rng));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

fn rand_function(rng: &mut ChaCha8Rng, c: &Arc<PlaneCurve>, max_deg: u32) -> RationalFunction {
    loop {
        let e = rng.gen_range(1..=max_deg);
        let num = rand_form(rng, e, 3);
        let den = rand_form(rng, e, 3);
        if c.divides(&num) || c.divides(&den) {
            continue;
        }
        if let Ok(f) = RationalFunction::new(c, num, den) {
            if !f.is_constant() {
                return f;
            }
        }
    }
}

const POOL_LINES: [&str; 7] = ["X", "Y", "Z", "X - Z", "X + Z", "Y - Z", "X + Y + Z"];

/// Branches at singular points and on a few fixed lines, deduplicated.
fn branch_pool(c: &Arc<PlaneCurve>) -> Result<Vec<Arc<Branch>>> {
    lines_pool(c, &POOL_LINES)
}

fn lines_pool(c: &Arc<PlaneCurve>, lines: &[&str]) -> Result<Vec<Arc<Branch>>> {
    let mut set = BTreeSet::new();
    for p in c.singular_points() {
        set.extend(branches_at(c, &p)?.iter().cloned());
    }
    for l in lines {
        let f = form(l);
        if !c.divides(&f) {
            set.extend(branch_support(c, &f)?);
        }
    }
    Ok(set.into_iter().collect())
}

fn rand_effective(rng: &mut ChaCha8Rng, c: &Arc<PlaneCurve>, pool: &[Arc<Branch>], deg: i64) -> Divisor {
    loop {
        let mut d = Divisor::zero(c);
        let mut left = deg;
        while left > 0 {
            let fits: Vec<&Arc<Branch>> = pool.iter().filter(|b| b.conj() as i64 <= left).collect();
            let Some(b) = fits.choose(rng) else { break };
            d.add_at(b, 1);
            left -= b.conj() as i64;
        }
        if left == 0 {
            return d;
        }
    }
}

fn show(d: &Divisor) -> String {
    d.render()
}

// 1. Puiseux soundness
fn c1(_rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let curves = fixtures::all();
    let mut branches = 0;
    let mut bad = Vec::new();
    let degrees: BTreeSet<u32> = curves.iter().map(|c| c.degree()).collect();
    for c in &curves {
        let d = c.degree();
        let n = default_precision(d, d);
        let pool = lines_pool(c, &["X", "Y", "Z", "X + Y + Z"])?;
        let mut centers = BTreeSet::new();
        for b in &pool {
            branches += 1;
            let residual_ok = b.residual(c, n + 1).is_zero_to_prec();
            let primitive = b.support_gcd(n) == 1;
            if !residual_ok || !primitive {
                bad.push(b.label(c.name()));
            }
            centers.insert(b.center().clone());
            writeln!(log, "c1 {} {}", b.describe(c.name(), 6), b.conj()).unwrap();
        }
        for p in centers {
            let sum: usize = branches_at(c, &p)?.iter().map(|b| b.e() * b.conj_point()).sum();
            if sum != c.multiplicity(&p) {
                bad.push(format!("{} multiplicity at {p}", c.name()));
            }
        }
    }
    let corpus_ok = curves.len() >= 12 && degrees.contains(&2) && degrees.contains(&5);
    Ok((
        bad.is_empty() && corpus_ok,
        format!("{} curves, {} branches, {} failures {:?}", curves.len(), branches, bad.len(), bad),
    ))
}

// 2. Bezout totals
fn c2(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let curves: Vec<_> = fixtures::all().into_iter().filter(|c| c.degree() <= 4).collect();
    let mut fails = 0;
    let mut done = 0;
    while done < 200 {
        let c = curves.choose(rng).unwrap();
        let e = rng.gen_range(1..=3u32);
        let phi = rand_form(rng, e, 4);
        if c.divides(&phi) {
            continue;
        }
        done += 1;
        let total = intersect(c, &phi)?.degree();
        let want = (c.degree() * e) as i64;
        if total != want {
            fails += 1;
        }
        writeln!(log, "c2 {} {} {}", c.name(), phi, total).unwrap();
    }
    Ok((fails == 0, format!("{done} pairs, {fails} mismatches")))
}

// 3. Resultant oracle
fn c3(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let curves = fixtures::all();
    let mut fails = 0;
    let mut fibers = 0;
    for case in 0..100 {
        let c = curves.choose(rng).unwrap();
        let phi = loop {
            let e = rng.gen_range(1..=2);
            let f = rand_form(rng, e, 3);
            if !c.divides(&f) {
                break f;
            }
        };
        let oracle_seed: u64 = rng.gen();
        let (seed, rows) = fiber_comparison(c, &phi, oracle_seed)?;
        let total: usize = rows.iter().map(|r| r.size * r.resultant_order).sum();
        let ok = rows.iter().all(|r| r.branch_sum == r.resultant_order)
            && total == (c.degree() * phi.degree()) as usize;
        if !ok {
            fails += 1;
        }
        fibers += rows.len();
        writeln!(log, "c3 {case} {} {} seed={seed} {:?}", c.name(), phi, rows).unwrap();
    }
    Ok((fails == 0, format!("100 cases, {fibers} fibers, {fails} mismatches")))
}

// 4. Divisor laws
fn c4(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut pairs = 0;
    for c in fixtures::all() {
        for _ in 0..100 {
            let max = if c.degree() <= 3 && rng.gen_bool(0.2) { 2 } else { 1 };
            let f = rand_function(rng, &c, max);
            let g = rand_function(rng, &c, 1);
            pairs += 1;
            let df = f.divisor()?;
            let dg = g.divisor()?;
            let fg = f.mul(&g)?;
            let mut ok = df.degree() == 0 && dg.degree() == 0;
            if !fg.is_constant() {
                ok &= fg.divisor()? == &df + &dg;
            } else {
                ok &= (&df + &dg).is_zero();
            }
            ok &= f.inverse()?.divisor()? == -&df;
            let k = rand_coeff(rng);
            ok &= RationalFunction::constant(&c, k).divisor()?.is_zero();
            if !ok {
                fails.push(format!("{}: {}", c.name(), f.render()));
            }
            writeln!(log, "c4 {} {} | {}", c.name(), show(&df), show(&dg)).unwrap();
        }
    }
    Ok((fails.is_empty(), format!("{pairs} pairs, {} failures {:?}", fails.len(), fails)))
}

/// Generic fiber cardinality: geometric points of `num - lambda den` off the
/// common zeros of numerator and denominator, maximized over a few values.
fn fiber_cardinality(rng: &mut ChaCha8Rng, f: &RationalFunction) -> Result<usize> {
    let c = f.curve();
    let mut best = 0;
    for _ in 0..3 {
        let lambda = Elem::from_ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=97));
        let cut = f.num() - &f.den().scale(&lambda);
        if c.divides(&cut) {
            continue;
        }
        let mut count = 0;
        for p in c.intersection_points(&cut)?.iter() {
            let base = f.num().eval(p.coords()).is_zero() && f.den().eval(p.coords()).is_zero();
            if !base {
                count += p.size();
            }
        }
        best = best.max(count);
    }
    Ok(best)
}

// 5. Level-set totals
fn c5(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let curves = fixtures::all();
    let mut fails = Vec::new();
    for i in 0..20 {
        let c = &curves[i % curves.len()];
        let f = rand_function(rng, c, 2);
        let mut totals = Vec::new();
        for _ in 0..5 {
            let lambda = Value::Finite(Elem::from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=9)));
            totals.push(f.level_set(&lambda)?.degree());
        }
        totals.push(f.level_set(&Value::Infinity)?.degree());
        let card = fiber_cardinality(rng, &f)? as i64;
        if totals.iter().any(|&t| t != card) {
            fails.push(format!("{} {} {:?} vs {card}", c.name(), f.render(), totals));
        }
        writeln!(log, "c5 {} {} {:?} {card}", c.name(), f.render(), totals).unwrap();
    }
    Ok((fails.is_empty(), format!("20 functions, {} failures {:?}", fails.len(), fails)))
}

/// Rank of the forms restricted to a smooth branch, from series coefficients
/// past the Bezout bound.
fn rank_on_branch(c: &Arc<PlaneCurve>, forms: &[Form3]) -> Result<usize> {
    let probe = form("X + 2*Y + 5*Z");
    let b = branch_support(c, &probe)?
        .into_iter()
        .find(|b| c.multiplicity(b.center()) == 1)
        .expect("a smooth branch on the probe line");
    let e = forms[0].degree();
    let n = (c.degree() * e) as usize + 1;
    let base = c.base();
    let rows: Vec<Vec<Elem>> = forms
        .iter()
        .map(|f| {
            let s = b.form_series(f, n);
            (0..n).flat_map(|k| b.tower().coords_over(&s.coeff(k), base)).collect()
        })
        .collect();
    let width = rows[0].len();
    Ok(linalg::rank(&rows, width))
}

// 6. Series dimension with planted multiples; r <= n everywhere
fn c6(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let names = ["conic", "circle", "cusp", "node", "smooth_cubic", "ell37", "tacnode", "node_quartic"];
    let mut fails = Vec::new();
    for i in 0..20 {
        let c = fixtures::curve(names[i % names.len()]).unwrap();
        let d = c.degree();
        let e = d + rng.gen_range(0..=1u32);
        let k = rng.gen_range(1..=3usize);
        let mut gens: Vec<Form3> = (0..k).map(|_| rand_form(rng, e, 4)).collect();
        let room = Form3::monomials(e - d).len();
        let planted = rng.gen_range(1..=room.min(2));
        let cofactors: Vec<Form3> = (0..planted).map(|_| rand_form(rng, e - d, 2)).collect();
        let mons = Form3::monomials(e - d);
        let vecs: Vec<Vec<Elem>> = cofactors.iter().map(|g| g.to_vector(&mons)).collect();
        let h_want = linalg::rank(&vecs, mons.len()) as i64 - 1;
        gens.extend(cofactors.iter().map(|g| g * c.form()));
        // hide the multiples inside random combinations
        let inputs: Vec<Form3> = (0..gens.len())
            .map(|j| {
                let mut acc = gens[j].clone();
                for g in &gens {
                    acc = &acc + &g.scale(&q(rng.gen_range(-2..=2)));
                }
                acc
            })
            .filter(|f| !f.is_zero())
            .collect();
        let big = Form3::monomials(e);
        let in_vecs: Vec<Vec<Elem>> = inputs.iter().map(|f| f.to_vector(&big)).collect();
        let r_big = linalg::rank(&in_vecs, big.len()) as i64 - 1;
        let r_want = rank_on_branch(&c, &inputs)? as i64 - 1;
        let s = match LinearSeries::from_system(&c, &inputs) {
            Ok(s) => s,
            Err(Error::AllFormsContainCurve) if r_want < 0 => continue,
            Err(e) => return Err(e),
        };
        track("c6", &s);
        let ok = s.system_dim() == r_big
            && s.dim() == r_want
            && s.h() == r_big - r_want - 1
            && s.dim() == s.system_dim() - s.h() - 1
            && (s.h() == h_want || r_big - r_want - 1 == h_want);
        if !ok {
            fails.push(format!("{} R={} h={} r={} want r={r_want} h={h_want}", c.name(), s.system_dim(), s.h(), s.dim()));
        }
        writeln!(log, "c6 {} e={e} R={} h={} r={} n={}", c.name(), s.system_dim(), s.h(), s.dim(), s.order()).unwrap();
    }
    Ok((fails.is_empty(), format!("20 systems, {} failures {:?}", fails.len(), fails)))
}

fn c6_bound() -> (bool, String) {
    let seen = SERIES_SEEN.lock().unwrap();
    let bad: Vec<_> = seen.iter().filter(|(_, r, n)| r > n).cloned().collect();
    (bad.is_empty(), format!("r <= n on all {} series built, violations {:?}", seen.len(), bad))
}

fn anchor_branch(c: &Arc<PlaneCurve>, p: [i64; 3]) -> Result<Arc<Branch>> {
    let pt = c.point([q(p[0]), q(p[1]), q(p[2])])?;
    Ok(branches_at(c, &pt)?[0].clone())
}

// 7. dim L(G) = t + 1
fn c7(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let cusp = fixtures::curve("cusp").unwrap();
    let g0 = anchor_branch(&cusp, [0, 0, 1])?;
    let cubic = fixtures::curve("smooth_cubic").unwrap();
    let p = anchor_branch(&cubic, [0, 1, 0])?;
    let anchors = [
        (Divisor::single(&cusp, &g0, 2), 3),
        (Divisor::single(&cubic, &p, 1), 1),
        (Divisor::single(&cubic, &p, 3), 3),
    ];
    for (g, want) in &anchors {
        let l = l_dim(g)?;
        writeln!(log, "c7 anchor {} {l}", show(g)).unwrap();
        if l != *want {
            fails.push(format!("anchor {} gave {l}", show(g)));
        }
    }
    let mut checked = 0;
    for name in ["cusp", "node", "smooth_cubic", "ell37", "node_quartic"] {
        let c = fixtures::curve(name).unwrap();
        let pool = branch_pool(&c)?;
        for deg in 0..=6 {
            let g = rand_effective(rng, &c, &pool, deg);
            let l = l_dim(&g)?;
            let s = complete_series(&g)?;
            track("c7", &s);
            checked += 1;
            let contains = s.member(&g)?.is_some();
            let ok = l as i64 == s.dim() + 1 && s.order() == deg && contains;
            if !ok {
                fails.push(format!("{name} {} l={l} t={}", show(&g), s.dim()));
            }
            writeln!(log, "c7 {name} {} l={l} t={}", show(&g), s.dim()).unwrap();
        }
    }
    Ok((fails.is_empty(), format!("3 anchors, {checked} divisors, {} failures {:?}", fails.len(), fails)))
}

// 8. Riemann-Roch battery
fn c8(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut checked = 0;
    for (name, g_want) in [("node", 0i64), ("cusp", 0), ("smooth_cubic", 1), ("node_quartic", 2)] {
        let c = fixtures::curve(name).unwrap();
        let g = genus(&c)?;
        if g != g_want || oracle_genus(&c)? != g_want {
            fails.push(format!("{name} genus {g}"));
        }
        let k = canonical_divisor(&c)?;
        if k.degree() != 2 * g - 2 {
            fails.push(format!("{name} canonical degree {}", k.degree()));
        }
        let pool = branch_pool(&c)?;
        for deg in -2..=(2 * g + 3) {
            for _ in 0..2 {
                let pad = rng.gen_range(0..=2);
                let pos = rand_effective(rng, &c, &pool, deg.max(0) + pad);
                let neg = rand_effective(rng, &c, &pool, pos.degree() - deg);
                let gdiv = &pos - &neg;
                let l = l_dim(&gdiv)? as i64;
                let lk = l_dim(&(&k - &gdiv))? as i64;
                let bound = gdiv.degree() - g + 1;
                let mut ok = l >= bound && l - lk == bound;
                if gdiv.degree() >= 2 * g - 1 {
                    ok &= l == bound;
                }
                checked += 1;
                if !ok {
                    fails.push(format!("{name} {} l={l} l(K-G)={lk}", show(&gdiv)));
                }
                writeln!(log, "c8 {name} {} l={l} lk={lk}", show(&gdiv)).unwrap();
            }
        }
    }
    Ok((fails.is_empty(), format!("{checked} divisors on genus 0,0,1,2, {} failures {:?}", fails.len(), fails)))
}

fn witnessed(a: &Divisor, b: &Divisor) -> Result<bool> {
    match equivalence_witness(a, b)? {
        Some(f) => Ok(f.divisor()? == a - b),
        None => Ok(true),
    }
}

/// Symmetry through the reciprocal witness; transitivity and additivity
/// through the product of witnesses. The divisor of a product is supported
/// on the union of the factors' supports, so the product is checked by its
/// signed orders there.
fn witness_laws(a: &Divisor, b: &Divisor, third: &Divisor) -> Result<bool> {
    let Some(f) = equivalence_witness(a, b)? else { return Ok(true) };
    let mut ok = f.inverse()?.divisor()? == b - a;
    if let Some(g) = equivalence_witness(b, third)? {
        let fg = f.mul(&g)?;
        let (lhs, rhs) = (a + b, b + third);
        let expect = &lhs - &rhs;
        ok &= expect == a - third;
        let mut support = f.divisor()?.support();
        support.extend(g.divisor()?.support());
        for br in &support {
            let got = match fg.signed_ord(br) {
                Err(Error::ConstantFunction) => 0,
                other => other?,
            };
            ok &= got == expect.count_at(br);
        }
        ok &= expect.support().iter().all(|br| support.iter().any(|s| Arc::ptr_eq(s, br)));
    }
    Ok(ok)
}

// 9. Equivalence laws
fn c9(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut pairs = 0;
    for name in ["cusp", "node", "smooth_cubic", "ell37", "node_quartic"] {
        let c = fixtures::curve(name).unwrap();
        let pool = branch_pool(&c)?;
        for i in 0..30 {
            let (a, b, third, planted) = if i % 2 == 0 {
                let f = rand_function(rng, &c, 1);
                let l1 = Value::Finite(q(rng.gen_range(-9..=9)));
                let l2 = Value::Infinity;
                let l3 = Value::Finite(q(rng.gen_range(10..=19)));
                (f.level_set(&l1)?, f.level_set(&l2)?, f.level_set(&l3)?, true)
            } else {
                let deg = rng.gen_range(1..=3);
                let a = rand_effective(rng, &c, &pool, deg);
                let b = rand_effective(rng, &c, &pool, deg);
                let t = rand_effective(rng, &c, &pool, deg);
                (a, b, t, false)
            };
            pairs += 1;
            let ab = is_equivalent(&a, &b)?;
            let ba = is_equivalent(&b, &a)?;
            let bt = is_equivalent(&b, &third)?;
            let at = is_equivalent(&a, &third)?;
            let extra = rand_effective(rng, &c, &pool, 1);
            let shifted = is_equivalent(&(&a + &extra), &(&b + &extra))?;
            let sa = complete_series(&a)?;
            let sb = complete_series(&b)?;
            track("c9", &sa);
            track("c9", &sb);
            let same = sa.same_series(&sb)?;
            let mut ok = is_equivalent(&a, &a)?
                && ab == ba
                && (!(ab && bt) || at)
                && shifted == ab
                && same == ab
                && witnessed(&a, &b)?
                && witnessed(&a, &third)?;
            if planted {
                ok &= ab;
            }
            ok &= witness_laws(&a, &b, &third)?;
            if !ok {
                fails.push(format!("{name} {} ~ {}", show(&a), show(&b)));
            }
            writeln!(log, "c9 {name} {} | {} {ab} {bt} {at}", show(&a), show(&b)).unwrap();
        }
    }
    Ok((fails.is_empty(), format!("{pairs} pairs, {} failures {:?}", fails.len(), fails)))
}

fn rand_line(rng: &mut ChaCha8Rng) -> Form3 {
    loop {
        let f = rand_form(rng, 1, 3);
        if f.num_terms() >= 2 {
            return f;
        }
    }
}

// 10. Amalgamation
fn c10(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let mut fails = Vec::new();
    let mut cases: Vec<(String, LinearSeries, LinearSeries, Divisor)> = Vec::new();

    let conic = fixtures::curve("conic").unwrap();
    let p1 = LinearSeries::from_system(&conic, &[form("Y"), form("X")])?;
    let p2 = LinearSeries::from_system(&conic, &[form("Y"), form("Z")])?;
    cases.push(("conic pencils".into(), p1, p2, intersect(&conic, &form("Y"))?));

    for name in ["smooth_cubic", "node_quartic"] {
        let c = fixtures::curve(name).unwrap();
        let (l0, l1, l2) = (rand_line(rng), rand_line(rng), rand_line(rng));
        let s1 = LinearSeries::from_system(&c, &[l0.clone(), l1])?;
        let s2 = LinearSeries::from_system(&c, &[l0.clone(), l2])?;
        cases.push((format!("{name} line pencils"), s1, s2, intersect(&c, &l0)?));
    }

    let cusp = fixtures::curve("cusp").unwrap();
    let (q0, q1, q2) = (rand_form(rng, 2, 3), rand_form(rng, 2, 3), rand_form(rng, 2, 3));
    let s1 = LinearSeries::from_system(&cusp, &[q0.clone(), q1])?;
    let s2 = LinearSeries::from_system(&cusp, &[q0.clone(), q2])?;
    let g = s1.member_set(&q0)?;
    cases.push(("cusp conic pencils".into(), s1, s2, g));

    let cubic = fixtures::curve("smooth_cubic").unwrap();
    let (l0, l1, l2, m) = (rand_line(rng), rand_line(rng), rand_line(rng), rand_line(rng));
    let raw = LinearSeries::from_system(&cubic, &[&l0 * &m, &l1 * &m])?;
    let s1 = raw.remove_fixed(&intersect(&cubic, &m)?)?;
    let s2 = LinearSeries::from_system(&cubic, &[l0.clone(), l2])?;
    cases.push(("cubic pencil with removed part".into(), s1, s2, intersect(&cubic, &l0)?));

    for (label, s1, s2, g) in &cases {
        track("c10", s1);
        track("c10", s2);
        let am = LinearSeries::amalgamate(s1, s2, g)?;
        track("c10", &am);
        let ok = s1.is_subordinate(&am)?
            && s2.is_subordinate(&am)?
            && am.dim() >= s1.dim().max(s2.dim())
            && am.member(g)?.is_some();
        if !ok {
            fails.push(label.clone());
        }
        writeln!(log, "c10 {label}: {} + {} -> {}", s1.describe(), s2.describe(), am.describe()).unwrap();
    }
    let lines = LinearSeries::from_system(&conic, &[form("X"), form("Y"), form("Z")])?;
    let am = LinearSeries::amalgamate(&cases[0].1, &cases[0].2, &cases[0].3)?;
    let full = am.dim() == 2 && am.order() == 2 && am.same_series(&lines)?;
    if !full {
        fails.push("conic pencils do not give the lines".into());
    }
    Ok((fails.is_empty(), format!("{} pairs, g^2_2 rebuilt: {full}, failures {:?}", cases.len(), fails)))
}

/// Whether `vp` (a value at the source branch `pre`) is the image of `vb` (a
/// value at the target branch `b`) under the residue field embedding induced
/// by the map. The embedding sends the chart coordinates of the target
/// center to those of the image of the source center. `None` when the target
/// residue field is not generated by its center coordinates.
fn residue_match(forms: &[Form3; 3], pre: &Branch, b: &Branch, vb: &Value, vp: &Value) -> Option<bool> {
    let (xb, xp) = match (vb, vp) {
        (Value::Infinity, Value::Infinity) => return Some(true),
        (Value::Finite(x), Value::Finite(y)) => (x, y),
        _ => return Some(false),
    };
    let ct = b.center().tower();
    if b.tower().depth() != ct.depth() {
        return None;
    }
    let prec = 8;
    let ps = projective_series(pre, prec);
    let img: Vec<_> = forms.iter().map(|f| eval_form(f, &ps, prec)).collect();
    let k = img.iter().filter_map(|s| s.ord()).min()?;
    let center: Vec<Elem> = img.iter().map(|s| s.coeff(k)).collect();
    let chart = b.chart();
    let scale = center[chart.fixed()].inv();
    let (ia, ib) = chart.local();
    let mut gens = Vec::new();
    let mut t = ct.clone();
    while t.depth() > 0 {
        gens.push(t.generator()?);
        t = t.parent();
    }
    gens.reverse();
    let coords = b.center().coords();
    let mut images = Vec::new();
    for g in gens {
        if g == coords[ia] {
            images.push(&center[ia] * &scale);
        } else if g == coords[ib] {
            images.push(&center[ib] * &scale);
        } else {
            return None;
        }
    }
    let rationals = branchdiv::algebra::FieldTower::rationals();
    Some(ct.embed(xb, &rationals, &images) == *xp)
}

/// ord/val invariance at one branch pair.
fn invariant_at(
    forms: &[Form3; 3],
    f: &RationalFunction,
    pf: &RationalFunction,
    b: &Branch,
    pre: &Branch,
    fallback: &mut usize,
) -> Result<bool> {
    let (ob, vb) = f.ord_val(b)?;
    let (op, vp) = pf.ord_val(pre)?;
    if ob != op {
        return Ok(false);
    }
    Ok(match residue_match(forms, pre, b, &vb, &vp) {
        Some(ok) => ok,
        None => {
            *fallback += 1;
            let rationals = branchdiv::algebra::FieldTower::rationals();
            match (&vb, &vp) {
                (Value::Finite(x), Value::Finite(y)) => {
                    b.tower().min_poly_over(x, &rationals) == pre.tower().min_poly_over(y, &rationals)
                }
                _ => vb == vp,
            }
        }
    })
}

// 11. Birational invariance along the line <-> cusp maps
fn c11(rng: &mut ChaCha8Rng, log: &mut String) -> Result<(bool, String)> {
    let line = PlaneCurve::with_name("L", form("Y"))?;
    let cusp = fixtures::curve("cusp").unwrap();
    let phi = BirationalMap::new(&line, &cusp, [form("X^2*Z"), form("X^3"), form("Z^3")])?
        .with_inverse([form("Y"), form("0"), form("X")])?;
    let psi = BirationalMap::new(&cusp, &line, [form("Y"), form("0"), form("X")])?;
    let mut fails = Vec::new();

    let cusp_pool = branch_pool(&cusp)?;
    let line_pool = branch_pool(&line)?;
    let mut branch_checks = 0;
    let mut fallback = 0;
    for _ in 0..10 {
        // functions on the cusp pulled back to the line
        let f = rand_function(rng, &cusp, 2);
        let pf = phi.pullback_function(&f)?;
        let mut at: BTreeSet<Arc<Branch>> = f.divisor()?.support().into_iter().collect();
        at.extend(cusp_pool.iter().cloned());
        for b in &at {
            let pre = phi.preimage_branch(b)?;
            branch_checks += 1;
            let ok = invariant_at(phi.forms(), &f, &pf, b, &pre, &mut fallback)?;
            if !ok || !Arc::ptr_eq(&phi.transport_branch(&pre)?, b) {
                fails.push(format!("{} at {}", f.render(), b.label(cusp.name())));
            }
        }
        // functions on the line pulled back to the cusp
        let g = rand_function(rng, &line, 2);
        let pg = psi.pullback_function(&g)?;
        let mut at: BTreeSet<Arc<Branch>> = g.divisor()?.support().into_iter().collect();
        at.extend(line_pool.iter().cloned());
        for b in &at {
            let pre = psi.preimage_branch(b)?;
            branch_checks += 1;
            if !invariant_at(psi.forms(), &g, &pg, b, &pre, &mut fallback)? {
                fails.push(format!("{} at {}", g.render(), b.label(line.name())));
            }
        }
        writeln!(log, "c11 fn {} | {}", f.render(), g.render()).unwrap();
    }

    let mut pair_checks = 0;
    for i in 0..10 {
        let (da, db) = if i % 3 == 2 { (2, 3) } else { (2, 2) };
        let a = rand_effective(rng, &cusp, &cusp_pool, da);
        let b = rand_effective(rng, &cusp, &cusp_pool, db);
        let virtual_b = &b - &rand_effective(rng, &cusp, &cusp_pool, 1);
        for (x, y) in [(&a, &b), (&a, &virtual_b)] {
            let here = is_equivalent(x, y)?;
            let (px, py) = (phi.pullback_divisor(x)?, phi.pullback_divisor(y)?);
            let there = is_equivalent(&px, &py)?;
            let back = phi.pushforward_divisor(&px)? == *x && psi.pushforward_divisor(x)? == px;
            let degree_kept = px.degree() == x.degree();
            pair_checks += 1;
            if here != there || !back || !degree_kept {
                fails.push(format!("pair {} | {}", show(x), show(y)));
            }
        }
        let la = rand_effective(rng, &line, &line_pool, da);
        let lb = rand_effective(rng, &line, &line_pool, db);
        let here = is_equivalent(&la, &lb)?;
        let there = is_equivalent(&phi.pushforward_divisor(&la)?, &phi.pushforward_divisor(&lb)?)?;
        pair_checks += 1;
        if here != there {
            fails.push(format!("line pair {} | {}", show(&la), show(&lb)));
        }
        writeln!(log, "c11 pair {} | {} {here}", show(&a), show(&b)).unwrap();
    }

    let mut series_checks = 0;
    let line_systems: [&[&str]; 3] = [&["X^2", "X*Z", "Z^2"], &["X^3", "Z^3"], &["X", "Z"]];
    for sys in line_systems {
        let forms: Vec<Form3> = sys.iter().map(|s| form(s)).collect();
        let s = LinearSeries::from_system(&line, &forms)?;
        let t = phi.transport_series(&s)?;
        track("c11", &s);
        track("c11", &t);
        series_checks += 1;
        if (s.dim(), s.order()) != (t.dim(), t.order()) {
            fails.push(format!("line series {sys:?}"));
        }
        writeln!(log, "c11 series {} -> {}", s.describe(), t.describe()).unwrap();
    }
    let cusp_systems: [&[&str]; 3] = [&["X", "Y", "Z"], &["X", "Z"], &["X^2", "Y*Z", "Z^2"]];
    for sys in cusp_systems {
        let forms: Vec<Form3> = sys.iter().map(|s| form(s)).collect();
        let s = LinearSeries::from_system(&cusp, &forms)?;
        let t = psi.transport_series(&s)?;
        track("c11", &s);
        track("c11", &t);
        series_checks += 1;
        if (s.dim(), s.order()) != (t.dim(), t.order()) {
            fails.push(format!("cusp series {sys:?}"));
        }
        writeln!(log, "c11 series {} -> {}", s.describe(), t.describe()).unwrap();
    }
    Ok((
        fails.is_empty(),
        format!(
            "20 functions at {branch_checks} branches ({fallback} by minimal polynomial), {pair_checks} pair checks, {series_checks} series, failures {:?}",
            fails
        ),
    ))
}

type Criterion = fn(&mut ChaCha8Rng, &mut String) -> Result<(bool, String)>;

const TITLES: [&str; 12] = [
    "Puiseux residuals vanish past the default precision",
    "Bezout totals on 200 random pairs",
    "resultant orders match fiber branch sums",
    "divisor laws for products, inverses and constants",
    "level-set totals equal the generic fiber size",
    "r = R - h - 1 with planted multiples; r <= n",
    "dim L(G) = t + 1 and anchors",
    "Riemann-Roch battery on genus 0, 1, 2",
    "equivalence laws with witnesses",
    "amalgamation contains both inputs",
    "birational invariance along line <-> cusp",
    "byte-identical transcripts under a fixed seed",
];

fn run_all(seed: u64, only: &Option<Vec<usize>>) -> (Vec<Outcome>, String) {
    SERIES_SEEN.lock().unwrap().clear();
    let table: [Criterion; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    let mut outcomes = Vec::new();
    let mut transcript = String::new();
    for (i, crit) in table.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            outcomes.push(Outcome { pass: true, detail: "skipped".into() });
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let mut log = String::new();
        let start = Instant::now();
        let mut out = Outcome::from(crit(&mut rng, &mut log));
        eprintln!("  criterion {} took {:.1?}", i + 1, start.elapsed());
        writeln!(transcript, "== {}\n{}{}", i + 1, log, out.detail).unwrap();
        if i == 5 {
            // the r <= n half is judged after every criterion has run
            out.detail.push_str("; ");
        }
        outcomes.push(out);
    }
    let (bound_ok, bound_detail) = c6_bound();
    outcomes[5].pass &= bound_ok;
    outcomes[5].detail.push_str(&bound_detail);
    (outcomes, transcript)
}

fn main() -> ExitCode {
    let seed = std::env::var("BRANCHDIV_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    // BRANCHDIV_ONLY=3,11 runs just those criteria, once
    let only: Option<Vec<usize>> = std::env::var("BRANCHDIV_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|k| k.trim().parse().ok()).collect());
    println!("acceptance battery, seed {seed}");
    let (mut outcomes, first) = run_all(seed, &only);
    if only.is_none() {
        let (_, second) = run_all(seed, &only);
        let same = first == second;
        outcomes.push(Outcome {
            pass: same,
            detail: format!("two runs, {} transcript bytes, identical: {same}", first.len()),
        });
    }
    let mut all = true;
    for (i, o) in outcomes.iter().enumerate() {
        if only.as_ref().is_some_and(|set| !set.contains(&(i + 1))) {
            continue;
        }
        all &= o.pass;
        println!("{} {:>2}. {}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, TITLES[i], o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
