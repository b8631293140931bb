//! Oracle battery: library results against the independent oracles on every
//! built-in fixture curve.

use std::fmt::Write as _;

use branchdiv::algebra::form::Form3;
use branchdiv::algebra::Elem;
use branchdiv::divisor::{bezout_precision, intersect, RationalFunction};
use branchdiv::equiv::{delta_at, genus};
use branchdiv::fixtures;
use branchdiv::oracle::{brute_ord, fiber_comparison, local_delta, oracle_genus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::Report;
use crate::CliError;

struct Row {
    check: &'static str,
    cases: usize,
    failures: Vec<String>,
}

fn random_form(rng: &mut ChaCha8Rng, e: u32) -> Form3 {
    let mons = Form3::monomials(e);
    loop {
        let mut f = Form3::zero(e);
        for _ in 0..3 {
            let m = mons[rng.gen_range(0..mons.len())];
            f.add_term(m, &Elem::from_int(rng.gen_range(-3..=3)));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn run(seed: u64, precision: Option<usize>) -> Result<(Report, bool), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![
        Row { check: "bezout totals", cases: 0, failures: Vec::new() },
        Row { check: "resultant fibers", cases: 0, failures: Vec::new() },
        Row { check: "local delta", cases: 0, failures: Vec::new() },
        Row { check: "genus", cases: 0, failures: Vec::new() },
        Row { check: "brute-force ord", cases: 0, failures: Vec::new() },
    ];
    for c in fixtures::all() {
        let d = c.degree();
        for _ in 0..3 {
            let e = rng.gen_range(1..=2);
            let phi = random_form(&mut rng, e);
            if c.divides(&phi) {
                continue;
            }
            rows[0].cases += 1;
            let total = intersect(&c, &phi)?.degree();
            if total != (d * e) as i64 {
                rows[0].failures.push(format!("{} {phi}: {total}", c.name()));
            }
            rows[1].cases += 1;
            let (_, fibers) = fiber_comparison(&c, &phi, rng.gen())?;
            if fibers.iter().any(|r| r.branch_sum != r.resultant_order) {
                rows[1].failures.push(format!("{} {phi}", c.name()));
            }
        }
        for p in c.singular_points() {
            rows[2].cases += 1;
            let (lib, orc) = (delta_at(&c, &p)?, local_delta(&c, &p)? as i64);
            if lib != orc {
                rows[2].failures.push(format!("{} {}: {lib} vs {orc}", c.name(), p.label()));
            }
        }
        rows[3].cases += 1;
        let (lib, orc) = (genus(&c)?, oracle_genus(&c)?);
        if lib != orc {
            rows[3].failures.push(format!("{}: {lib} vs {orc}", c.name()));
        }
        for _ in 0..2 {
            let (num, den) = (random_form(&mut rng, 1), random_form(&mut rng, 1));
            let Ok(f) = RationalFunction::new(&c, num, den) else { continue };
            if f.is_constant() {
                continue;
            }
            let prec = precision.unwrap_or_else(|| bezout_precision(&c, 1));
            for (b, _) in f.divisor()?.entries() {
                rows[4].cases += 1;
                let (lib, _) = f.ord_val(b)?;
                let orc = brute_ord(&f, b, prec)?;
                if lib != orc {
                    rows[4].failures.push(format!("{} at {}", f.render(), b.label(c.name())));
                }
            }
        }
    }
    let mut text = format!("selftest seed {seed}\n");
    let mut all = true;
    for r in &rows {
        let pass = r.failures.is_empty();
        all &= pass;
        writeln!(text, "{:<18} {:>4} cases  {}", r.check, r.cases, if pass { "PASS" } else { "FAIL" }).unwrap();
        for f in &r.failures {
            writeln!(text, "    {f}").unwrap();
        }
    }
    let json = json!({
        "seed": seed,
        "pass": all,
        "rows": rows.iter().map(|r| json!({
            "check": r.check,
            "cases": r.cases,
            "pass": r.failures.is_empty(),
            "failures": r.failures,
        })).collect::<Vec<_>>(),
    });
    Ok((Report { text, json }, all))
}
