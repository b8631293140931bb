use std::fmt::Write as _;

use branchdiv::divisor::{intersect, Value};
use branchdiv::equiv::{adjoint_divisor, complete_series, delta_at, equivalence_witness, genus, riemann_roch_space};
use branchdiv::maps::BirationalMap;
use branchdiv::puiseux::{branches_at, default_precision};
use branchdiv::series::LinearSeries;
use serde_json::{json, Value as Json};

use crate::session::{self, Session};
use crate::CliError;

/// What a command prints: a text rendering and a JSON rendering.
pub struct Report {
    pub text: String,
    pub json: Json,
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Finite(e) => json!(e.to_string()),
        Value::Infinity => json!("inf"),
    }
}

pub fn branches(s: &Session, curve: &str, point: Option<&str>) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let points = match point {
        Some(p) => vec![session::point(&c, p, &[])?],
        None => c.singular_points(),
    };
    let prec = s.precision.unwrap_or_else(|| default_precision(c.degree(), 1));
    let mut text = String::new();
    let mut rows = Vec::new();
    if points.is_empty() {
        writeln!(text, "{} is nonsingular; pass --point to expand at a point", c.name()).unwrap();
    }
    for p in &points {
        for b in branches_at(&c, p)?.iter() {
            writeln!(text, "{}  [e={}, conj={}]", b.describe(c.name(), prec), b.e(), b.conj()).unwrap();
            rows.push(json!({
                "label": b.label(c.name()),
                "point": p.label(),
                "index": b.index(),
                "e": b.e(),
                "conj": b.conj(),
                "expansion": b.describe(c.name(), prec),
            }));
        }
    }
    Ok(Report {
        text,
        json: json!({ "curve": c.name(), "precision": prec, "branches": rows }),
    })
}

pub fn intersect_cmd(s: &Session, curve: &str, form: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let phi = session::form(form)?;
    let d = intersect(&c, &phi)?;
    let expected = c.degree() as i64 * phi.degree() as i64;
    let ok = d.degree() == expected;
    Ok(Report {
        text: format!(
            "{d}\ntotal {} (d*e = {expected}): Bezout {}\n",
            d.degree(),
            if ok { "OK" } else { "MISMATCH" }
        ),
        json: json!({
            "curve": c.name(),
            "form": phi.to_string(),
            "divisor": d.to_json(),
            "total": d.degree(),
            "expected": expected,
            "bezout_ok": ok,
        }),
    })
}

pub fn div(s: &Session, curve: &str, func: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let f = session::function(&c, func)?;
    let d = f.divisor()?;
    Ok(Report {
        text: format!("{d}\n"),
        json: json!({ "curve": c.name(), "function": f.render(), "divisor": d.to_json() }),
    })
}

pub fn ordval(s: &Session, curve: &str, func: &str, branch: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let f = session::function(&c, func)?;
    let touch = [f.num().clone(), f.den().clone()];
    let b = session::branch(&c, branch, &touch)?;
    let (ord, val) = f.ord_val(&b)?;
    let signed = f.signed_ord(&b)?;
    Ok(Report {
        text: format!("ord {ord}, val {val} (signed order {signed})\n"),
        json: json!({
            "curve": c.name(),
            "function": f.render(),
            "branch": b.label(c.name()),
            "ord": ord,
            "val": value_json(&val),
            "signed_ord": signed,
        }),
    })
}

fn series_json(ls: &LinearSeries) -> Result<Json, CliError> {
    let fixed = ls.fixed_contribution()?;
    let cuts: Vec<Json> = ls.basis_cuts()?.iter().map(|d| d.to_json()).collect();
    Ok(json!({
        "curve": ls.curve().name(),
        "r": ls.dim(),
        "n": ls.order(),
        "R": ls.system_dim(),
        "h": ls.h(),
        "basis": ls.basis().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "fixed": fixed.to_json(),
        "basis_cuts": cuts,
    }))
}

pub fn series(s: &Session, curve: &str, forms: &[String]) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let mut list = Vec::new();
    for f in forms {
        list.extend(session::form_list(f)?);
    }
    let ls = LinearSeries::from_system(&c, &list)?;
    let fixed = ls.fixed_contribution()?;
    let mut text = format!("{} (R = {}, h = {})\nfixed: {fixed}\n", ls.describe(), ls.system_dim(), ls.h());
    for (f, d) in ls.basis().iter().zip(ls.basis_cuts()?) {
        writeln!(text, "cut {f}: {d}").unwrap();
    }
    Ok(Report { text, json: series_json(&ls)? })
}

pub fn rrspace(s: &Session, curve: &str, div: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let g = session::divisor(&c, div, &[])?;
    let space = riemann_roch_space(&g)?;
    let funcs: Vec<String> = space.functions()?.iter().map(|f| f.render()).collect();
    let mut text = format!("dim L({g}) = {}\n", space.dim());
    for f in &funcs {
        writeln!(text, "  {f}").unwrap();
    }
    Ok(Report {
        text,
        json: json!({ "curve": c.name(), "divisor": g.to_json(), "dim": space.dim(), "basis": funcs }),
    })
}

pub fn equiv(s: &Session, curve: &str, a: &str, b: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let da = session::divisor(&c, a, &[])?;
    let db = session::divisor(&c, b, &[])?;
    let w = equivalence_witness(&da, &db)?;
    let text = match &w {
        Some(f) => format!("{}\n", f.render()),
        None => "NO\n".to_string(),
    };
    Ok(Report {
        text,
        json: json!({
            "curve": c.name(),
            "a": da.to_json(),
            "b": db.to_json(),
            "equivalent": w.is_some(),
            "witness": w.map(|f| f.render()),
        }),
    })
}

pub fn complete(s: &Session, curve: &str, div: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let g = session::divisor(&c, div, &[])?;
    let ls = complete_series(&g)?;
    Ok(Report {
        text: format!("|{g}| = {}: t = {}, n = {}\n", ls.describe(), ls.dim(), ls.order()),
        json: json!({
            "curve": c.name(),
            "divisor": g.to_json(),
            "t": ls.dim(),
            "n": ls.order(),
            "series": series_json(&ls)?,
        }),
    })
}

pub fn genus_cmd(s: &Session, curve: &str) -> Result<Report, CliError> {
    let c = s.curve(curve)?;
    let g = genus(&c)?;
    let adj = adjoint_divisor(&c)?;
    let mut points = Vec::new();
    for p in c.singular_points() {
        let delta = delta_at(&c, &p)?;
        points.push(json!({
            "point": p.label(),
            "size": p.size(),
            "multiplicity": c.multiplicity(&p),
            "delta": delta,
        }));
    }
    Ok(Report {
        text: format!("{g}\n"),
        json: json!({
            "curve": c.name(),
            "degree": c.degree(),
            "genus": g,
            "adjoint": adj.to_json(),
            "singular_points": points,
        }),
    })
}

/// Map description for `transport`, from flags or a JSON document.
pub struct MapSpec {
    pub source: String,
    pub target: String,
    pub forms: String,
    pub inverse: Option<String>,
    pub divisor: String,
    pub pullback: bool,
}

impl MapSpec {
    pub fn from_json(v: &Json) -> Result<MapSpec, CliError> {
        let field = |k: &str| -> Result<String, CliError> {
            v.get(k)
                .and_then(|x| x.as_str())
                .map(str::to_string)
                .ok_or_else(|| CliError::Usage(format!("transport input needs a string field `{k}`")))
        };
        let triple = |x: &Json| -> Result<String, CliError> {
            let arr = x
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| CliError::Usage("map triples are arrays of three forms".into()))?;
            let parts: Option<Vec<&str>> = arr.iter().map(|f| f.as_str()).collect();
            Ok(parts.ok_or_else(|| CliError::Usage("map entries must be strings".into()))?.join(";"))
        };
        Ok(MapSpec {
            source: field("source")?,
            target: field("target")?,
            forms: triple(v.get("map").unwrap_or(&Json::Null))?,
            inverse: v.get("inverse").map(triple).transpose()?,
            divisor: field("divisor")?,
            pullback: v.get("direction").and_then(|d| d.as_str()) == Some("pullback"),
        })
    }
}

fn triple(text: &str) -> Result<[branchdiv::algebra::form::Form3; 3], CliError> {
    let v = session::form_list(text)?;
    v.try_into()
        .map_err(|_| CliError::Usage(format!("`{text}` must list exactly three forms")))
}

pub fn transport(s: &Session, spec: &MapSpec) -> Result<Report, CliError> {
    let src = s.curve(&spec.source)?;
    let tgt = s.curve(&spec.target)?;
    let forms = triple(&spec.forms)?;
    let touch = forms.to_vec();
    let mut map = BirationalMap::new(&src, &tgt, forms)?;
    if let Some(inv) = &spec.inverse {
        map = map.with_inverse(triple(inv)?)?;
    }
    let (input, output) = if spec.pullback {
        let d = session::divisor(&tgt, &spec.divisor, &touch)?;
        let out = map.pullback_divisor(&d)?;
        (d, out)
    } else {
        let d = session::divisor(&src, &spec.divisor, &touch)?;
        let out = map.pushforward_divisor(&d)?;
        (d, out)
    };
    Ok(Report {
        text: format!("{output}\n"),
        json: json!({
            "direction": if spec.pullback { "pullback" } else { "pushforward" },
            "input": input.to_json(),
            "divisor": output.to_json(),
        }),
    })
}
