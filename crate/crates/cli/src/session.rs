//! Resolution of command-line text into curves, forms, functions, branches
//! and divisors.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use branchdiv::algebra::form::Form3;
use branchdiv::algebra::parse::{parse_expression, parse_form, Parsed};
use branchdiv::algebra::Elem;
use branchdiv::divisor::{Divisor, RationalFunction};
use branchdiv::puiseux::{branches_at, Branch};
use branchdiv::{fixtures, Error, PlaneCurve, PointCluster};

use crate::CliError;

/// Curves named in a fixture file, plus global options.
#[derive(Default)]
pub struct Session {
    named: BTreeMap<String, String>,
    pub json: bool,
    pub precision: Option<usize>,
    pub seed: u64,
}

impl Session {
    /// Reads `curve <name>: <form>` lines. Blank lines and `#` comments are
    /// skipped.
    pub fn load_fixtures(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.add_fixture_text(&text)
    }

    pub fn add_fixture_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || CliError::Usage(format!("fixture line {}: expected `curve <name>: <form>`", no + 1));
            let rest = line.strip_prefix("curve").ok_or_else(bad)?;
            let (name, expr) = rest.split_once(':').ok_or_else(bad)?;
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(bad());
            }
            if self.named.insert(name.to_string(), expr.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("fixture line {}: duplicate curve name {name}", no + 1)));
            }
        }
        Ok(())
    }

    /// A curve by fixture-file name, built-in fixture name, or inline form.
    /// Inline curves are named `C`.
    pub fn curve(&self, spec: &str) -> Result<Arc<PlaneCurve>, CliError> {
        if let Some(expr) = self.named.get(spec) {
            return Ok(PlaneCurve::with_name(spec, form(expr)?)?);
        }
        if let Some(c) = fixtures::curve(spec) {
            return Ok(c);
        }
        Ok(PlaneCurve::with_name("C", form(spec)?)?)
    }
}

pub fn form(text: &str) -> Result<Form3, CliError> {
    Ok(parse_form(text, &Default::default()).map_err(Error::from)?)
}

/// A rational function from `num/den` text, or from a constant.
pub fn function(curve: &Arc<PlaneCurve>, text: &str) -> Result<RationalFunction, CliError> {
    match parse_expression(text, &Default::default()).map_err(Error::from)? {
        Parsed::Ratio(n, d) => Ok(RationalFunction::new(curve, n, d)?),
        Parsed::Form(f) if f.degree() == 0 => Ok(RationalFunction::constant(curve, f.coeff([0, 0, 0]))),
        Parsed::Form(_) => Err(CliError::Usage(format!(
            "`{text}` is a form of positive degree; a function is a ratio of forms of equal degree"
        ))),
    }
}

/// Forms separated by `,` or `;`.
pub fn form_list(text: &str) -> Result<Vec<Form3>, CliError> {
    text.split([',', ';']).map(|s| form(s.trim())).collect()
}

fn constant(text: &str) -> Result<Elem, CliError> {
    let f = form(text)?;
    if f.degree() != 0 {
        return Err(CliError::Usage(format!("coordinate `{text}` is not a constant")));
    }
    Ok(f.coeff([0, 0, 0]))
}

/// Registers the point clusters that algebraic point labels can refer to:
/// the singular locus, the coordinate lines and any extra cutting forms.
fn prime_points(curve: &Arc<PlaneCurve>, touch: &[Form3]) {
    let _ = curve.singular_points();
    for k in 0..3 {
        let _ = curve.intersection_points(&Form3::var(k));
    }
    for phi in touch {
        let _ = curve.intersection_points(phi);
    }
}

/// A point from `(x:y:z)` with rational entries, or from a printed label of
/// an algebraic cluster such as `(a1:0:1|a1^2-2)`.
pub fn point(curve: &Arc<PlaneCurve>, text: &str, touch: &[Form3]) -> Result<Arc<PointCluster>, CliError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| CliError::Usage(format!("point `{t}` must be written `(x:y:z)`")))?;
    if !inner.contains('|') {
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("point `{t}` needs three coordinates")));
        }
        let coords = [constant(parts[0])?, constant(parts[1])?, constant(parts[2])?];
        return Ok(curve.point(coords)?);
    }
    if let Some(p) = curve.point_by_label(t) {
        return Ok(p);
    }
    prime_points(curve, touch);
    curve
        .point_by_label(t)
        .ok_or_else(|| CliError::Core(Error::UnknownBranch(format!("no registered point {t}"))))
}

/// A branch from `gamma[C/P/i]`, `C/P/i` or `P/i`.
pub fn branch(curve: &Arc<PlaneCurve>, text: &str, touch: &[Form3]) -> Result<Arc<Branch>, CliError> {
    let t = text.trim();
    let t = t.strip_prefix("gamma[").and_then(|s| s.strip_suffix(']')).unwrap_or(t);
    let open = t
        .find('(')
        .ok_or_else(|| CliError::Usage(format!("branch `{t}` must contain a point `(x:y:z)`")))?;
    let mut depth = 0;
    let close = t[open..]
        .char_indices()
        .find(|&(_, ch)| {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            depth == 0
        })
        .map(|(k, _)| open + k)
        .ok_or_else(|| CliError::Usage(format!("unbalanced point in `{t}`")))?;
    let prefix = t[..open].trim_end_matches('/');
    if !prefix.is_empty() && prefix != curve.name() {
        return Err(CliError::Usage(format!("branch `{t}` names curve {prefix}, not {}", curve.name())));
    }
    let index: usize = t[close + 1..]
        .strip_prefix('/')
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("branch `{t}` must end with `/index`")))?;
    let p = point(curve, &t[open..=close], touch)?;
    let list = branches_at(curve, &p)?;
    list.get(index)
        .cloned()
        .ok_or_else(|| CliError::Core(Error::UnknownBranch(format!("{} has {} branches", p.label(), list.len()))))
}

/// A divisor as printed by the library: `2*gamma[C/(0:0:1)/0] - gamma[...]`,
/// or `0`.
pub fn divisor(curve: &Arc<PlaneCurve>, text: &str, touch: &[Form3]) -> Result<Divisor, CliError> {
    let mut out = Divisor::zero(curve);
    let t = text.trim();
    if t == "0" || t.is_empty() {
        return Ok(out);
    }
    let mut depth = 0i32;
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in t.chars() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            if !cur.trim().is_empty() {
                terms.push((sign, std::mem::take(&mut cur)));
            }
            cur.clear();
            sign = if ch == '-' { -1 } else { 1 };
            continue;
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur));
    }
    for (sign, term) in terms {
        let term = term.trim();
        let (k, addr) = match term.split_once('*') {
            Some((k, rest)) if !k.contains('[') && !k.contains('(') => {
                let k: i64 = k
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad multiplicity in `{term}`")))?;
                (k, rest)
            }
            _ => (1, term),
        };
        let b = branch(curve, addr, touch)?;
        out.add_at(&b, sign * k);
    }
    Ok(out)
}
