//! Text grammar for forms, ratios of forms and univariate polynomials.
//!
//! ```text
//! expr   := sum
//! sum    := ['+' | '-'] prod (('+' | '-') prod)*
//! prod   := power (('*' | '/') power)*
//! power  := atom ('^' INT)?
//! atom   := INT | NAME | '(' sum ')'
//! ```
//!
//! `NAME` is a coordinate (`X`, `Y`, `Z`) or a declared field generator.
//! Division is allowed anywhere; the final value must be a form, or a ratio
//! of two forms of equal degree.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use super::field::Elem;
use super::form::Form3;
use super::poly::UPoly;

/// Named field generators (and any named constants) usable in expressions.
pub type Symbols = BTreeMap<String, Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownSymbol,
    Homogeneity,
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
            ParseErrorKind::Homogeneity => "homogeneity error",
            ParseErrorKind::DivisionByZero => "division by zero",
        };
        write!(f, "{kind} at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Result of parsing an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Form(Form3),
    Ratio(Form3, Form3),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().unwrap();
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

type Sparse = BTreeMap<[u32; 3], Elem>;

#[derive(Clone)]
struct Frac {
    num: Sparse,
    den: Sparse,
}

fn sp_const(c: Elem) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert([0, 0, 0], c);
    }
    m
}

fn sp_add(a: &Sparse, b: &Sparse, sign: i64) -> Sparse {
    let mut out = a.clone();
    for (e, c) in b {
        let c = if sign < 0 { -c } else { c.clone() };
        let slot = out.entry(*e).or_insert_with(Elem::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            out.remove(e);
        }
    }
    out
}

fn sp_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let slot = out.entry(e).or_insert_with(Elem::zero);
            *slot = &*slot + &(ca * cb);
            if slot.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

fn sp_as_const(a: &Sparse) -> Option<Elem> {
    match a.len() {
        0 => Some(Elem::zero()),
        1 => a.get(&[0, 0, 0]).cloned(),
        _ => None,
    }
}

impl Frac {
    fn constant(c: Elem) -> Frac {
        Frac {
            num: sp_const(c),
            den: sp_const(Elem::one()),
        }
    }

    fn add(&self, o: &Frac, sign: i64) -> Frac {
        if self.den == o.den {
            return Frac {
                num: sp_add(&self.num, &o.num, sign),
                den: self.den.clone(),
            };
        }
        Frac {
            num: sp_add(&sp_mul(&self.num, &o.den), &sp_mul(&o.num, &self.den), sign),
            den: sp_mul(&self.den, &o.den),
        }
        .simplify()
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            num: sp_mul(&self.num, &o.num),
            den: sp_mul(&self.den, &o.den),
        }
        .simplify()
    }

    fn div(&self, o: &Frac) -> Option<Frac> {
        if o.num.is_empty() {
            return None;
        }
        Some(
            Frac {
                num: sp_mul(&self.num, &o.den),
                den: sp_mul(&self.den, &o.num),
            }
            .simplify(),
        )
    }

    /// Pushes constant denominators into the numerator.
    fn simplify(self) -> Frac {
        if let Some(c) = sp_as_const(&self.den) {
            let inv = c.inv();
            return Frac {
                num: self.num.iter().map(|(e, v)| (*e, v * &inv)).collect(),
                den: sp_const(Elem::one()),
            };
        }
        self
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    vars: &'a [&'a str],
    syms: &'a Symbols,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err(&self, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn sum(&mut self) -> Result<Frac, ParseError> {
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Op('+')) => self.i += 1,
            Some(Tok::Op('-')) => {
                sign = -1;
                self.i += 1;
            }
            _ => {}
        }
        let first = self.prod()?;
        let mut acc = Frac::constant(Elem::zero()).add(&first, sign);
        loop {
            let s = match self.peek() {
                Some(Tok::Op('+')) => 1,
                Some(Tok::Op('-')) => -1,
                _ => break,
            };
            self.i += 1;
            let t = self.prod()?;
            acc = acc.add(&t, s);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<Frac, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.i += 1;
                    let r = self.power()?;
                    acc = acc.mul(&r);
                }
                Some(Tok::Op('/')) => {
                    self.i += 1;
                    let at = self.pos();
                    let r = self.power()?;
                    acc = acc.div(&r).ok_or(ParseError {
                        kind: ParseErrorKind::DivisionByZero,
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Frac, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.i += 1;
            let Some(Tok::Int(n)) = self.peek().cloned() else {
                return Err(self.err(ParseErrorKind::Syntax, "expected an integer exponent"));
            };
            self.i += 1;
            let n: u32 = n
                .try_into()
                .map_err(|_| self.err(ParseErrorKind::Syntax, "exponent too large"))?;
            let mut acc = Frac::constant(Elem::one());
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Frac::constant(Elem::from_bigint(n)))
            }
            Some(Tok::Name(name)) => {
                if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    self.i += 1;
                    let mut e = [0; 3];
                    e[k] = 1;
                    let mut num = Sparse::new();
                    num.insert(e, Elem::one());
                    return Ok(Frac {
                        num,
                        den: sp_const(Elem::one()),
                    });
                }
                if let Some(c) = self.syms.get(&name) {
                    self.i += 1;
                    return Ok(Frac::constant(c.clone()));
                }
                Err(self.err(ParseErrorKind::UnknownSymbol, format!("unknown symbol '{name}'")))
            }
            Some(Tok::Op('(')) => {
                self.i += 1;
                let v = self.sum()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.i += 1;
                        Ok(v)
                    }
                    _ => Err(self.err(ParseErrorKind::Syntax, "expected ')'")),
                }
            }
            Some(t) => Err(self.err(ParseErrorKind::Syntax, format!("unexpected token {t:?}"))),
            None => Err(self.err(ParseErrorKind::Syntax, "unexpected end of input")),
        }
    }
}

fn parse_frac(text: &str, vars: &[&str], syms: &Symbols) -> Result<Frac, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
        vars,
        syms,
    };
    if p.toks.is_empty() {
        return Err(p.err(ParseErrorKind::Syntax, "empty expression"));
    }
    let v = p.sum()?;
    if p.i != p.toks.len() {
        return Err(p.err(ParseErrorKind::Syntax, "trailing input"));
    }
    Ok(v)
}

fn to_form(s: &Sparse, what: &str, end: usize) -> Result<Form3, ParseError> {
    let deg = s.keys().next().map_or(0, |e| e[0] + e[1] + e[2]);
    Form3::from_terms(deg, s.iter().map(|(e, c)| (*e, c.clone()))).ok_or(ParseError {
        kind: ParseErrorKind::Homogeneity,
        pos: end,
        msg: format!("{what} is not homogeneous"),
    })
}

/// Parses a form or a ratio of forms.
pub fn parse_expression(text: &str, syms: &Symbols) -> Result<Parsed, ParseError> {
    let f = parse_frac(text, &["X", "Y", "Z"], syms)?;
    let num = to_form(&f.num, "numerator", text.len())?;
    if f.den == sp_const(Elem::one()) {
        return Ok(Parsed::Form(num));
    }
    let den = to_form(&f.den, "denominator", text.len())?;
    if num.degree() != den.degree() && !num.is_zero() {
        return Err(ParseError {
            kind: ParseErrorKind::Homogeneity,
            pos: text.len(),
            msg: format!(
                "numerator degree {} differs from denominator degree {}",
                num.degree(),
                den.degree()
            ),
        });
    }
    let num = if num.is_zero() { Form3::zero(den.degree()) } else { num };
    Ok(Parsed::Ratio(num, den))
}

/// Parses a single form (no nonconstant denominators).
pub fn parse_form(text: &str, syms: &Symbols) -> Result<Form3, ParseError> {
    match parse_expression(text, syms)? {
        Parsed::Form(f) => Ok(f),
        Parsed::Ratio(..) => Err(ParseError {
            kind: ParseErrorKind::Syntax,
            pos: 0,
            msg: "expected a form, found a ratio".into(),
        }),
    }
}

/// Parses a univariate polynomial in `var`.
pub fn parse_upoly(text: &str, var: &str, syms: &Symbols) -> Result<UPoly, ParseError> {
    let f = parse_frac(text, &[var], syms)?;
    if f.den != sp_const(Elem::one()) {
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            pos: 0,
            msg: "expected a polynomial".into(),
        });
    }
    let deg = f.num.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let mut c = vec![Elem::zero(); deg + 1];
    for (e, v) in &f.num {
        c[e[0] as usize] = v.clone();
    }
    Ok(UPoly::from_coeffs(c))
}
