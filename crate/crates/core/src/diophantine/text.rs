//! Text forms: `p/q`, `(a+b*sqrt(d))/c`, `float:<decimal>` and
//! `[a0;a1,...,(p1,...,pk)]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Signed;

use super::cf::{CfKind, ContinuedFraction};
use super::exact::ExactReal;
use super::DiophantineError;

fn parse_err(s: &str, why: &str) -> DiophantineError {
    DiophantineError::Parse(format!("{why}: {s:?}"))
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, DiophantineError> {
    let t = s.strip_prefix('+').unwrap_or(s);
    BigInt::from_str(t).map_err(|_| parse_err(whole, "invalid integer"))
}

/// Significant digits written in a decimal literal, trailing zeros included.
fn significant_digits(lit: &str) -> u32 {
    let mantissa = lit.split(['e', 'E']).next().unwrap_or("");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let n = digits.trim_start_matches('0').len();
    n.max(1) as u32
}

/// `value` with exactly `digits` significant digits, in plain notation when
/// that stays short.
fn format_significant(value: f64, digits: u32) -> String {
    let sci = format!("{:.*e}", (digits - 1) as usize, value);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-6..=17).contains(&exp) {
        return sci;
    }
    let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
    let ds: String = mant.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), ds)
    } else if point as usize >= ds.len() {
        format!("{}{}", ds, "0".repeat(point as usize - ds.len()))
    } else {
        format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
    };
    format!("{sign}{body}")
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactReal::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            ExactReal::Quadratic(q) => {
                let sign = if q.b().is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", q.a(), sign, q.b().abs(), q.d(), q.c())
            }
            ExactReal::Float(x) => write!(f, "float:{}", format_significant(x.value, x.digits)),
        }
    }
}

impl FromStr for ExactReal {
    type Err = DiophantineError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(lit) = s.strip_prefix("float:") {
            let value: f64 = lit.parse().map_err(|_| parse_err(input, "invalid decimal"))?;
            return ExactReal::float(value, significant_digits(lit));
        }
        if s.contains("sqrt(") {
            return parse_surd(&s, input);
        }
        match s.split_once('/') {
            Some((p, q)) => ExactReal::ratio(parse_int(p, input)?, parse_int(q, input)?),
            None => Ok(ExactReal::integer(parse_int(&s, input)?)),
        }
    }
}

/// `(A+B*sqrt(D))/C` with optional parentheses, `A`, `B*` and `/C`.
fn parse_surd(s: &str, whole: &str) -> Result<ExactReal, DiophantineError> {
    let (inner, c) = match s.rsplit_once(")/") {
        Some((num, den)) if num.starts_with('(') => (&num[1..], parse_int(den, whole)?),
        _ => (s, BigInt::from(1)),
    };
    let at = inner.find("sqrt(").ok_or_else(|| parse_err(whole, "missing sqrt"))?;
    let (prefix, rest) = inner.split_at(at);
    let d = rest
        .strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(whole, "malformed sqrt(...)"))?;
    let d = parse_int(d, whole)?;
    let prefix = prefix.strip_suffix('*').unwrap_or(prefix);
    let split = prefix.char_indices().skip(1).filter(|&(_, ch)| ch == '+' || ch == '-').last();
    let (a, b) = match split {
        Some((i, _)) => (parse_int(&prefix[..i], whole)?, &prefix[i..]),
        None => (BigInt::from(0), prefix),
    };
    let b = match b {
        "" | "+" => BigInt::from(1),
        "-" => BigInt::from(-1),
        t => parse_int(t, whole)?,
    };
    ExactReal::quadratic(a, b, c, d)
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let mut rest: Vec<String> = Vec::new();
        if self.head().len() > 1 {
            rest.push(join(&self.head()[1..]));
        }
        if !self.period().is_empty() {
            rest.push(format!("({})", join(self.period())));
        }
        if self.kind() == CfKind::Prefix {
            rest.push("...".into());
        }
        write!(f, "[{}", self.head()[0])?;
        if !rest.is_empty() {
            write!(f, ";{}", rest.join(","))?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = DiophantineError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let body = s
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| parse_err(input, "expected [...]"))?;
        let (a0, rest) = body.split_once(';').unwrap_or((body, ""));
        let mut head = vec![parse_int(a0, input)?];
        let (mut rest, kind) = match rest.strip_suffix("...") {
            Some(r) => (r.trim_end_matches(','), CfKind::Prefix),
            None => (rest, CfKind::Exact),
        };
        let mut period = Vec::new();
        if let Some(open) = rest.find('(') {
            let block = rest[open..]
                .strip_prefix('(')
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| parse_err(input, "period must close the expansion"))?;
            period = block.split(',').map(|t| parse_int(t, input)).collect::<Result<_, _>>()?;
            rest = rest[..open].trim_end_matches(',');
        }
        if !rest.is_empty() {
            for t in rest.split(',') {
                head.push(parse_int(t, input)?);
            }
        }
        ContinuedFraction::new(head, period, kind)
    }
}
