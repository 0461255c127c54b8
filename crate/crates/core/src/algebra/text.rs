//! Text syntax for algebra elements, e.g. `t0^1 t^(1,0)`, `(q - 1)*t0^0 t^(1,1) - 2*c1`,
//! `E12(t^(0,1))`, `H(x^3) + K`.

use super::element::Element;
use super::keys::{AffKey, LKey, TauKey};
use crate::coeff::{parse_field, FieldElement};
use crate::error::{Error, Result};

fn perr(s: &str, msg: &str) -> Error {
    Error::Parse(format!("{msg} in `{s}`"))
}

fn strip(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Splits at top-level `+`/`-` (not inside parentheses, not after `^` or `*`/`/`),
/// keeping the sign with the following term.
fn split_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let sep = depth == 0
            && (c == '+' || c == '-')
            && !cur.is_empty()
            && !matches!(prev, Some('^') | Some('*') | Some('/'));
        if sep {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
        prev = Some(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Splits `coef*key` at the last top-level `*`.
fn split_coef(t: &str) -> (Option<&str>, &str) {
    let mut depth = 0i32;
    let mut at = None;
    for (idx, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => at = Some(idx),
            _ => {}
        }
    }
    match at {
        Some(i) => (Some(&t[..i]), &t[i + 1..]),
        None => (None, t),
    }
}

fn parse_generic<K: Ord + Copy>(s: &str, key: impl Fn(&str) -> Result<K>) -> Result<Element<K>> {
    let compact = strip(s);
    if compact == "0" {
        return Ok(Element::zero());
    }
    let mut out = Element::zero();
    for term in split_terms(&compact) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, term.strip_prefix('+').unwrap_or(&term)),
        };
        let (coef, k) = split_coef(body);
        let mut c = match coef {
            Some(c) => parse_field(c)?,
            None => FieldElement::one(),
        };
        if neg {
            c = -c;
        }
        out.add_term(key(k)?, c);
    }
    Ok(out)
}

fn pair(s: &str, whole: &str) -> Result<(i64, i64)> {
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(whole, "expected `(a,b)`"))?;
    let mut it = inner.split(',');
    let a = it.next().and_then(|x| x.parse().ok());
    let b = it.next().and_then(|x| x.parse().ok());
    match (a, b, it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(perr(whole, "expected two integers")),
    }
}

pub fn parse_l_key(k: &str) -> Result<LKey> {
    match k {
        "c1" => return Ok(LKey::C1),
        "c2" => return Ok(LKey::C2),
        _ => {}
    }
    // t0^i t^(a,b) with whitespace removed: t0^it^(a,b)
    let rest = k
        .strip_prefix("t0^")
        .ok_or_else(|| perr(k, "unknown key"))?;
    let split = rest
        .find("t^")
        .ok_or_else(|| perr(k, "expected `t^(a,b)`"))?;
    let i: i64 = rest[..split]
        .parse()
        .map_err(|_| perr(k, "bad t0 exponent"))?;
    let m = pair(&rest[split + 2..], k)?;
    let key = LKey::t(i, m);
    if !key.is_valid() {
        return Err(perr(k, "t0^0 t^(0,0) is not an element of L"));
    }
    Ok(key)
}

pub fn parse_tau_key(k: &str) -> Result<TauKey> {
    match k {
        "K1" => return Ok(TauKey::K1),
        "K2" => return Ok(TauKey::K2),
        _ => {}
    }
    let b = k.as_bytes();
    if b.len() < 8 || b[0] != b'E' {
        return Err(perr(k, "unknown key"));
    }
    let (i, j) = (b[1].wrapping_sub(b'0'), b[2].wrapping_sub(b'0'));
    if !(1..=2).contains(&i) || !(1..=2).contains(&j) {
        return Err(perr(k, "matrix index must be 1 or 2"));
    }
    let inner = k[3..]
        .strip_prefix("(t^")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(k, "expected `Eij(t^(a,b))`"))?;
    Ok(TauKey::e(i, j, pair(inner, k)?))
}

pub fn parse_aff_key(k: &str) -> Result<AffKey> {
    if k == "K" {
        return Ok(AffKey::K);
    }
    let (head, rest) = k
        .find('(')
        .map(|p| (&k[..p], &k[p..]))
        .ok_or_else(|| perr(k, "unknown key"))?;
    let j: i64 = rest
        .strip_prefix("(x^")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|r| r.trim_start_matches('(').trim_end_matches(')').parse().ok())
        .ok_or_else(|| perr(k, "expected `X(x^j)`"))?;
    match head {
        "E12" => Ok(AffKey::E12(j)),
        "E21" => Ok(AffKey::E21(j)),
        "H" => Ok(AffKey::H(j)),
        _ => Err(perr(k, "unknown key")),
    }
}

pub fn parse_l(s: &str) -> Result<Element<LKey>> {
    parse_generic(s, parse_l_key)
}

pub fn parse_tau(s: &str) -> Result<Element<TauKey>> {
    parse_generic(s, parse_tau_key)
}

pub fn parse_aff(s: &str) -> Result<Element<AffKey>> {
    parse_generic(s, parse_aff_key)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_keys() {
        assert_eq!(
            parse_l("t0^1 t^(1,0)").unwrap(),
            Element::basis(LKey::t(1, (1, 0)))
        );
        assert_eq!(parse_l("c1").unwrap(), Element::basis(LKey::C1));
        assert_eq!(
            parse_tau("E12(t^(0,1))").unwrap(),
            Element::basis(TauKey::e(1, 2, (0, 1)))
        );
        assert_eq!(parse_aff("H(x^3)").unwrap(), Element::basis(AffKey::H(3)));
        assert_eq!(parse_aff("H(x^-3)").unwrap(), Element::basis(AffKey::H(-3)));
        assert!(parse_l("t0^0 t^(0,0)").is_err());
    }

    #[test]
    fn round_trip_combinations() {
        let x = parse_l("(q - 1)*t0^0 t^(1,1) - 2*c1 + 3/2*t0^1 t^(-1,0)").unwrap();
        assert_eq!(parse_l(&x.to_string()).unwrap(), x);
        assert_eq!(parse_l("-1*c1").unwrap().to_string(), "-1*c1");
        let y = parse_aff("-(u^-3)*E12(x^0) + H(x^2) + 1/2*K").unwrap();
        assert_eq!(parse_aff(&y.to_string()).unwrap(), y);
    }
}
