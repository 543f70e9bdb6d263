//! Parser for the textual polynomial format, e.g. `4*x^3*y - 4*x*y^3`.
//!
//! Variables are `x1..xn`; for up to four variables `x, y, z, w` are
//! accepted as well (and `u, v` in two variables). Coefficients may be
//! integers or fractions `p/q`.

use super::poly::{Monomial, MultiPoly};
use super::scalar::Scalar;
use crate::error::{Error, Result};

fn variable_index(name: &str, nvars: usize) -> Option<usize> {
    let alias = match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        "u" if nvars == 2 => Some(0),
        "v" if nvars == 2 => Some(1),
        _ => None,
    };
    if let Some(i) = alias {
        return (nvars <= 4 && i < nvars).then_some(i);
    }
    let idx: usize = name.strip_prefix('x')?.parse().ok()?;
    (1..=nvars).contains(&idx).then(|| idx - 1)
}

fn parse_factor<C: Scalar>(tok: &str, nvars: usize, exps: &mut [u32], coeff: &mut C) -> Result<()> {
    let bad = || Error::Parse(format!("cannot parse factor `{tok}`"));
    if tok.starts_with(|c: char| c.is_ascii_digit()) {
        let value = match tok.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.parse().map_err(|_| bad())?;
                let d: i64 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                C::from_int(n) / C::from_int(d)
            }
            None => C::from_int(tok.parse().map_err(|_| bad())?),
        };
        *coeff = coeff.clone() * value;
        return Ok(());
    }
    let (name, e) = match tok.split_once('^') {
        Some((name, e)) => (name, e.parse::<u32>().map_err(|_| bad())?),
        None => (tok, 1),
    };
    let i = variable_index(name, nvars).ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
    exps[i] += e;
    Ok(())
}

pub fn parse_poly<C: Scalar>(text: &str, nvars: usize) -> Result<MultiPoly<C>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = MultiPoly::zero(nvars);
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    for (pos, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && !(pos > 0 && cleaned[..pos].ends_with('^')) {
            if !current.is_empty() {
                chunks.push((negative, std::mem::take(&mut current)));
            } else if pos > 0 {
                return Err(Error::Parse(format!("dangling sign in `{text}`")));
            }
            negative = ch == '-';
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(Error::Parse(format!("trailing sign in `{text}`")));
    }
    chunks.push((negative, current));
    for (neg, chunk) in chunks {
        let mut exps = vec![0u32; nvars];
        let mut coeff = C::one();
        for tok in chunk.split('*') {
            if tok.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{chunk}`")));
            }
            parse_factor(tok, nvars, &mut exps, &mut coeff)?;
        }
        if neg {
            coeff = -coeff;
        }
        if !coeff.is_zero() {
            out.add_term(Monomial::new(exps), coeff);
        }
    }
    Ok(out)
}
