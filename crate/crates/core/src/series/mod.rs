//! Exact truncated power series over the rationals.

mod bivariate;
mod json;
mod univariate;

use std::fmt;

use rug::{Integer, Rational};

pub use bivariate::{ArithOp, TruncatedSeries2, Var};
pub use json::{Series1Json, Series2Json, TermJson, UniTermJson};
pub use univariate::TruncatedSeries1;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    Rational::parse(s.trim())
        .map(Rational::from)
        .map_err(|e| crate::Error::Parse(format!("{s:?}: {e}")))
}

/// Generalized binomial coefficient α(α−1)…(α−k+1)/k!.
pub fn binomial(alpha: &Rational, k: u32) -> Rational {
    let mut c = Rational::from(1);
    for i in 0..k {
        c *= Rational::from(alpha - i);
        c /= i + 1;
    }
    c
}

pub(crate) fn factorial_recips(n: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = Rational::from(1);
    for k in 0..=n {
        if k > 0 {
            c /= k;
        }
        out.push(c.clone());
    }
    out
}

/// Splits rationals as r·(n₁,…,nₖ) with coprime integers nᵢ and r > 0.
pub(crate) fn integer_content<'a>(cs: impl Iterator<Item = &'a Rational> + Clone) -> (Rational, Vec<Integer>) {
    let mut den = Integer::from(1);
    for c in cs.clone() {
        den.lcm_mut(c.denom());
    }
    let scaled: Vec<Integer> = cs.map(|c| c.numer() * (&den / Integer::from(c.denom()))).collect();
    let mut g = Integer::new();
    for n in &scaled {
        g.gcd_mut(n);
    }
    if g == 0 {
        g = Integer::from(1);
    }
    let ints = scaled.into_iter().map(|n| n / &g).collect();
    (Rational::from((g, den)), ints)
}

pub fn format_monomial(vars: &[String], a: u32, b: u32) -> String {
    let mut parts = Vec::new();
    for (v, e) in vars.iter().zip([a, b]) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

pub fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (mono, c) in terms {
        let neg = *c < 0;
        let mag = Rational::from(c.abs_ref());
        let body = match (mag == 1, mono.is_empty()) {
            (true, false) => mono,
            (_, true) => mag.to_string(),
            (false, false) => format!("{mag}*{mono}"),
        };
        match (first, neg) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
