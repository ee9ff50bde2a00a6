use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::normalform::lie_normalize;
use crate::series::{binomial, TruncatedSeries2, Var};

/// Imaginary action J₁(h, j₂) through total degree `order`, by residues at ζ = 1.
///
/// With x = ζ − 1 the integrand is −√2 (2+x)^{−1/2} (1 − t)^{1/2}, t = h/x + j₂²/(2x²(2+x)).
/// The term h^a j₂^{2b} of (1 − t)^{1/2} carries x^{−n}(2+x)^{−b−1/2}, n = a + 2b, and its
/// residue picks the x^{n−1} Taylor coefficient of (2+x)^{−b−1/2}. The cycle is traversed twice.
pub fn j1_series(order: u32) -> Result<TruncatedSeries2> {
    if order < 1 {
        return Err(Error::Order("J1 series needs order ≥ 1".into()));
    }
    let half = Rational::from((1, 2));
    let mut terms = Vec::new();
    for n in 1..=order {
        for b in 0..=n / 2 {
            let a = n - 2 * b;
            let s = a + b;
            // (1 − t)^{1/2} → (−1)^s C(1/2, s) · C(s, a) · 2^{−b}
            let mut c = binomial(&half, s) * binomial(&Rational::from(s), a);
            if s % 2 == 1 {
                c = -c;
            }
            c /= pow2(b);
            // √2 · [x^{n−1}] (2+x)^{−b−1/2} = 2^{−b} · C(−b−1/2, n−1) · 2^{1−n}
            let alpha = Rational::from((-(2 * b as i64) - 1, 2));
            c *= binomial(&alpha, n - 1);
            c /= pow2(b + n - 1);
            // residue of −√2(…) times 2 for the doubled cycle, oriented so that J₁ = h + …
            c *= -2;
            terms.push(((a, 2 * b), c));
        }
    }
    Ok(TruncatedSeries2::from_terms(order, ["h", "j2"], terms))
}

fn pow2(e: u32) -> Rational {
    Rational::from(Integer::from(1) << e)
}

/// H(j₁, j₂) as the inverse of J₁(h, j₂) in its first argument. `order` is the
/// grade used by the Lie route, i.e. the result has total degree ⌊order/2⌋.
pub fn birkhoff_by_inversion(order: u32) -> Result<TruncatedSeries2> {
    if order < 2 {
        return Err(Error::Order("Birkhoff normal form needs order ≥ 2".into()));
    }
    j1_series(order / 2)?.invert_first("j1")
}

/// Both normal-form routes at grade `order`; they must agree exactly.
pub fn birkhoff_cross_check(order: u32) -> Result<TruncatedSeries2> {
    let inv = birkhoff_by_inversion(order)?;
    let lie = lie_normalize(order)?;
    if inv != lie {
        return Err(Error::Verification(format!("normal forms disagree at grade {order}:\n  inversion {inv}\n  Lie       {lie}")));
    }
    Ok(inv)
}

#[derive(Clone, Debug)]
pub struct ASeries {
    pub ratio: TruncatedSeries2,
    pub residue: TruncatedSeries2,
}

/// A = ∂_{j₂}H / ∂_{j₁}H through degree `order`, by the ratio of partials and by
/// −∂J₁/∂j₂ composed with H. Both routes must agree exactly.
pub fn a_series(order: u32) -> Result<ASeries> {
    let h = birkhoff_by_inversion(2 * order + 2)?;
    let h1 = h.partial(Var::First);
    let h2 = h.partial(Var::Second);
    let ratio = h2.mul(&h1.recip()?)?.truncate(order);
    let dj = j1_series(order + 1)?.partial(Var::Second).neg();
    let residue = dj.compose_first(&h.truncate(order))?.truncate(order);
    if ratio != residue {
        return Err(Error::Verification(format!("A-series routes disagree:\n  ratio   {ratio}\n  residue {residue}")));
    }
    Ok(ASeries { ratio, residue })
}

/// Coefficient of ln(32/ϱ) in the expansion of 2πW in (h, j₂): −∂J₁/∂j₂.
pub fn rotation_log_coefficient(order: u32) -> Result<TruncatedSeries2> {
    Ok(j1_series(order + 1)?.partial(Var::Second).neg().truncate(order))
}
