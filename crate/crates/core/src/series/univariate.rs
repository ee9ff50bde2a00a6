use std::fmt;

use rug::{Float, Rational};

use super::{binomial, factorial_recips, format_monomial};
use crate::error::{Error, Result};

/// Truncated power series in one variable, dense coefficients c₀…c_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries1 {
    var: String,
    coeffs: Vec<Rational>,
}

impl TruncatedSeries1 {
    pub fn zero(order: u32, var: &str) -> Self {
        TruncatedSeries1 { var: var.to_string(), coeffs: vec![Rational::new(); order as usize + 1] }
    }

    /// Coefficients beyond the order are ignored, missing ones are zero.
    pub fn from_coeffs(order: u32, var: &str, coeffs: Vec<Rational>) -> Self {
        let mut s = Self::zero(order, var);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_integers(order: u32, var: &str, coeffs: &[i64]) -> Self {
        Self::from_coeffs(order, var, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn constant(order: u32, var: &str, c: Rational) -> Self {
        Self::from_coeffs(order, var, vec![c])
    }

    pub fn variable(order: u32, var: &str) -> Self {
        Self::from_integers(order, var, &[0, 1])
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn coeff(&self, k: u32) -> Rational {
        self.coeffs.get(k as usize).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn relabel(&self, var: &str) -> Self {
        TruncatedSeries1 { var: var.to_string(), coeffs: self.coeffs.clone() }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let n = order.min(self.order()) as usize;
        TruncatedSeries1 { var: self.var.clone(), coeffs: self.coeffs[..=n].to_vec() }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::Labels(vec![self.var.clone()], vec![other.var.clone()]));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let c = (0..=n).map(|k| Rational::from(&self.coeffs[k as usize] + &other.coeffs[k as usize]));
        Ok(Self::from_coeffs(n, &self.var, c.collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, f: &Rational) -> Self {
        let c = self.coeffs.iter().map(|c| Rational::from(c * f)).collect();
        TruncatedSeries1 { var: self.var.clone(), coeffs: c }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.order().min(other.order()) as usize;
        let mut out = vec![Rational::new(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if *b != 0 {
                    out[i + j] += Rational::from(a * b);
                }
            }
        }
        TruncatedSeries1 { var: self.var.clone(), coeffs: out }
    }

    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if *c0 == 0 {
            return Err(Error::Inversion("reciprocal of a series without constant term".into()));
        }
        let n = self.coeffs.len();
        let inv0 = Rational::from(c0.recip_ref());
        let mut out: Vec<Rational> = vec![Rational::new(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = Rational::new();
            for j in 1..=k {
                acc += Rational::from(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -acc * &inv0;
        }
        Ok(TruncatedSeries1 { var: self.var.clone(), coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.recip()?))
    }

    /// f(g(x)) for g without constant term; result carries g's label.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.coeffs[0] != 0 {
            return Err(Error::Substitution);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let mut acc = Self::zero(n, &g.var);
        for c in self.coeffs.iter().take(n as usize + 1).rev() {
            acc = acc.mul_unchecked(&g);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Compositional inverse of f = c₁x + …, c₁ ≠ 0, by Newton iteration.
    pub fn invert(&self, var: &str) -> Result<Self> {
        if self.coeffs[0] != 0 {
            return Err(Error::Inversion("series has a constant term".into()));
        }
        let c1 = self.coeff(1);
        if c1 == 0 {
            return Err(Error::Inversion("vanishing linear coefficient".into()));
        }
        let n = self.order();
        let x = Self::variable(n, var);
        let mut df = self.derivative();
        df.coeffs.push(Rational::new());
        let mut g = x.scale(&Rational::from(c1.recip_ref()));
        for _ in 0..(3 + 2 * (32 - n.max(1).leading_zeros())) {
            let resid = self.compose(&g)?.sub(&x)?;
            if resid.coeffs.iter().all(|c| *c == 0) {
                return Ok(g);
            }
            let slope = df.compose(&g)?.recip()?;
            g = g.sub(&resid.mul_unchecked(&slope))?;
        }
        Err(Error::Inversion("Newton iteration did not reach a fixed point".into()))
    }

    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        let c = (1..n).map(|k| Rational::from(&self.coeffs[k] * k as u32)).collect::<Vec<_>>();
        let order = (n as u32).saturating_sub(2);
        Self::from_coeffs(order, &self.var, c)
    }

    /// Antiderivative with zero constant; order grows by one.
    pub fn integral(&self) -> Self {
        let mut c = vec![Rational::new()];
        for (k, a) in self.coeffs.iter().enumerate() {
            c.push(Rational::from(a / (k as u32 + 1)));
        }
        TruncatedSeries1 { var: self.var.clone(), coeffs: c }
    }

    /// Multiplies by xᵏ keeping the order.
    pub fn shift_up(&self, k: u32) -> Self {
        let mut c = vec![Rational::new(); k as usize];
        c.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(self.order(), &self.var, c)
    }

    /// Divides by xᵏ (lowest k coefficients must vanish); order drops by k.
    pub fn shift_down(&self, k: u32) -> Result<Self> {
        if self.coeffs.iter().take(k as usize).any(|c| *c != 0) {
            return Err(Error::Order(format!("series is not divisible by {}^{k}", self.var)));
        }
        let c = self.coeffs[k as usize..].to_vec();
        Ok(Self::from_coeffs(self.order().saturating_sub(k), &self.var, c))
    }

    pub fn apply_power_series(&self, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() > 1 && self.coeffs[0] != 0 {
            return Err(Error::Substitution);
        }
        let n = self.order();
        let mut acc = Self::zero(n, &self.var);
        for c in coeffs.iter().rev() {
            acc = acc.mul_unchecked(self);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    pub fn exp_series(&self) -> Result<Self> {
        if self.coeffs[0] != 0 {
            return Err(Error::Substitution);
        }
        self.apply_power_series(&factorial_recips(self.order()))
    }

    /// ln(1 + f) for f without constant term.
    pub fn ln_1p(&self) -> Result<Self> {
        let c: Vec<Rational> = (0..=self.order())
            .map(|k| if k == 0 { Rational::new() } else { Rational::from((if k % 2 == 1 { 1 } else { -1 }, k)) })
            .collect();
        self.apply_power_series(&c)
    }

    pub fn binomial_pow(&self, alpha: &Rational) -> Result<Self> {
        let c: Vec<Rational> = (0..=self.order()).map(|k| binomial(alpha, k)).collect();
        self.apply_power_series(&c)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| *c.denom() == 1)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn evaluate_float(&self, x: &Float) -> Float {
        let mut acc = Float::with_val(x.prec(), 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl fmt::Display for TruncatedSeries1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = [self.var.clone(), String::new()];
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| (format_monomial(&vars, k as u32, 0), c));
        super::write_terms(f, terms)?;
        write!(f, " + O({}^{})", self.var, self.order() + 1)
    }
}
