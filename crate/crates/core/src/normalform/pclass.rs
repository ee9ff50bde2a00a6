use std::collections::BTreeMap;
use std::fmt;

use rug::Rational;

use crate::series::{format_monomial, TruncatedSeries2};

/// Exponent key (m, a, b) of the monomial J₁ᵃ J₂ᵇ e^{mθ₁}.
pub type PKey = (i32, u32, u32);

/// Grade of a monomial in the ℘ hierarchy: m + 2(a+b).
pub fn grade_of(k: &PKey) -> i64 {
    k.0 as i64 + 2 * (k.1 + k.2) as i64
}

/// Finite sum of terms Q(J₁,J₂)·e^{mθ₁} with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PClassFunction {
    terms: BTreeMap<PKey, Rational>,
}

impl PClassFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: i32, a: u32, b: u32, c: Rational) -> Self {
        Self::from_terms([((m, a, b), c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (PKey, Rational)>>(terms: I) -> Self {
        let mut f = Self::zero();
        for (k, c) in terms {
            *f.terms.entry(k).or_default() += c;
        }
        f.prune();
        f
    }

    pub fn j1() -> Self {
        Self::monomial(0, 1, 0, Rational::from(1))
    }

    pub fn j2() -> Self {
        Self::monomial(0, 0, 1, Rational::from(1))
    }

    pub fn exp_theta(m: i32) -> Self {
        Self::monomial(m, 0, 0, Rational::from(1))
    }

    /// J² = J₁² + J₂².
    pub fn j_squared() -> Self {
        Self::from_terms([((0, 2, 0), Rational::from(1)), ((0, 0, 2), Rational::from(1))])
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PKey, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: i32, a: u32, b: u32) -> Rational {
        self.terms.get(&(m, a, b)).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set of grades present.
    pub fn grades(&self) -> Vec<i64> {
        let mut g: Vec<i64> = self.terms.keys().map(grade_of).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn grade_part(&self, grade: i64) -> Self {
        PClassFunction {
            terms: self.terms.iter().filter(|(k, _)| grade_of(k) == grade).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn up_to_grade(&self, grade: i64) -> Self {
        PClassFunction {
            terms: self.terms.iter().filter(|(k, _)| grade_of(k) <= grade).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut f = self.clone();
        f.add_assign(other);
        f
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            *self.terms.entry(*k).or_default() += c;
        }
        self.prune();
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, f: &Rational) -> Self {
        let mut g = Self::zero();
        if *f != 0 {
            g.terms = self.terms.iter().map(|(k, c)| (*k, Rational::from(c * f))).collect();
        }
        g
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out: BTreeMap<PKey, Rational> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k = (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2);
                *out.entry(k).or_default() += Rational::from(ca * cb);
            }
        }
        let mut f = PClassFunction { terms: out };
        f.prune();
        f
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::monomial(0, 0, 0, Rational::from(1));
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn d_theta(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, Rational::from(c * k.0))))
    }

    pub fn d_j1(&self) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|(k, _)| k.1 > 0).map(|(k, c)| ((k.0, k.1 - 1, k.2), Rational::from(c * k.1))),
        )
    }

    /// {f, g} = f_θ g_J₁ − f_J₁ g_θ.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        self.d_theta().mul(&other.d_j1()).sub(&self.d_j1().mul(&other.d_theta()))
    }

    /// θ₁-independent part (m = 0).
    pub fn kernel(&self) -> Self {
        PClassFunction { terms: self.terms.iter().filter(|(k, _)| k.0 == 0).map(|(k, c)| (*k, c.clone())).collect() }
    }

    pub fn range(&self) -> Self {
        PClassFunction { terms: self.terms.iter().filter(|(k, _)| k.0 != 0).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Splits h into its kernel part and the generator W with ∂W/∂θ₁ = h − kernel.
    pub fn homological_solve(&self) -> (Self, Self) {
        let generator =
            Self::from_terms(self.terms.iter().filter(|(k, _)| k.0 != 0).map(|(k, c)| (*k, Rational::from(c / k.0))));
        (self.kernel(), generator)
    }

    /// Converts a θ₁-independent function into a series in (j1, j2).
    pub fn to_series(&self, order: u32) -> Option<TruncatedSeries2> {
        if self.terms.keys().any(|k| k.0 != 0) {
            return None;
        }
        Some(TruncatedSeries2::from_terms(
            order,
            ["j1", "j2"],
            self.terms.iter().map(|(k, c)| ((k.1, k.2), c.clone())),
        ))
    }
}

impl fmt::Display for PClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = ["J1".to_string(), "J2".to_string()];
        let terms = self.terms.iter().map(|(k, c)| {
            let mut mono = format_monomial(&vars, k.1, k.2);
            if k.0 != 0 {
                let e = format!("e^({}θ1)", k.0);
                mono = if mono.is_empty() { e } else { format!("{mono}*{e}") };
            }
            (mono, c)
        });
        crate::series::write_terms(f, terms)
    }
}
