use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Rational};

use super::{binomial, factorial_recips, format_monomial, TruncatedSeries1};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Polynomial in two variables with exact rational coefficients, truncated
/// at total degree `order`. Terms above the order are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    order: u32,
    vars: [String; 2],
    terms: BTreeMap<(u32, u32), Rational>,
}

impl TruncatedSeries2 {
    pub fn zero(order: u32, vars: [&str; 2]) -> Self {
        TruncatedSeries2 {
            order,
            vars: [vars[0].to_string(), vars[1].to_string()],
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(order: u32, vars: [&str; 2], c: Rational) -> Self {
        Self::from_terms(order, vars, [((0, 0), c)])
    }

    pub fn variable(order: u32, vars: [&str; 2], which: Var) -> Self {
        let key = match which {
            Var::First => (1, 0),
            Var::Second => (0, 1),
        };
        Self::from_terms(order, vars, [(key, Rational::from(1))])
    }

    /// Builds a series from (exponent pair, coefficient) entries; duplicates
    /// are summed, zeros and terms above `order` are dropped.
    pub fn from_terms<I>(order: u32, vars: [&str; 2], terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Rational)>,
    {
        let mut s = Self::zero(order, vars);
        for (k, c) in terms {
            s.accumulate(k, c);
        }
        s.prune();
        s
    }

    fn with_labels(order: u32, vars: &[String; 2]) -> Self {
        TruncatedSeries2 { order, vars: vars.clone(), terms: BTreeMap::new() }
    }

    fn accumulate(&mut self, k: (u32, u32), c: Rational) {
        if k.0 + k.1 > self.order {
            return;
        }
        *self.terms.entry(k).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0 + k.1).max()
    }

    pub fn relabel(&self, vars: [&str; 2]) -> Self {
        let mut s = self.clone();
        s.vars = [vars[0].to_string(), vars[1].to_string()];
        s
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        let mut s = Self::with_labels(order, &self.vars);
        s.terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.0 + k.1 <= order)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        s
    }

    /// Reinterprets the truncation order without touching coefficients.
    /// Raising the order claims nothing about the missing higher terms.
    fn with_order(&self, order: u32) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        let mut s = Self::with_labels(self.order, &self.vars);
        s.terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.0 + k.1 == degree)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        s
    }

    fn check_labels(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::Labels(self.vars.to_vec(), other.vars.to_vec()));
        }
        Ok(())
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_labels(other)?;
        let mut s = self.truncate(other.order);
        for (k, c) in &other.terms {
            s.accumulate(*k, c.clone());
        }
        s.prune();
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = Rational::from(-&*c);
        }
        s
    }

    pub fn scale(&self, f: &Rational) -> Self {
        let mut s = Self::with_labels(self.order, &self.vars);
        if *f != 0 {
            s.terms = self.terms.iter().map(|(k, c)| (*k, Rational::from(c * f))).collect();
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_labels(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut s = Self::with_labels(order, &self.vars);
        for (ka, ca) in &self.terms {
            let da = ka.0 + ka.1;
            if da > order {
                continue;
            }
            for (kb, cb) in &other.terms {
                if da + kb.0 + kb.1 > order {
                    continue;
                }
                let k = (ka.0 + kb.0, ka.1 + kb.1);
                *s.terms.entry(k).or_default() += Rational::from(ca * cb);
            }
        }
        s.prune();
        s
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.order, self.vars(), Rational::from(1));
        for _ in 0..n {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Formal partial derivative; the result has order N−1.
    pub fn partial(&self, which: Var) -> Self {
        let mut s = Self::with_labels(self.order.saturating_sub(1), &self.vars);
        for ((a, b), c) in &self.terms {
            let (e, k) = match which {
                Var::First => (*a, (a.wrapping_sub(1), *b)),
                Var::Second => (*b, (*a, b.wrapping_sub(1))),
            };
            if e > 0 {
                s.terms.insert(k, Rational::from(c * e));
            }
        }
        s
    }

    /// f(g(x,y), y): substitutes `g` for the first variable.
    pub fn compose_first(&self, g: &Self) -> Result<Self> {
        if self.vars[1] != g.vars[1] {
            return Err(Error::Labels(self.vars.to_vec(), g.vars.to_vec()));
        }
        if g.terms.contains_key(&(0, 0)) {
            return Err(Error::Substitution);
        }
        let order = self.order.min(g.order);
        let g = g.truncate(order);
        let top = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let mut slices: Vec<Self> = (0..=top).map(|_| Self::with_labels(order, &g.vars)).collect();
        for ((a, b), c) in &self.terms {
            if a + b <= order {
                slices[*a as usize].terms.insert((0, *b), c.clone());
            }
        }
        let mut acc = slices.pop().unwrap_or_else(|| Self::with_labels(order, &g.vars));
        while let Some(slice) = slices.pop() {
            acc = acc.mul_unchecked(&g);
            for (k, c) in slice.terms {
                acc.accumulate(k, c);
            }
            acc.prune();
        }
        Ok(acc)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.coeff(0, 0);
        if c0 == 0 {
            return Err(Error::Inversion("reciprocal of a series without constant term".into()));
        }
        let one = Self::constant(self.order, self.vars(), Rational::from(1));
        let two = Self::constant(self.order, self.vars(), Rational::from(2));
        let mut r = Self::constant(self.order, self.vars(), Rational::from(c0.recip_ref()));
        let mut done = false;
        for _ in 0..(2 + 2 * bits(self.order)) {
            let fr = self.mul_unchecked(&r);
            if fr == one {
                done = true;
                break;
            }
            r = r.mul_unchecked(&two.sub(&fr)?);
        }
        if !done && self.mul_unchecked(&r) != one {
            return Err(Error::Inversion("reciprocal iteration did not settle".into()));
        }
        Ok(r)
    }

    /// Solves f(g(x,y), y) = x for g by Newton iteration on series; the
    /// first variable of the result is labelled `label`.
    pub fn invert_first(&self, label: &str) -> Result<Self> {
        if self.coeff(0, 0) != 0 {
            return Err(Error::Inversion("series has a constant term".into()));
        }
        if self.coeff(1, 0) != 1 {
            return Err(Error::Inversion(format!(
                "coefficient of {} is {}, not 1",
                self.vars[0],
                self.coeff(1, 0)
            )));
        }
        let n = self.order;
        let vars = [label, self.vars[1].as_str()];
        let x = Self::variable(n, vars, Var::First);
        let df = self.partial(Var::First).with_order(n);
        let mut g = x.clone();
        for _ in 0..(3 + 2 * bits(n)) {
            let resid = self.compose_first(&g)?.sub(&x)?;
            if resid.is_zero() {
                return Ok(g);
            }
            let slope = df.compose_first(&g)?.recip()?;
            g = g.sub(&resid.mul_unchecked(&slope))?;
        }
        if self.compose_first(&g)? == x {
            Ok(g)
        } else {
            Err(Error::Inversion("Newton iteration did not reach a fixed point".into()))
        }
    }

    /// Σ cₖ fᵏ for a series f without constant term (Horner scheme).
    pub fn apply_power_series(&self, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() > 1 && self.coeff(0, 0) != 0 {
            return Err(Error::Substitution);
        }
        let mut acc = Self::with_labels(self.order, &self.vars);
        for c in coeffs.iter().rev() {
            acc = acc.mul_unchecked(self);
            acc.accumulate((0, 0), c.clone());
            acc.prune();
        }
        Ok(acc)
    }

    pub fn exp_series(&self) -> Result<Self> {
        self.apply_power_series(&factorial_recips(self.order))
    }

    /// (1 + f)^α for rational α.
    pub fn binomial_pow(&self, alpha: &Rational) -> Result<Self> {
        let c: Vec<Rational> = (0..=self.order).map(|k| binomial(alpha, k)).collect();
        self.apply_power_series(&c)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let top = self.terms.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let mut rows = vec![Vec::<(u32, f64)>::new(); top + 1];
        for ((a, b), c) in &self.terms {
            rows[*a as usize].push((*b, c.to_f64()));
        }
        let mut acc = 0.0;
        for row in rows.iter().rev() {
            let inner = horner(row, y);
            acc = acc * x + inner;
        }
        acc
    }

    pub fn evaluate_float(&self, x: &Float, y: &Float) -> Float {
        let prec = x.prec().max(y.prec());
        let top = self.terms.keys().map(|k| k.0).max().unwrap_or(0) as usize;
        let mut rows = vec![Vec::<(u32, &Rational)>::new(); top + 1];
        for ((a, b), c) in &self.terms {
            rows[*a as usize].push((*b, c));
        }
        let mut acc = Float::with_val(prec, 0);
        for row in rows.iter().rev() {
            let mut inner = Float::with_val(prec, 0);
            let mut deg = row.last().map(|t| t.0).unwrap_or(0);
            let mut i = row.len();
            loop {
                if i > 0 && row[i - 1].0 == deg {
                    inner += row[i - 1].1;
                    i -= 1;
                }
                if deg == 0 {
                    break;
                }
                inner *= y;
                deg -= 1;
            }
            acc *= x;
            acc += &inner;
        }
        acc
    }

    /// Reflection y → −y.
    pub fn reflect_second(&self) -> Self {
        let mut s = self.clone();
        for ((_, b), c) in s.terms.iter_mut() {
            if b % 2 == 1 {
                *c = Rational::from(-&*c);
            }
        }
        s
    }

    pub fn is_even_in_second(&self) -> bool {
        self.terms.keys().all(|(_, b)| b % 2 == 0)
    }

    pub fn is_odd_in_second(&self) -> bool {
        self.terms.keys().all(|(_, b)| b % 2 == 1)
    }

    /// f(x, 0) as a univariate series in the first variable.
    pub fn slice_first(&self) -> TruncatedSeries1 {
        let mut c = vec![Rational::new(); self.order as usize + 1];
        for ((a, b), v) in &self.terms {
            if *b == 0 {
                c[*a as usize] = v.clone();
            }
        }
        TruncatedSeries1::from_coeffs(self.order, &self.vars[0], c)
    }

    /// f(x, x) as a univariate series.
    pub fn diagonal(&self, label: &str) -> TruncatedSeries1 {
        let mut c = vec![Rational::new(); self.order as usize + 1];
        for ((a, b), v) in &self.terms {
            c[(a + b) as usize] += v;
        }
        TruncatedSeries1::from_coeffs(self.order, label, c)
    }

    /// Human-readable layout grouping each total degree as r·(integer polynomial),
    /// optionally reinserting κ^{d−1} and an overall ν.
    pub fn pretty_grouped(&self, with_scales: bool) -> String {
        let mut parts = Vec::new();
        for d in 0..=self.order {
            let part: Vec<_> =
                self.terms.iter().filter(|(k, _)| k.0 + k.1 == d).map(|(k, c)| (*k, c.clone())).collect();
            if part.is_empty() {
                continue;
            }
            let (mut factor, mut ints) = super::integer_content(part.iter().map(|(_, c)| c));
            if ints.last().is_some_and(|n| *n < 0) {
                factor = -factor;
                ints.iter_mut().for_each(|n| *n = -n.clone());
            }
            let mut poly = String::new();
            for (i, ((a, b), _)) in part.iter().enumerate().rev() {
                let n = &ints[i];
                let sign = if *n < 0 { " - " } else { " + " };
                let mag = n.clone().abs();
                let mono = format_monomial(&self.vars, *a, *b);
                let body = match (mag == 1, mono.is_empty()) {
                    (true, false) => mono,
                    (_, true) => mag.to_string(),
                    (false, false) => format!("{} {}", mag, mono),
                };
                if poly.is_empty() {
                    poly = if *n < 0 { format!("-{}", body) } else { body };
                } else {
                    poly.push_str(sign);
                    poly.push_str(&body);
                }
            }
            let kappa = match (with_scales, d) {
                (false, _) | (_, 0) | (_, 1) => String::new(),
                (true, 2) => "κ ".into(),
                (true, _) => format!("κ^{} ", d - 1),
            };
            let group = if factor == 1 && part.len() == 1 && kappa.is_empty() {
                poly
            } else {
                let sign = if factor < 0 { "-" } else { "" };
                format!("{}{}({})({})", sign, kappa, Rational::from(factor.abs_ref()), poly)
            };
            parts.push(group);
        }
        let mut body = String::new();
        for p in &parts {
            match (body.is_empty(), p.strip_prefix('-')) {
                (true, _) => body.push_str(p),
                (false, Some(rest)) => body.push_str(&format!(" - {rest}")),
                (false, None) => body.push_str(&format!(" + {p}")),
            }
        }
        if body.is_empty() {
            body.push('0');
        }
        if with_scales {
            format!("ν[{}]", body)
        } else {
            body
        }
    }
}

fn bits(n: u32) -> u32 {
    32 - n.max(1).leading_zeros()
}

fn horner(row: &[(u32, f64)], y: f64) -> f64 {
    let Some(&(top, _)) = row.last() else { return 0.0 };
    let mut acc = 0.0;
    let mut i = row.len();
    let mut deg = top;
    loop {
        acc *= y;
        if i > 0 && row[i - 1].0 == deg {
            acc += row[i - 1].1;
            i -= 1;
        }
        if deg == 0 {
            break;
        }
        deg -= 1;
    }
    acc
}

impl fmt::Display for TruncatedSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|((a, b), _)| (a + b, std::cmp::Reverse(*a)));
        super::write_terms(
            f,
            ordered.into_iter().map(|((a, b), c)| (format_monomial(&self.vars, *a, *b), c)),
        )?;
        write!(f, " + O({})", self.order + 1)
    }
}
