use rug::Rational;
use serde::Serialize;

use crate::actions::{published_coefficients, FittedCoefficient};
use crate::error::{Error, Result};
use crate::series::{TruncatedSeries1, TruncatedSeries2, Var};

/// The j₂ = 0 slice of the regular part of S (degree ≥ 2) from the known coefficients, through j⁸.
pub fn pendulum_invariant_published() -> TruncatedSeries1 {
    let mut c = vec![Rational::new(); 9];
    for ((a, b), v) in published_coefficients() {
        if b == 0 {
            c[a as usize] = v;
        }
    }
    TruncatedSeries1::from_coeffs(8, "j", c)
}

/// The same slice from fitted coefficients (exact where snapped or recognized).
pub fn pendulum_invariant_from_fit(coefficients: &[FittedCoefficient]) -> TruncatedSeries1 {
    let order = coefficients.iter().map(|c| c.exponents.0).max().unwrap_or(1);
    let mut c = vec![Rational::new(); order as usize + 1];
    for f in coefficients.iter().filter(|f| f.exponents.1 == 0) {
        c[f.exponents.0 as usize] = f.exact.clone();
    }
    TruncatedSeries1::from_coeffs(order, "j", c)
}

/// 1/l + regular part, the exponentiated period ratio.
#[derive(Clone, Debug)]
pub struct Reciprocal {
    pub pole: Rational,
    pub regular: TruncatedSeries1,
}

#[derive(Clone, Debug)]
pub struct NomeSeries {
    pub q_of_l: TruncatedSeries1,
    pub l_of_q: TruncatedSeries1,
    pub reciprocal: Reciprocal,
}

#[derive(Serialize)]
struct NomeJson<'a> {
    q_of_l: Vec<String>,
    l_of_q: Vec<String>,
    reciprocal_pole: String,
    reciprocal_regular: Vec<String>,
    #[serde(skip)]
    _p: std::marker::PhantomData<&'a ()>,
}

impl NomeSeries {
    pub fn to_json(&self) -> String {
        let s = |t: &TruncatedSeries1| t.coeffs().iter().map(|c| c.to_string()).collect();
        serde_json::to_string_pretty(&NomeJson {
            q_of_l: s(&self.q_of_l),
            l_of_q: s(&self.l_of_q),
            reciprocal_pole: self.reciprocal.pole.to_string(),
            reciprocal_regular: s(&self.reciprocal.regular),
            _p: std::marker::PhantomData,
        })
        .expect("nome series serialize")
    }

    pub fn is_integral(&self) -> bool {
        self.q_of_l.is_integral() && self.l_of_q.is_integral() && self.reciprocal.regular.is_integral() && *self.reciprocal.pole.denom() == 1
    }
}

/// q = exp(−2π ∂I/∂J) = l · exp(−S′(32 l)) with l = j/32, through lᴺ; `s` is the regular part
/// of S(j, 0) and must be known through degree N.
pub fn nome_from_invariant(s: &TruncatedSeries1, order: u32) -> Result<NomeSeries> {
    if order < 1 {
        return Err(Error::Order("nome series needs order ≥ 1".into()));
    }
    if s.order() < order {
        return Err(Error::Order(format!("invariant known through degree {} but order {order} needs degree {order}", s.order())));
    }
    if s.coeff(0) != 0 || s.coeff(1) != 0 {
        return Err(Error::Order("regular part must start at degree 2".into()));
    }
    // S′(j) with j = 32 l, through l^{N−1}
    let ds = s.derivative().truncate(order - 1);
    let scaled: Vec<Rational> = ds.coeffs().iter().enumerate().map(|(k, c)| c * Rational::from(32u64.pow(k as u32))).collect();
    let ds_l = TruncatedSeries1::from_coeffs(order - 1, "l", scaled);
    let down = ds_l.scale(&Rational::from(-1)).exp_series()?;
    let up = ds_l.exp_series()?;
    let q_of_l = TruncatedSeries1::from_coeffs(order, "l", down.coeffs().to_vec()).shift_up(1);
    let l_of_q = q_of_l.invert("q")?;
    let reciprocal = Reciprocal {
        pole: up.coeff(0),
        regular: TruncatedSeries1::from_coeffs(order - 1, "l", up.coeffs()[1..].to_vec()).relabel("l"),
    };
    Ok(NomeSeries { q_of_l, l_of_q, reciprocal })
}

/// ϑ₄ = 1 + 2Σ(−1)ⁿ q^{n²} through qᴺ.
pub fn theta4(order: u32) -> TruncatedSeries1 {
    let mut c = vec![Rational::new(); order as usize + 1];
    c[0] = Rational::from(1);
    let mut n = 1u32;
    while n * n <= order {
        c[(n * n) as usize] = Rational::from(if n % 2 == 1 { -2 } else { 2 });
        n += 1;
    }
    TruncatedSeries1::from_coeffs(order, "q", c)
}

/// J(q) = −16 q ϑ₄′/ϑ₄³ through qᴺ.
pub fn j_of_q_theta(order: u32) -> Result<TruncatedSeries1> {
    if order < 1 {
        return Err(Error::Order("theta series needs order ≥ 1".into()));
    }
    let t = theta4(order);
    let num = TruncatedSeries1::from_coeffs(order, "q", t.derivative().coeffs().to_vec()).shift_up(1).scale(&Rational::from(-16));
    let cube = t.mul(&t)?.mul(&t)?;
    num.div(&cube)
}

/// Checks that q(l) from the invariant is the compositional inverse of J(q)/32.
pub fn nome_theta_consistency(nome: &NomeSeries) -> Result<()> {
    let order = nome.q_of_l.order();
    let l_of_q = j_of_q_theta(order)?.scale(&Rational::from((1, 32)));
    let inverse = l_of_q.invert("l")?;
    if inverse != nome.q_of_l {
        return Err(Error::Verification(format!("nome from the invariant {} differs from the theta inversion {inverse}", nome.q_of_l)));
    }
    if l_of_q != nome.l_of_q {
        return Err(Error::Verification("inverse nome series disagree".into()));
    }
    Ok(())
}

/// A series in (l, l̄) with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSeries2 {
    pub re: TruncatedSeries2,
    pub im: TruncatedSeries2,
}

impl ComplexSeries2 {
    fn zero(order: u32) -> Self {
        let z = TruncatedSeries2::zero(order, ["l", "lb"]);
        ComplexSeries2 { re: z.clone(), im: z }
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Ok(ComplexSeries2 { re: self.re.add(&o.re)?, im: self.im.add(&o.im)? })
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Ok(ComplexSeries2 {
            re: self.re.mul(&o.re)?.sub(&self.im.mul(&o.im)?)?,
            im: self.re.mul(&o.im)?.add(&self.im.mul(&o.re)?)?,
        })
    }

    fn scale(&self, f: &Rational) -> Self {
        ComplexSeries2 { re: self.re.scale(f), im: self.im.scale(f) }
    }

    /// exp of a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        let order = self.re.order();
        if self.re.coeff(0, 0) != 0 || self.im.coeff(0, 0) != 0 {
            return Err(Error::Substitution);
        }
        let mut acc = Self::zero(order);
        acc.re = TruncatedSeries2::constant(order, ["l", "lb"], Rational::from(1));
        for k in (1..=order).rev() {
            acc = self.mul(&acc)?.scale(&Rational::from((1, k)));
            acc.re = acc.re.add(&TruncatedSeries2::constant(order, ["l", "lb"], Rational::from(1)))?;
        }
        Ok(acc)
    }

    /// Coefficient of lᵃ l̄ᵇ as (re, im).
    pub fn coeff(&self, a: u32, b: u32) -> (Rational, Rational) {
        (self.re.coeff(a, b), self.im.coeff(a, b))
    }

    /// Restriction to l̄ = l.
    pub fn diagonal(&self) -> (TruncatedSeries1, TruncatedSeries1) {
        (self.re.diagonal("l"), self.im.diagonal("l"))
    }
}

/// A real polynomial in (j₁, j₂) rewritten in (l, l̄) via j₁ = 16(l + l̄), j₂ = −16i(l − l̄).
fn to_l_coordinates(p: &TruncatedSeries2, order: u32) -> Result<ComplexSeries2> {
    let vars = ["l", "lb"];
    let l = TruncatedSeries2::variable(order, vars, Var::First);
    let lb = TruncatedSeries2::variable(order, vars, Var::Second);
    let sum = l.add(&lb)?.scale(&Rational::from(16));
    let diff = l.sub(&lb)?.scale(&Rational::from(16));
    let mut out = ComplexSeries2::zero(order);
    for ((a, b), c) in p.terms() {
        if a + b > order {
            continue;
        }
        let m = sum.pow(*a).mul(&diff.pow(*b))?.scale(c);
        // (−i)ᵇ
        let term = match b % 4 {
            0 => ComplexSeries2 { re: m, im: TruncatedSeries2::zero(order, vars) },
            1 => ComplexSeries2 { re: TruncatedSeries2::zero(order, vars), im: m.neg() },
            2 => ComplexSeries2 { re: m.neg(), im: TruncatedSeries2::zero(order, vars) },
            _ => ComplexSeries2 { re: TruncatedSeries2::zero(order, vars), im: m },
        };
        out = out.add(&term)?;
    }
    Ok(out)
}

/// q̂ = (ĵ/32) exp(−∂S/∂j₁ + i ∂S/∂j₂) through total degree N in (l, l̄), with `s` the regular
/// part of S (degree ≥ 2) in (j₁, j₂), known through degree N.
pub fn complex_nome_series(s: &TruncatedSeries2, order: u32) -> Result<ComplexSeries2> {
    if order < 1 || s.order() < order {
        return Err(Error::Order(format!("q̂ through degree {order} needs S through degree {order}")));
    }
    let s = s.relabel(["j1", "j2"]);
    let e = order - 1;
    let s1 = to_l_coordinates(&s.partial(Var::First).truncate(e), e)?;
    let s2 = to_l_coordinates(&s.partial(Var::Second).truncate(e), e)?;
    // −S₁ + i S₂
    let exponent = ComplexSeries2 { re: s1.re.neg().sub(&s2.im)?, im: s2.re.sub(&s1.im)? };
    let ex = exponent.exp()?;
    let l = TruncatedSeries2::variable(order, ["l", "lb"], Var::First);
    let lift = |t: &TruncatedSeries2| TruncatedSeries2::from_terms(order, ["l", "lb"], t.terms().map(|(k, v)| (*k, v.clone())));
    Ok(ComplexSeries2 { re: l.mul(&lift(&ex.re))?, im: l.mul(&lift(&ex.im))? })
}

/// At l̄ = l the complex nome must reduce to the pendulum nome q(l).
pub fn complex_nome_reduction_check(qhat: &ComplexSeries2, nome: &NomeSeries) -> Result<()> {
    let (re, im) = qhat.diagonal();
    let n = re.order().min(nome.q_of_l.order());
    if re.truncate(n) != nome.q_of_l.truncate(n) || im.coeffs().iter().any(|c| *c != 0) {
        return Err(Error::Verification(format!("q̂ at l̄ = l gives {re} + i({im}), expected {}", nome.q_of_l)));
    }
    Ok(())
}
