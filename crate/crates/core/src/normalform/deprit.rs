use rug::{Integer, Rational};

use super::{seed_hamiltonian, PClassFunction};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries2;

/// Output of the Deprit triangle: normal-form terms Kₙ and Lie generators Wₙ
/// indexed by perturbation order n (grade 2n+2), both without the n! factor.
#[derive(Clone, Debug)]
pub struct LieNormalForm {
    pub max_grade: u32,
    pub kernels: Vec<PClassFunction>,
    pub generators: Vec<PClassFunction>,
}

impl LieNormalForm {
    /// H(J₁,J₂) as a series; grade 2n+2 maps to total degree n+1.
    pub fn series(&self) -> TruncatedSeries2 {
        let order = self.max_grade / 2;
        let mut k = PClassFunction::zero();
        for term in &self.kernels {
            k.add_assign(term);
        }
        k.to_series(order).expect("normal form is θ₁-independent")
    }
}

fn factorial(n: usize) -> Rational {
    Rational::from((1..=n as u32).fold(Integer::from(1), |acc, k| acc * k))
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::from(Integer::from(Integer::binomial_u(n as u32, k as u32)))
}

/// Deprit's triangle for H = Σ εⁿ/n! Hₙ with H₀ = J₁ and L_W f = {f, W}:
/// T[j][i] = T[j−1][i+1] + Σₖ C(i,k) {T[j−1][i−k], W_{k+1}}, Kₙ = T[n][0].
pub fn deprit_normalize(h: &PClassFunction, max_grade: u32) -> Result<LieNormalForm> {
    if max_grade < 2 {
        return Err(Error::Order(format!("normal form needs grade ≥ 2, got {max_grade}")));
    }
    let nmax = ((max_grade - 2) / 2) as usize;
    let h0 = h.grade_part(2);
    if h0 != PClassFunction::j1() {
        return Err(Error::Domain("quadratic part must be J1".into()));
    }
    let hn: Vec<PClassFunction> =
        (0..=nmax).map(|n| h.grade_part(2 * n as i64 + 2).scale(&factorial(n))).collect();
    // t[j][i] lives on diagonal i + j
    let mut t: Vec<Vec<PClassFunction>> = vec![vec![hn[0].clone()]];
    let mut w: Vec<PClassFunction> = vec![PClassFunction::zero()];
    for n in 1..=nmax {
        t[0].push(hn[n].clone());
        for j in 1..=n {
            let i = n - j;
            let mut next = t[j - 1][i + 1].clone();
            for k in 0..=i {
                if k + 1 == n {
                    continue;
                }
                let br = t[j - 1][i - k].poisson_bracket(&w[k + 1]);
                next.add_assign(&br.scale(&binom(i, k)));
            }
            if t.len() <= j {
                t.push(Vec::new());
            }
            t[j].push(next);
        }
        let (kernel, gen) = t[n][0].homological_solve();
        let correction = h0.poisson_bracket(&gen);
        for j in 1..=n {
            t[j][n - j].add_assign(&correction);
        }
        debug_assert_eq!(t[n][0], kernel);
        w.push(gen);
    }
    let kernels = (0..=nmax).map(|n| t[n][0].scale(&factorial(n).recip())).collect();
    let generators = w.iter().enumerate().map(|(n, g)| g.scale(&factorial(n.saturating_sub(1)).recip())).collect();
    Ok(LieNormalForm { max_grade, kernels, generators })
}

/// Birkhoff normal form of the spherical pendulum through ℘-grade `order`.
pub fn lie_normalize(order: u32) -> Result<TruncatedSeries2> {
    let h = seed_hamiltonian(order)?;
    Ok(deprit_normalize(&h, order)?.series())
}

/// exp(L_W) f truncated at `max_grade`, for W of grade ≥ 3.
pub fn lie_transform(f: &PClassFunction, w: &PClassFunction, max_grade: i64) -> PClassFunction {
    let mut out = f.up_to_grade(max_grade);
    let mut term = out.clone();
    let mut k = 1u32;
    loop {
        term = term.poisson_bracket(w).up_to_grade(max_grade).scale(&Rational::from((1, k)));
        if term.is_zero() {
            break;
        }
        out.add_assign(&term);
        k += 1;
    }
    out
}

/// Normalization by successive single-generator Lie transforms, one grade at a time.
/// Independent of the Deprit bookkeeping; used as a cross-check.
pub fn successive_normalize(h: &PClassFunction, max_grade: u32) -> Result<(TruncatedSeries2, Vec<PClassFunction>)> {
    if max_grade < 2 {
        return Err(Error::Order(format!("normal form needs grade ≥ 2, got {max_grade}")));
    }
    let mut cur = h.up_to_grade(max_grade as i64);
    let mut gens = Vec::new();
    for g in (4..=max_grade as i64).step_by(2) {
        let (_, w) = cur.grade_part(g).homological_solve();
        cur = lie_transform(&cur, &w, max_grade as i64);
        gens.push(w);
    }
    let range = cur.range();
    if !range.is_zero() {
        return Err(Error::Verification(format!("successive normalization left θ-dependent terms: {range}")));
    }
    Ok((cur.to_series(max_grade / 2).expect("kernel only"), gens))
}
