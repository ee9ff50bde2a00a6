use rug::Rational;

use crate::error::{Error, Result};

pub type Mat4 = [[Rational; 4]; 4];

fn mat(rows: [[i64; 4]; 4]) -> Mat4 {
    rows.map(|r| r.map(Rational::from))
}

fn transpose(a: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(Rational::new(), |acc, k| acc + Rational::from(&a[i][k] * &b[k][j])))
    })
}

fn scale(a: &Mat4, f: &Rational) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| Rational::from(&a[i][j] * f)))
}

/// Linear normal-form data in the ordering (ξ, p_ξ, η, p_η) → (q₁, p₁, q₂, p₂).
/// M = M₀/√2 with integer M₀, so MᵀXM = M₀ᵀXM₀/2 stays rational.
#[derive(Clone, Debug)]
pub struct LinearNFData {
    pub j4: Mat4,
    pub hess_h: Mat4,
    pub hess_j1: Mat4,
    pub hess_j2: Mat4,
    pub m_times_sqrt2: Mat4,
    pub nu: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearNFReport {
    pub symplectic: bool,
    pub preserves_j2: bool,
    pub normalizes_h: bool,
    /// Eigenvalues of J₄D²H with multiplicities.
    pub eigenvalues: Vec<(i64, usize)>,
}

impl LinearNFReport {
    pub fn ok(&self) -> bool {
        self.symplectic && self.preserves_j2 && self.normalizes_h && self.eigenvalues == vec![(-1, 2), (1, 2)]
    }
}

pub fn linear_nf_data() -> LinearNFData {
    LinearNFData {
        j4: mat([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
        // H₂ = (p_ξ² + p_η²)/2 − (ξ² + η²)/2
        hess_h: mat([[-1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]),
        // J₁ = q₁p₁ + q₂p₂
        hess_j1: mat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
        // J₂ = q₁p₂ − q₂p₁ (same form as ξp_η − ηp_ξ)
        hess_j2: mat([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]]),
        // √2ξ = q₁ − p₁, √2p_ξ = q₁ + p₁, √2η = q₂ − p₂, √2p_η = q₂ + p₂
        m_times_sqrt2: mat([[1, -1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, 1, 1]]),
        nu: Rational::from(1),
    }
}

/// Checks MᵀJ₄M = J₄, MᵀD²J₂M = D²J₂, MᵀD²HM = νD²J₁ exactly and the spectrum of J₄D²H.
pub fn verify_linear_nf() -> Result<(LinearNFData, LinearNFReport)> {
    let d = linear_nf_data();
    let half = Rational::from((1, 2));
    let conj = |x: &Mat4| scale(&matmul(&transpose(&d.m_times_sqrt2), &matmul(x, &d.m_times_sqrt2)), &half);
    let symplectic = conj(&d.j4) == d.j4;
    let preserves_j2 = conj(&d.hess_j2) == d.hess_j2;
    let normalizes_h = conj(&d.hess_h) == scale(&d.hess_j1, &d.nu);

    let a = matmul(&d.j4, &d.hess_h);
    let a2 = matmul(&a, &a);
    let identity = mat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let nu2 = Rational::from(&d.nu * &d.nu);
    let trace = (0..4).fold(Rational::new(), |acc, i| acc + &a[i][i]);
    // A² = ν²I means eigenvalues ±ν (A diagonalizable); trace 0 splits them evenly
    let eigenvalues = if a2 == scale(&identity, &nu2) && trace == 0 && d.nu == 1 {
        vec![(-1, 2), (1, 2)]
    } else {
        Vec::new()
    };
    let report = LinearNFReport { symplectic, preserves_j2, normalizes_h, eigenvalues };
    if !report.ok() {
        return Err(Error::Verification(format!("linear normal form identities fail: {report:?}")));
    }
    Ok((d, report))
}
