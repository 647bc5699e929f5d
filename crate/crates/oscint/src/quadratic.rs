//! Non-degenerate quadratic phases in n ≤ 3 variables.
//!
//! For I(λ) = ∫_{ℝⁿ} e^{iλ⟨Ax,x⟩/2} a(x) dx with A real symmetric
//! non-singular and a Schwartz, the expansion
//!
//! ```text
//! I(λ) ≈ (2π)^{n/2} e^{iπ·sgnA/4} |det A|^{−1/2} · Σ_k C_k λ^{−k−n/2}
//! ```
//!
//! has coefficients C_k obtained by applying the second-order operator
//! −i(1/2)⟨A^{−1}D, D⟩ k times to a and reading the value at 0. The operator
//! is applied to truncated Taylor tables (formal power series), never by
//! numerical differentiation, so coefficients are exact given exact Taylor
//! data. The module also houses the Jacobi signature/determinant computation
//! and the Fresnel transform identity F[e^{±ix²/2}](ξ) = e^{±iπ/4}e^{∓iξ²/2}
//! checked through the cutoff-regularization engine.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::amplitude::MultivariateAmplitude;
use crate::cutoff::Cutoff;
use crate::error::{Error, Result};
use crate::fresnel::{FresnelParams, Sign};
use crate::regularize::{regularized_integral, EpsilonSchedule};
use crate::stationary::OracleValue;
use crate::Complex;

/// Eigenvalues below this fraction of the matrix norm count as zero.
const SINGULAR_REL: f64 = 1e-12;

/// Real symmetric matrix, dimension 1..=3. Symmetry is exact by
/// construction: only one triangle is ever stored logically, and the
/// row-major constructor rejects asymmetric input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    m: [[f64; 3]; 3],
}

impl SymmetricMatrix {
    /// From a row-major n×n list; entries must be finite and exactly
    /// symmetric.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if n == 0 || n > 3 {
            return Err(Error::Domain(format!(
                "symmetric matrices support dimensions 1..=3, got {n}"
            )));
        }
        if entries.len() != n * n {
            return Err(Error::Domain(format!(
                "dimension {n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        let mut m = [[0.0; 3]; 3];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = entries[i * n + j];
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m[i][j] != m[j][i] {
                    return Err(Error::Domain(format!(
                        "matrix is not symmetric at ({i},{j}): {} vs {}",
                        m[i][j], m[j][i]
                    )));
                }
            }
        }
        Ok(SymmetricMatrix { n, m })
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut full = vec![0.0; n * n];
        for (i, &v) in entries.iter().enumerate() {
            full[i * n + i] = v;
        }
        SymmetricMatrix::from_row_major(n, &full)
    }

    pub fn identity(n: usize) -> Result<Self> {
        SymmetricMatrix::diagonal(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.m[i][j] * self.m[i][j];
            }
        }
        s.sqrt()
    }

    /// Eigenvalues by cyclic Jacobi sweeps; exact for already-diagonal
    /// input (no rotation is ever applied to it).
    fn eigenvalues(&self) -> [f64; 3] {
        let n = self.n;
        let mut a = self.m;
        let norm = self.frobenius();
        if norm == 0.0 {
            return [0.0; 3];
        }
        for _sweep in 0..50 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[i][j] * a[i][j];
                }
            }
            if off.sqrt() <= 1e-14 * norm {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    if a[p][q].abs() <= 1e-300 {
                        continue;
                    }
                    let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p][k];
                        let aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig = [0.0; 3];
        for (i, e) in eig.iter_mut().enumerate().take(n) {
            *e = a[i][i];
        }
        eig
    }

    /// A^{−1} by the adjugate; the caller has already ruled out singularity.
    fn inverse(&self, det: f64) -> [[f64; 3]; 3] {
        let m = &self.m;
        let mut inv = [[0.0; 3]; 3];
        match self.n {
            1 => inv[0][0] = 1.0 / m[0][0],
            2 => {
                inv[0][0] = m[1][1] / det;
                inv[1][1] = m[0][0] / det;
                inv[0][1] = -m[0][1] / det;
                inv[1][0] = -m[1][0] / det;
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = match i {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let (c0, c1) = match j {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        // Adjugate transposes the cofactor matrix; symmetry
                        // makes the transpose a no-op.
                        inv[i][j] = sign * minor / det;
                    }
                }
            }
        }
        inv
    }
}

/// Signature (#positive − #negative eigenvalues) and determinant via Jacobi
/// diagonalization. Eigenvalues of magnitude below 1e−12 of the matrix norm
/// make the matrix singular, which is an error here: every consumer needs
/// A^{−1} or |det A|^{−1/2}.
pub fn signature_and_det(a: &SymmetricMatrix) -> Result<(i32, f64)> {
    let eig = a.eigenvalues();
    let norm = a.frobenius();
    let mut sgn = 0i32;
    let mut det = 1.0;
    for &e in eig.iter().take(a.dim()) {
        if e.abs() <= SINGULAR_REL * norm || norm == 0.0 {
            return Err(Error::SingularMatrix(format!(
                "eigenvalue {e:.3e} below 1e-12 of the matrix norm {norm:.3e}"
            )));
        }
        sgn += if e > 0.0 { 1 } else { -1 };
        det *= e;
    }
    Ok((sgn, det))
}

/// Expansion of ∫_{ℝⁿ} e^{iλ⟨Ax,x⟩/2} a(x) dx: value ≈
/// prefactor · Σ_k terms[k] · λ^{−k−n/2}.
#[derive(Debug, Clone)]
pub struct QuadExpansion {
    pub dim: usize,
    pub signature: i32,
    pub determinant: f64,
    /// (2π)^{n/2} e^{iπ·sgnA/4} |det A|^{−1/2}.
    pub prefactor: Complex,
    /// terms[k] pairs with λ^{−k−n/2}.
    pub terms: Vec<Complex>,
}

impl QuadExpansion {
    pub fn partial_sum(&self, lambda: f64) -> Complex {
        let half_n = self.dim as f64 / 2.0;
        self.terms
            .iter()
            .enumerate()
            .map(|(k, c)| c * lambda.powf(-(k as f64) - half_n))
            .sum::<Complex>()
            * self.prefactor
    }
}

/// Truncated Taylor series over n ≤ 3 variables: coefficient of x^α keyed by
/// the padded multi-index.
struct Table {
    n: usize,
    deg: u32,
    c: HashMap<[u32; 3], Complex>,
}

fn multi_indices(n: usize, deg: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    let lim = |active: bool| if active { deg } else { 0 };
    for i in 0..=deg {
        for j in 0..=lim(n >= 2) {
            for k in 0..=lim(n >= 3) {
                if i + j + k <= deg {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

impl Table {
    fn from_amplitude(a: &MultivariateAmplitude, deg: u32) -> Result<Table> {
        let n = a.dim();
        let mut c = HashMap::new();
        for alpha in multi_indices(n, deg) {
            let d = a.taylor_at_zero(&alpha[..n])?;
            if d != 0.0 {
                let afac: f64 = alpha.iter().map(|&k| factorial(k)).product();
                c.insert(alpha, Complex::new(d / afac, 0.0));
            }
        }
        Ok(Table { n, deg, c })
    }

    fn coeff(&self, alpha: [u32; 3]) -> Complex {
        self.c.get(&alpha).copied().unwrap_or(Complex::ZERO)
    }

    /// One application of −i(1/2)⟨A^{−1}D, D⟩ with D = (1/i)∂. The two D's
    /// contribute (1/i)² = −1, so the series operator is +i(1/2)·Σ_{jl}
    /// (A^{−1})_{jl} ∂_j∂_l; this is the single site where the D-vs-∂
    /// phase bookkeeping happens.
    fn apply_operator(&self, inv: &[[f64; 3]; 3]) -> Table {
        let half_i = Complex::new(0.0, 0.5);
        let deg = self.deg.saturating_sub(2);
        let mut c = HashMap::new();
        for beta in multi_indices(self.n, deg) {
            let mut acc = Complex::ZERO;
            for j in 0..self.n {
                for l in 0..self.n {
                    if inv[j][l] == 0.0 {
                        continue;
                    }
                    let mut alpha = beta;
                    alpha[l] += 1;
                    let fac_l = alpha[l] as f64;
                    alpha[j] += 1;
                    let fac_j = alpha[j] as f64;
                    // ∂_j∂_l maps the x^α coefficient onto x^{α−e_j−e_l}
                    // with the usual falling factors.
                    acc += self.coeff(alpha) * (inv[j][l] * fac_j * fac_l);
                }
            }
            if acc != Complex::ZERO {
                c.insert(beta, acc * half_i);
            }
        }
        Table { n: self.n, deg, c }
    }
}

/// Builds the N-term expansion: coefficient k is (1/k!) times the k-fold
/// operator application read at x = 0. Requires A non-singular and exact
/// amplitude Taylor data to degree 2N.
pub fn quadratic_expansion(
    a_mat: &SymmetricMatrix,
    amp: &MultivariateAmplitude,
    n_terms: u32,
) -> Result<QuadExpansion> {
    if n_terms == 0 {
        return Err(Error::Domain("term count N must be ≥ 1".into()));
    }
    if amp.dim() != a_mat.dim() {
        return Err(Error::Domain(format!(
            "amplitude dimension {} does not match matrix dimension {}",
            amp.dim(),
            a_mat.dim()
        )));
    }
    let depth = 2 * n_terms;
    if depth > amp.degree_cap() {
        return Err(Error::TaylorCap {
            k: depth as usize,
            cap: amp.degree_cap() as usize,
        });
    }
    let (signature, determinant) = signature_and_det(a_mat)?;
    let inv = a_mat.inverse(determinant);
    let n = a_mat.dim();

    let mut table = Table::from_amplitude(amp, depth)?;
    let mut terms = Vec::with_capacity(n_terms as usize);
    terms.push(table.coeff([0, 0, 0]));
    let mut kfac = 1.0;
    for k in 1..n_terms {
        table = table.apply_operator(&inv);
        kfac *= k as f64;
        terms.push(table.coeff([0, 0, 0]) / kfac);
    }

    let prefactor = (2.0 * PI).powf(n as f64 / 2.0) / determinant.abs().sqrt()
        * Complex::from_polar(1.0, FRAC_PI_4 * signature as f64);
    Ok(QuadExpansion {
        dim: n,
        signature,
        determinant,
        prefactor,
        terms,
    })
}

/// Quadrature oracle for ∫_{ℝⁿ} e^{iλ⟨Ax,x⟩/2} e^{−|x|²/2} dx with diagonal
/// A = diag(d): the integrand factors exactly per axis, so the value is the
/// product of one-dimensional full-line quadratures ∫ e^{i(λd_j/2)x²}
/// e^{−x²/2} dx.
pub fn diagonal_gaussian_oracle(diag: &[f64], lambda: f64) -> Result<OracleValue> {
    if diag.is_empty() || diag.len() > 3 {
        return Err(Error::Domain(format!(
            "diagonal oracle supports dimensions 1..=3, got {}",
            diag.len()
        )));
    }
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
    }
    let gauss = crate::amplitude::Amplitude::gaussian();
    let mut value = Complex::new(1.0, 0.0);
    let mut rel_err = 0.0;
    for &d in diag {
        if d == 0.0 {
            return Err(Error::SingularMatrix(
                "diagonal phase entry is zero".into(),
            ));
        }
        let sign = if d > 0.0 { Sign::Plus } else { Sign::Minus };
        let factor =
            crate::stationary::weighted_full_line_value(2, &gauss, sign, lambda * d.abs() / 2.0)?;
        rel_err += factor.error_estimate / factor.value.norm().max(1e-300);
        value *= factor.value;
    }
    Ok(OracleValue {
        value,
        error_estimate: rel_err * value.norm(),
    })
}

/// Both sides of the Fresnel transform identity
/// (2π)^{−1/2}·Os-∫ e^{−ixξ} e^{±ix²/2} dx = e^{±iπ/4} e^{∓iξ²/2}.
///
/// Completing the square moves the ξ-dependence into the exact factor
/// e^{∓iξ²/2} (the oscillatory integral is shift-invariant in the limit, by
/// cutoff independence); the remaining pure Fresnel integral is computed by
/// the ε-extrapolated regularization engine, not from the closed form, so
/// the identity is a genuine cross-check. |ξ| ≤ 10 keeps the square
/// completion well inside the checked regime.
pub fn fresnel_fourier_check(sign: Sign, xi: f64) -> Result<(Complex, Complex)> {
    if !xi.is_finite() || xi.abs() > 10.0 {
        return Err(Error::Domain(format!("|xi| must be ≤ 10, got {xi}")));
    }
    let s = sign.factor();
    // Os-∫_ℝ e^{±ix²/2} dx = 2√2 · Os-∫₀^∞ e^{±iy²} dy  (x = √2·y, evenness).
    let half = regularized_integral(
        FresnelParams::new(2.0, 1.0),
        sign,
        &Cutoff::Gaussian,
        &EpsilonSchedule::default_geometric(),
    )?;
    let square_phase = Complex::from_polar(1.0, -s * xi * xi / 2.0);
    let lhs = half.value * (2.0 * 2f64.sqrt() / (2.0 * PI).sqrt()) * square_phase;
    let rhs = sign.phase(FRAC_PI_4) * square_phase;
    Ok((lhs, rhs))
}
