//! Stationary phase expansions for power phases in one variable.
//!
//! For I±(λ) = ∫ e^{±iλx^p} a(x) dx with Schwartz amplitude a, the value
//! admits an expansion in powers λ^{−(k+1)/p} whose coefficients are Fresnel
//! factors times the Taylor data of a at the stationary point x = 0. This
//! module builds those expansions, computes quadrature oracles for the exact
//! values (absolutely convergent, no regularization needed), and fits decay
//! slopes of values and remainders on log-spaced λ grids so the claimed
//! orders can be checked empirically.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::fresnel::{full_line_term_coefficient, Sign};
use crate::quad::{power_phase_breakpoints, sum_panels};
use crate::special::gamma;
use crate::Complex;

/// Largest oscillation-panel count per oracle evaluation at the preferred
/// π/2 phase step; longer trains fall back to coarser steps.
const PANEL_CAP: usize = 3_000_000;

/// One term c·λ^{−e} of an asymptotic expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub exponent: f64,
    pub coefficient: Complex,
}

/// Partial expansion Σ_k c_k λ^{−e_k} with a claimed remainder order.
///
/// Invariant: exponents strictly increasing. The remainder claim is
/// O(λ^{−remainder_exponent}); empirical remainders are usually steeper
/// (the first omitted term), the claim is only an upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticExpansion {
    pub terms: Vec<ExpansionTerm>,
    pub remainder_exponent: f64,
}

impl AsymptoticExpansion {
    /// Σ_k c_k λ^{−e_k}.
    pub fn partial_sum(&self, lambda: f64) -> Complex {
        self.terms
            .iter()
            .map(|t| t.coefficient * lambda.powf(-t.exponent))
            .sum()
    }

    /// True when every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.norm() == 0.0)
    }
}

/// Increasing λ grid, all λ ≥ 1 (the asymptotic statements assume λ ≥ 1).
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    values: Vec<f64>,
}

impl LambdaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("lambda grid must be non-empty".into()));
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::Domain("lambda grid must be strictly increasing".into()));
            }
        }
        if values.iter().any(|&v| !v.is_finite() || v < 1.0) {
            return Err(Error::Domain("lambda grid entries must be finite and ≥ 1".into()));
        }
        Ok(LambdaGrid { values })
    }

    /// n points log-spaced over [lo, hi].
    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) || lo < 1.0 {
            return Err(Error::Domain(format!(
                "log grid needs n ≥ 2 and 1 ≤ lo < hi, got n = {n}, [{lo}, {hi}]"
            )));
        }
        let (llo, lhi) = (lo.ln(), hi.ln());
        let values = (0..n)
            .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
            .collect();
        LambdaGrid::new(values)
    }

    /// The default verification grid: 5 log-spaced points in [10², 10⁴].
    pub fn default_grid() -> Self {
        LambdaGrid::log_spaced(1e2, 1e4, 5).expect("static grid")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// log₁₀ span of the grid.
    pub fn decades(&self) -> f64 {
        (self.values[self.values.len() - 1] / self.values[0]).log10()
    }
}

/// Expansion of ∫₀^∞ e^{±iλx^p} a(x) dx in λ^{−(k+1)/p}, k = 0..N−1:
/// coefficient k is p^{−1}·e^{±iπ(k+1)/(2p)}·Γ((k+1)/p)·a^{(k)}(0)/k!.
/// Requires N + 1 > p; the remainder claim is O(λ^{−((N+1)/p − 1)}).
pub fn half_line_expansion(
    p: f64,
    a: &Amplitude,
    sign: Sign,
    n: u32,
) -> Result<AsymptoticExpansion> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!("phase power must be positive, got {p}")));
    }
    if n == 0 {
        return Err(Error::Domain("expansion order N must be ≥ 1".into()));
    }
    if (n + 1) as f64 <= p {
        return Err(Error::Domain(format!(
            "expansion order violates N + 1 > p: N = {n}, p = {p}"
        )));
    }
    let mut terms = Vec::with_capacity(n as usize);
    let mut kfac = 1.0;
    for k in 0..n {
        if k > 0 {
            kfac *= k as f64;
        }
        let g = gamma(Complex::new((k + 1) as f64 / p, 0.0))?;
        let coefficient =
            sign.phase(PI * (k + 1) as f64 / (2.0 * p)) * g / p * (a.taylor_at_zero(k)? / kfac);
        terms.push(ExpansionTerm {
            exponent: (k + 1) as f64 / p,
            coefficient,
        });
    }
    Ok(AsymptoticExpansion {
        terms,
        remainder_exponent: (n + 1) as f64 / p - 1.0,
    })
}

/// Expansion of ∫_{−∞}^∞ e^{±iλx^m} a(x) dx, integer m ≥ 1, in λ^{−(k+1)/m}:
/// coefficient k is the full-line Fresnel factor times a^{(k)}(0)/k!.
/// Requires N + 1 > m; the remainder claim is O(λ^{−((N+1)/m − 1)}).
pub fn full_line_expansion(
    m: u32,
    a: &Amplitude,
    sign: Sign,
    n: u32,
) -> Result<AsymptoticExpansion> {
    if m == 0 {
        return Err(Error::Domain("phase power m must be a positive integer".into()));
    }
    if n == 0 {
        return Err(Error::Domain("expansion order N must be ≥ 1".into()));
    }
    if n + 1 <= m {
        return Err(Error::Domain(format!(
            "expansion order violates N + 1 > m: N = {n}, m = {m}"
        )));
    }
    let mut terms = Vec::with_capacity(n as usize);
    let mut kfac = 1.0;
    for k in 0..n {
        if k > 0 {
            kfac *= k as f64;
        }
        let coefficient = full_line_term_coefficient(m, k, sign)? * (a.taylor_at_zero(k)? / kfac);
        terms.push(ExpansionTerm {
            exponent: (k + 1) as f64 / m as f64,
            coefficient,
        });
    }
    Ok(AsymptoticExpansion {
        terms,
        remainder_exponent: (n + 1) as f64 / m as f64 - 1.0,
    })
}

/// A quadrature value with its accumulated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct OracleValue {
    pub value: Complex,
    pub error_estimate: f64,
}

/// Upper integration cutoff beyond which x^{q−1}·a(x) is below 1e−18 of its
/// peak. Exact for compact support; solved from the exponent for
/// polynomial-Gaussian amplitudes; scanned for custom ones.
fn upper_cutoff(a: &Amplitude, q: f64) -> f64 {
    if let Some((_, hi)) = a.support() {
        return hi.max(1e-3);
    }
    let pow = (q - 1.0).max(0.0);
    match a {
        Amplitude::PolyGaussian(c) => {
            let mass: f64 = c.iter().map(|v| v.abs()).sum();
            if mass == 0.0 {
                return 1.0;
            }
            let extra = pow + (c.len() as f64 - 1.0).max(0.0);
            // Solve x²/2 − extra·ln x ≈ 45 + ln(mass) by fixed point.
            let target = 45.0 + mass.ln().max(0.0);
            let mut x = 4.0f64;
            for _ in 0..5 {
                x = (2.0 * (target + extra * x.ln())).sqrt();
            }
            x
        }
        Amplitude::Custom(_) => {
            let peak = (0..=5000)
                .map(|i| {
                    let x = 50.0 * i as f64 / 5000.0;
                    a.eval(x).abs() * (1.0 + x).powf(pow)
                })
                .fold(0.0f64, f64::max);
            if peak == 0.0 {
                return 1.0;
            }
            let mut hi = 1.0f64;
            for i in 0..=5000 {
                let x = 50.0 * i as f64 / 5000.0;
                if a.eval(x).abs() * (1.0 + x).powf(pow) > 1e-18 * peak {
                    hi = x;
                }
            }
            (hi + 0.5).min(50.0)
        }
        Amplitude::Bump { .. } => unreachable!("bump has support metadata"),
    }
}

/// Oscillation breakpoints for phase λx^p on [lo, hi], preferring π/2 phase
/// steps (negligible coherent rule bias over long trains) and widening to π
/// then 2π only when the π/2 train would exceed the panel cap.
fn oscillation_grid(lambda: f64, p: f64, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let total_phase = if lambda > 0.0 {
        lambda * (hi.powf(p) - lo.powf(p))
    } else {
        0.0
    };
    if total_phase < FRAC_PI_2 {
        let n = 64;
        return Ok((0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .collect());
    }
    let mut last = Err(Error::Domain("unreachable".into()));
    for dphase in [FRAC_PI_2, PI, 2.0 * PI] {
        last = power_phase_breakpoints(lambda, p, lo, hi, dphase, PANEL_CAP);
        if last.is_ok() {
            return last;
        }
    }
    last
}

/// I±_{p,q}[a](λ) = ∫₀^∞ e^{±iλx^p} x^{q−1} a(x) dx by direct panel
/// summation. Absolutely convergent for Schwartz a, so no regularization is
/// involved; λ = 0 is accepted as the phase-off sanity configuration.
///
/// The q < 1 endpoint singularity is removed by the substitution t = x^q on
/// the unit interval; panels elsewhere follow the oscillation of λx^p with
/// a width cap so the amplitude stays resolved.
pub fn weighted_half_line_value(
    p: f64,
    q: f64,
    a: &Amplitude,
    sign: Sign,
    lambda: f64,
) -> Result<OracleValue> {
    if !p.is_finite() || p <= 0.0 || !q.is_finite() || q <= 0.0 {
        return Err(Error::Domain(format!(
            "phase power and weight exponent must be positive, got p = {p}, q = {q}"
        )));
    }
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be finite and ≥ 0, got {lambda}")));
    }
    let s = sign.factor();
    let hi = upper_cutoff(a, q);
    let lo = a.support().map_or(0.0, |(l, _)| l.max(0.0));
    if lo >= hi {
        return Ok(OracleValue {
            value: Complex::ZERO,
            error_estimate: 0.0,
        });
    }

    let mut value = Complex::ZERO;
    let mut err = 0.0;

    let mut plain_lo = lo;
    if lo == 0.0 && q < 1.0 {
        // Unit-interval substitution t = x^q: the weight becomes dt/q and the
        // phase power rises to p/q, keeping the integrand bounded at 0.
        let t_end = hi.min(1.0).powf(q);
        let g = |t: f64| {
            let x = t.powf(1.0 / q);
            let phase = Complex::new(0.0, s * lambda * x.powf(p)).exp();
            phase * (a.eval(x) / q)
        };
        let pts = oscillation_grid(lambda, p / q, 0.0, t_end)?;
        let (v, e) = sum_panels(&g, &pts);
        value += v;
        err += e;
        plain_lo = hi.min(1.0);
    }

    if plain_lo < hi {
        let f = |x: f64| {
            let phase = Complex::new(0.0, s * lambda * x.powf(p)).exp();
            phase * (x.powf(q - 1.0) * a.eval(x))
        };
        let pts = oscillation_grid(lambda, p, plain_lo, hi)?;
        let (v, e) = sum_panels(&f, &pts);
        value += v;
        err += e;
    }

    Ok(OracleValue {
        value,
        error_estimate: err,
    })
}

/// ∫_{−∞}^∞ e^{±iλx^m} a(x) dx, integer m ≥ 1: the positive half plus the
/// reflected half (x → −x flips the phase sign exactly when m is odd).
pub fn weighted_full_line_value(
    m: u32,
    a: &Amplitude,
    sign: Sign,
    lambda: f64,
) -> Result<OracleValue> {
    if m == 0 {
        return Err(Error::Domain("phase power m must be a positive integer".into()));
    }
    let right = weighted_half_line_value(m as f64, 1.0, a, sign, lambda)?;
    let mirrored = reflect(a);
    let left_sign = if m % 2 == 1 { sign.flip() } else { sign };
    let left = weighted_half_line_value(m as f64, 1.0, &mirrored, left_sign, lambda)?;
    Ok(OracleValue {
        value: right.value + left.value,
        error_estimate: right.error_estimate + left.error_estimate,
    })
}

/// The amplitude x ↦ a(−x).
fn reflect(a: &Amplitude) -> Amplitude {
    match a {
        Amplitude::PolyGaussian(c) => {
            let flipped = c
                .iter()
                .enumerate()
                .map(|(i, &v)| if i % 2 == 1 { -v } else { v })
                .collect();
            Amplitude::PolyGaussian(flipped)
        }
        Amplitude::Bump { center, radius } => Amplitude::Bump {
            center: -center,
            radius: *radius,
        },
        Amplitude::Custom(c) => {
            let inner = c.clone();
            let derivs = c
                .derivs
                .iter()
                .enumerate()
                .map(|(k, &d)| if k % 2 == 1 { -d } else { d })
                .collect();
            let support = c.support.map(|(l, h)| (-h, -l));
            Amplitude::custom(
                format!("{}-reflected", c.name),
                move |x: f64| (inner.eval)(-x),
                derivs,
                support,
            )
        }
    }
}

/// Least-squares slope of log|value| against log λ.
///
/// Needs at least 4 points spanning at least 2 decades of λ, all magnitudes
/// positive. When the magnitudes spread by less than a factor of 10 the data
/// carries no decay trend (typically every point sits at the quadrature
/// noise floor) and the fit is reported as degenerate instead of returning a
/// meaningless slope.
pub fn decay_slope_fit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::Domain(format!(
            "slope fit needs ≥ 4 points, got {}",
            points.len()
        )));
    }
    for w in points.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Domain("slope fit grid must be strictly increasing".into()));
        }
    }
    if points
        .iter()
        .any(|&(l, v)| !l.is_finite() || l <= 0.0 || !v.is_finite() || v <= 0.0)
    {
        return Err(Error::Domain(
            "slope fit needs positive finite lambdas and magnitudes".into(),
        ));
    }
    let span = points[points.len() - 1].0 / points[0].0;
    if span < 100.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "slope fit grid must span ≥ 2 decades, got factor {span:.3}"
        )));
    }
    let (mut vmin, mut vmax) = (f64::INFINITY, 0.0f64);
    for &(_, v) in points {
        vmin = vmin.min(v);
        vmax = vmax.max(v);
    }
    if vmax / vmin < 10.0 {
        return Err(Error::DegenerateFit(format!(
            "magnitudes spread by only ×{:.2} across the grid; the data is \
             flat (noise floor), no decay slope can be fitted",
            vmax / vmin
        )));
    }
    let xs: Vec<f64> = points.iter().map(|&(l, _)| l.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let xm = xs.iter().sum::<f64>() / xs.len() as f64;
    let ym = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    Ok(sxy / sxx)
}

/// Which integral an expansion report targets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpansionDomain {
    /// ∫₀^∞ e^{±iλx^p} a(x) dx.
    HalfLine { p: f64 },
    /// ∫_{−∞}^∞ e^{±iλx^m} a(x) dx.
    FullLine { m: u32 },
}

/// One λ row of an expansion-versus-oracle comparison.
#[derive(Debug, Clone, Copy)]
pub struct RemainderRow {
    pub lambda: f64,
    pub oracle: Complex,
    pub oracle_error: f64,
    pub partial_sum: Complex,
    pub remainder_abs: f64,
}

/// Verification report: per-λ oracle, partial sum and remainder, the fitted
/// remainder slope against its threshold, and the one-constant envelope
/// check (remainder bound constant fitted at the smallest λ, then required
/// to hold within 10% across the grid).
#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub expansion: AsymptoticExpansion,
    pub rows: Vec<RemainderRow>,
    pub fitted_slope: f64,
    /// Slopes at or below this pass: −(remainder_exponent − 0.1).
    pub slope_threshold: f64,
    pub slope_pass: bool,
    /// max over the grid of |R(λ)|·λ^e / C − 1 with C = |R(λ₀)|·λ₀^e.
    pub envelope_margin: f64,
    pub envelope_pass: bool,
}

/// Builds the expansion for `domain`, evaluates the quadrature oracle over
/// the grid, and checks the remainder decay empirically. The grid must span
/// at least 2 decades so the slope fit is meaningful.
pub fn expansion_vs_oracle(
    domain: ExpansionDomain,
    a: &Amplitude,
    sign: Sign,
    n: u32,
    grid: &LambdaGrid,
) -> Result<ExpansionReport> {
    if grid.decades() < 2.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "verification grid must span ≥ 2 decades, got {:.3}",
            grid.decades()
        )));
    }
    let expansion = match domain {
        ExpansionDomain::HalfLine { p } => half_line_expansion(p, a, sign, n)?,
        ExpansionDomain::FullLine { m } => full_line_expansion(m, a, sign, n)?,
    };
    let mut rows = Vec::with_capacity(grid.values().len());
    for &lambda in grid.values() {
        let oracle = match domain {
            ExpansionDomain::HalfLine { p } => weighted_half_line_value(p, 1.0, a, sign, lambda)?,
            ExpansionDomain::FullLine { m } => weighted_full_line_value(m, a, sign, lambda)?,
        };
        let partial_sum = expansion.partial_sum(lambda);
        rows.push(RemainderRow {
            lambda,
            oracle: oracle.value,
            oracle_error: oracle.error_estimate,
            partial_sum,
            remainder_abs: (oracle.value - partial_sum).norm(),
        });
    }

    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.lambda, r.remainder_abs)).collect();
    let fitted_slope = decay_slope_fit(&pts)?;
    let slope_threshold = -(expansion.remainder_exponent - 0.1);
    let slope_pass = fitted_slope <= slope_threshold;

    let e = expansion.remainder_exponent;
    let c0 = rows[0].remainder_abs * rows[0].lambda.powf(e);
    let mut envelope_margin = 0.0f64;
    for r in &rows {
        envelope_margin = envelope_margin.max(r.remainder_abs * r.lambda.powf(e) / c0 - 1.0);
    }
    let envelope_pass = envelope_margin <= 0.10;

    Ok(ExpansionReport {
        expansion,
        rows,
        fitted_slope,
        slope_threshold,
        slope_pass,
        envelope_margin,
        envelope_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{adaptive, march_phase_breakpoints, QuadOptions};
    use std::f64::consts::SQRT_2;

    const SQRT_PI: f64 = 1.772453850905516;

    #[test]
    fn grid_validation() {
        assert!(LambdaGrid::new(vec![]).is_err());
        assert!(LambdaGrid::new(vec![0.5, 2.0]).is_err());
        assert!(LambdaGrid::new(vec![2.0, 2.0]).is_err());
        let g = LambdaGrid::default_grid();
        assert_eq!(g.values().len(), 5);
        assert!((g.decades() - 2.0).abs() < 1e-12);
        assert!((g.values()[2] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn half_line_expansion_coefficients() {
        // p=2, Gaussian: leading term (1/2)e^{iπ/4}Γ(1/2)λ^{−1/2}; the k=1
        // term dies with a'(0).
        let e = half_line_expansion(2.0, &Amplitude::gaussian(), Sign::Plus, 2).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert!((e.terms[0].exponent - 0.5).abs() < 1e-15);
        let want = Complex::from_polar(0.5 * SQRT_PI, PI / 4.0);
        assert!((e.terms[0].coefficient - want).norm() < 1e-14);
        assert_eq!(e.terms[1].coefficient, Complex::ZERO);
        assert!((e.remainder_exponent - 0.5).abs() < 1e-15);

        // p=1, Gaussian, N=3: i·λ^{−1}, 0, i·λ^{−3}.
        let e = half_line_expansion(1.0, &Amplitude::gaussian(), Sign::Plus, 3).unwrap();
        let i = Complex::I;
        assert!((e.terms[0].coefficient - i).norm() < 1e-14);
        assert!(e.terms[1].coefficient.norm() < 1e-14);
        assert!((e.terms[2].coefficient - i).norm() < 1e-13);
        assert!((e.remainder_exponent - 3.0).abs() < 1e-15);

        // A bump away from the origin contributes nothing to any order.
        let e =
            half_line_expansion(2.0, &Amplitude::bump(1.5, 0.5).unwrap(), Sign::Plus, 6).unwrap();
        assert!(e.is_zero());

        // N + 1 > p violated.
        assert!(half_line_expansion(2.0, &Amplitude::gaussian(), Sign::Plus, 1).is_err());
        assert!(half_line_expansion(0.0, &Amplitude::gaussian(), Sign::Plus, 2).is_err());
    }

    #[test]
    fn full_line_expansion_coefficients() {
        let e = full_line_expansion(2, &Amplitude::gaussian(), Sign::Plus, 2).unwrap();
        let want = Complex::from_polar(SQRT_PI, PI / 4.0);
        assert!((e.terms[0].coefficient - want).norm() < 1e-14);

        // m=3: leading (√3/3)Γ(1/3), then zeros from a'(0) and the cosine at
        // π/2.
        let e = full_line_expansion(3, &Amplitude::gaussian(), Sign::Plus, 3).unwrap();
        let gamma_third = 2.678938534707747633;
        let want = 3f64.sqrt() / 3.0 * gamma_third;
        assert!((e.terms[0].coefficient.re - want).abs() < 1e-12 * want);
        assert!(e.terms[0].coefficient.im.abs() < 1e-14);
        assert!(e.terms[1].coefficient.norm() < 1e-14);
        assert!(e.terms[2].coefficient.norm() < 1e-14);

        // Linear phase: the lone coefficient is exactly 0.
        let e = full_line_expansion(1, &Amplitude::gaussian(), Sign::Plus, 1).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert!(e.terms[0].coefficient.norm() < 1e-15);

        assert!(full_line_expansion(3, &Amplitude::gaussian(), Sign::Plus, 2).is_err());
        assert!(full_line_expansion(0, &Amplitude::gaussian(), Sign::Plus, 1).is_err());
    }

    #[test]
    fn half_line_oracle_against_closed_forms() {
        // Phase off: ∫₀^∞ e^{−x²/2} dx = √(π/2).
        let v = weighted_half_line_value(2.0, 1.0, &Amplitude::gaussian(), Sign::Plus, 0.0)
            .unwrap();
        let want = SQRT_PI / SQRT_2;
        assert!((v.value.re - want).abs() < 1e-12, "{}", v.value);
        assert!(v.value.im.abs() < 1e-14);

        // ∫₀^∞ e^{iλx²}e^{−x²/2} dx = (1/2)√(π/(1/2 − iλ)).
        for lambda in [1.0, 10.0, 250.0] {
            let v = weighted_half_line_value(2.0, 1.0, &Amplitude::gaussian(), Sign::Plus, lambda)
                .unwrap();
            let want = 0.5 * (Complex::new(PI, 0.0) / Complex::new(0.5, -lambda)).sqrt();
            assert!(
                (v.value - want).norm() < 1e-10 * want.norm(),
                "lambda {lambda}: {} vs {want}",
                v.value
            );
        }

        // Minus sign conjugates (real amplitude).
        let plus = weighted_half_line_value(2.0, 1.0, &Amplitude::gaussian(), Sign::Plus, 7.0)
            .unwrap();
        let minus = weighted_half_line_value(2.0, 1.0, &Amplitude::gaussian(), Sign::Minus, 7.0)
            .unwrap();
        assert!((plus.value.conj() - minus.value).norm() < 1e-12);
    }

    #[test]
    fn half_line_oracle_fractional_weight() {
        // q = 1/2 exercises the endpoint substitution; λ = 0 gives
        // ∫₀^∞ x^{−1/2}e^{−x²/2} dx = 2^{−1/4}Γ(1/4)/√2 = Γ(1/4)/2^{3/4}.
        let v = weighted_half_line_value(2.0, 0.5, &Amplitude::gaussian(), Sign::Plus, 0.0)
            .unwrap();
        let gamma_quarter = 3.625609908221908311;
        let want = gamma_quarter / 2f64.powf(0.75);
        assert!((v.value.re - want).abs() < 1e-10 * want, "{}", v.value);
    }

    #[test]
    fn full_line_oracle_evenness_and_reflection() {
        // Even amplitude, even m: full line = 2 × half line.
        for (amp, lambda) in [
            (Amplitude::gaussian(), 10.0),
            (Amplitude::bump(0.0, 1.0).unwrap(), 50.0),
        ] {
            let full = weighted_full_line_value(2, &amp, Sign::Plus, lambda).unwrap();
            let half = weighted_half_line_value(2.0, 1.0, &amp, Sign::Plus, lambda).unwrap();
            assert!(
                (full.value - 2.0 * half.value).norm() <= 1e-8 * full.value.norm(),
                "lambda {lambda}: {} vs 2×{}",
                full.value,
                half.value
            );
        }

        // Odd phase, asymmetric amplitude: brute-force cross-check on a
        // marched grid over [−9, 9].
        let a = Amplitude::poly_gaussian(vec![0.5, 1.0]).unwrap();
        let lambda = 2.0;
        let f = |x: f64| Complex::new(0.0, lambda * x.powi(3)).exp() * a.eval(x);
        let pts = march_phase_breakpoints(
            |x| 3.0 * lambda * x * x,
            -9.0,
            9.0,
            FRAC_PI_2,
            0.25,
            200_000,
        )
        .unwrap();
        let brute = adaptive(
            &f,
            &pts,
            &QuadOptions {
                rel_tol: 1e-13,
                abs_tol: 1e-15,
                max_panels: pts.len() + 4096,
            },
        )
        .unwrap();
        let v = weighted_full_line_value(3, &a, Sign::Plus, lambda).unwrap();
        assert!(
            (v.value - brute.0).norm() < 1e-10 * brute.0.norm().max(1.0),
            "{} vs {}",
            v.value,
            brute.0
        );
    }

    #[test]
    fn slope_fit_contract() {
        let grid = LambdaGrid::default_grid();
        let pts: Vec<(f64, f64)> = grid
            .values()
            .iter()
            .map(|&l| (l, 3.0 * l.powf(-1.5)))
            .collect();
        let s = decay_slope_fit(&pts).unwrap();
        assert!((s + 1.5).abs() < 1e-12);

        assert!(decay_slope_fit(&pts[..3]).is_err());
        let short: Vec<(f64, f64)> = (0..5).map(|i| (10.0 + i as f64, 1.0)).collect();
        assert!(decay_slope_fit(&short).is_err());

        // Flat data at a noise floor is reported as degenerate.
        let noise: Vec<(f64, f64)> = grid
            .values()
            .iter()
            .map(|&l| (l, 1e-16 * (1.0 + (l.ln()).sin().abs())))
            .collect();
        assert!(matches!(decay_slope_fit(&noise), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn gaussian_full_line_remainder_order() {
        // Small grid keeps the test quick; the default grid runs in the
        // acceptance suite.
        let grid = LambdaGrid::log_spaced(10.0, 1e3, 5).unwrap();
        let report = expansion_vs_oracle(
            ExpansionDomain::FullLine { m: 2 },
            &Amplitude::gaussian(),
            Sign::Plus,
            2,
            &grid,
        )
        .unwrap();
        assert!(report.slope_pass, "slope {}", report.fitted_slope);
        assert!(report.envelope_pass, "margin {}", report.envelope_margin);
        // Empirically the remainder tracks the first omitted term λ^{−3/2}.
        assert!(
            (report.fitted_slope + 1.5).abs() < 0.1,
            "slope {}",
            report.fitted_slope
        );

        // The exact value is √(π/(1/2 − iλ)); oracle rows must match it.
        for r in &report.rows {
            let want = (Complex::new(PI, 0.0) / Complex::new(0.5, -r.lambda)).sqrt();
            assert!((r.oracle - want).norm() < 1e-9 * want.norm());
        }
    }

    #[test]
    fn linear_phase_decays_fast() {
        // m=1 has no stationary point: the expansion is identically zero and
        // the value drops below any power (here under λ^{−3} with room).
        let e = full_line_expansion(1, &Amplitude::gaussian(), Sign::Plus, 1).unwrap();
        assert!(e.is_zero());
        for lambda in [1e2, 1e3] {
            let v = weighted_full_line_value(1, &Amplitude::gaussian(), Sign::Plus, lambda)
                .unwrap();
            assert!(
                v.value.norm() <= 1e-2 * lambda.powf(-3.0),
                "lambda {lambda}: |I| = {}",
                v.value.norm()
            );
        }
    }

    #[test]
    fn offset_bump_decays_fast() {
        // Amplitude supported away from the stationary point: rapid decay.
        let a = Amplitude::bump(1.5, 0.5).unwrap();
        let grid = LambdaGrid::log_spaced(10.0, 1e3, 5).unwrap();
        let pts: Vec<(f64, f64)> = grid
            .values()
            .iter()
            .map(|&l| {
                let v = weighted_full_line_value(2, &a, Sign::Plus, l).unwrap();
                (l, v.value.norm())
            })
            .collect();
        let slope = decay_slope_fit(&pts).unwrap();
        assert!(slope <= -3.0, "slope {slope}");
    }
}
