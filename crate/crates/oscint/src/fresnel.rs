//! Closed-form generalized Fresnel integrals and their meromorphic structure.
//!
//! The central object is
//!
//! ```text
//! I±(p, q) = Os-∫₀^∞ e^{±ix^p} x^{q−1} dx = p^{−1} e^{±iπq/(2p)} Γ(q/p)
//! ```
//!
//! valid for p > 0 as an oscillatory integral when Re q > 0, and by
//! continuation for all complex q off the pole set {−pj : j = 0, 1, 2, …}.
//! The same expression also continues meromorphically in p (poles at
//! p = −q/j), though evaluation is only offered for p > 0, where the
//! integral meaning exists.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, gamma_residue};
use crate::Complex;

/// Sign of the oscillatory phase e^{±ix^p}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1.0 for `Plus`, −1.0 for `Minus`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// e^{±i·angle} (upper sign for `Plus`).
    pub fn phase(self, angle: f64) -> Complex {
        Complex::from_polar(1.0, self.factor() * angle)
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

/// Parameters (p, q) of I±(p, q): phase x^p and weight x^{q−1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelParams {
    /// Phase exponent; must be > 0 for any evaluation.
    pub p: f64,
    /// Weight exponent parameter; complex values are evaluated by
    /// continuation, the pole set being {−pj : j ∈ ℕ ∪ {0}}.
    pub q: Complex,
}

impl FresnelParams {
    pub fn new(p: f64, q: impl Into<Complex>) -> Self {
        FresnelParams { p, q: q.into() }
    }

    /// q as a real number, when its imaginary part is exactly zero.
    pub fn q_real(&self) -> Option<f64> {
        (self.q.im == 0.0).then_some(self.q.re)
    }
}

/// A simple pole with its location and residue. Every pole of I±(p, q) in
/// either variable has order 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleReport {
    pub location: Complex,
    pub order: u32,
    pub residue: Complex,
}

/// Pole-proximity tolerance: q counts as "at" the pole −pj when
/// |q + pj| < 1e-9·max(1, pj). Keeps near-pole evaluation available while
/// refusing arguments where Γ blows past any useful accuracy.
const POLE_TOL: f64 = 1e-9;

/// e^{∓iπj/2} (upper sign for `Plus`), computed exactly from j mod 4.
fn quarter_turn(sign: Sign, j: u32) -> Complex {
    let table = [
        Complex::new(1.0, 0.0),
        Complex::new(0.0, -1.0),
        Complex::new(-1.0, 0.0),
        Complex::new(0.0, 1.0),
    ];
    let t = table[(j % 4) as usize];
    match sign {
        Sign::Plus => t,
        Sign::Minus => t.conj(),
    }
}

/// Residue of q ↦ I±(p, q) at q = −pj: e^{∓iπj/2}(−1)^j/j!.
fn residue_in_q(sign: Sign, j: u32) -> Complex {
    quarter_turn(sign, j) * gamma_residue(j)
}

fn nearest_pole_in_q(p: f64, q: Complex, sign: Sign) -> Option<PoleReport> {
    let jr = (-q.re / p).round();
    if !(0.0..=u32::MAX as f64).contains(&jr) {
        return None;
    }
    let j = jr as u32;
    let location = -p * jr;
    if (q - location).norm() < POLE_TOL * (p * jr).max(1.0) {
        Some(PoleReport {
            location: Complex::new(location, 0.0),
            order: 1,
            residue: residue_in_q(sign, j),
        })
    } else {
        None
    }
}

fn validate_params(params: &FresnelParams) -> Result<()> {
    if !params.p.is_finite() || params.p <= 0.0 {
        return Err(Error::Domain(format!(
            "phase exponent p must be a positive finite real, got {}",
            params.p
        )));
    }
    if !params.q.re.is_finite() || !params.q.im.is_finite() {
        return Err(Error::Domain(format!(
            "weight exponent q must be finite, got {}",
            params.q
        )));
    }
    Ok(())
}

/// I±(p, q) = p^{−1} e^{±iπq/(2p)} Γ(q/p).
///
/// For real q > 0 this is the oscillatory-integral value; for p > q > 0 it
/// is also the improper Riemann integral; elsewhere it is the meromorphic
/// continuation in q. Satisfies closed_form(p, q, minus) =
/// conj(closed_form(p, q, plus)) for real q.
pub fn closed_form(params: FresnelParams, sign: Sign) -> Result<Complex> {
    validate_params(&params)?;
    let FresnelParams { p, q } = params;
    if let Some(pole) = nearest_pole_in_q(p, q, sign) {
        return Err(Error::AtPole {
            location: pole.location.re,
            index: (-pole.location.re / p).round() as u32,
            residue: pole.residue,
        });
    }
    // e^{±iπq/(2p)} for complex q: exp(i·(±π/(2p))·q).
    let phase = (Complex::i() * (sign.factor() * PI / (2.0 * p)) * q).exp();
    let value = phase * gamma(q / p)? / p;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Overflow(format!(
            "closed form overflowed at p={p}, q={q}"
        )));
    }
    Ok(value)
}

/// All poles of q ↦ I±(p, q) in the half-open window [lo, hi).
///
/// The poles sit at q = −pj, j = 0, 1, 2, …, each of order 1 with residue
/// e^{∓iπj/2}(−1)^j/j! (upper sign for `Plus`). Reports are ordered by
/// index j, i.e. by descending location.
pub fn poles_in_q(p: f64, window: (f64, f64), sign: Sign) -> Result<Vec<PoleReport>> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!(
            "phase exponent p must be a positive finite real, got {p}"
        )));
    }
    let (lo, hi) = window;
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain("pole window must be finite".into()));
    }
    // lo ≤ −pj < hi  ⇔  −hi/p < j ≤ −lo/p
    let j_min = ((-hi / p).floor() as i64 + 1).max(0);
    let j_max = (-lo / p).floor() as i64;
    let mut out = Vec::new();
    for j in j_min..=j_max {
        let j = j as u32;
        out.push(PoleReport {
            location: Complex::new(-p * j as f64, 0.0),
            order: 1,
            residue: residue_in_q(sign, j),
        });
    }
    Ok(out)
}

/// All poles of p ↦ I±(p, q) in the half-open window [lo, hi) ⊂ (0, ∞).
///
/// For fixed q the continuation in p has order-1 poles at p = −q/j,
/// j = 1, 2, …, with residue (−1)^j e^{∓iπj/2}/(j·j!); only real q < 0
/// places any of them on the positive real axis. The window must satisfy
/// lo > 0 because the poles accumulate at p = 0.
pub fn poles_in_p(q: Complex, window: (f64, f64), sign: Sign) -> Result<Vec<PoleReport>> {
    let (lo, hi) = window;
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(Error::Domain(
            "pole window in p must satisfy 0 < lo ≤ hi < ∞ (poles accumulate at p = 0)".into(),
        ));
    }
    if q.norm() == 0.0 {
        return Err(Error::Domain(
            "q = 0 is itself a pole in q; the continuation in p is degenerate there".into(),
        ));
    }
    if q.im != 0.0 || q.re >= 0.0 {
        return Ok(Vec::new());
    }
    // lo ≤ −q/j < hi  ⇔  −q/hi < j ≤ −q/lo  (with −q > 0)
    let j_min = (((-q.re) / hi).floor() as i64 + 1).max(1);
    let j_max = ((-q.re) / lo).floor() as i64;
    let mut out = Vec::new();
    for j in j_min..=j_max {
        let jf = j as f64;
        out.push(PoleReport {
            location: Complex::new(-q.re / jf, 0.0),
            order: 1,
            residue: quarter_turn(sign, j as u32) * gamma_residue(j as u32) / jf,
        });
    }
    // Poles were enumerated from large p downward only if lo ≤ hi; order by
    // location ascending for a stable report.
    out.sort_by(|a, b| a.location.re.total_cmp(&b.location.re));
    Ok(out)
}

/// Generalized Beta value
/// e^{∓iπ/2(q1/p1 + q2/p2 − q3/p3)} (p1p2/p3) I±(p1,q1) I±(p2,q2) / I±(p3,q3),
/// which collapses to the Euler Beta function B(q1, q2) when all pᵢ = 1 and
/// q3 = q1 + q2.
pub fn generalized_beta(p: [f64; 3], q: [Complex; 3], sign: Sign) -> Result<Complex> {
    let i1 = closed_form(FresnelParams::new(p[0], q[0]), sign)?;
    let i2 = closed_form(FresnelParams::new(p[1], q[1]), sign)?;
    let i3 = closed_form(FresnelParams::new(p[2], q[2]), sign)?;
    if i3.norm() == 0.0 {
        // Unreachable for valid inputs: the closed form is non-vanishing off
        // its poles. Guarded anyway so a division by zero cannot escape.
        return Err(Error::Domain("denominator integral vanished".into()));
    }
    let angle_arg = q[0] / p[0] + q[1] / p[1] - q[2] / p[2];
    let prefactor = (Complex::i() * (-sign.factor() * PI / 2.0) * angle_arg).exp();
    Ok(prefactor * (p[0] * p[1] / p[2]) * i1 * i2 / i3)
}

/// Coefficient of λ^{−(k+1)/m}·a^{(k)}(0)/k! in the full-line stationary
/// phase expansion of ∫_ℝ e^{±iλx^m} a(x) dx:
///
/// ```text
/// m^{−1} ( e^{±iπ(k+1)/(2m)} + (−1)^k e^{±(−1)^m iπ(k+1)/(2m)} ) Γ((k+1)/m)
/// ```
///
/// For m = 2, k = 0 this is the classical Fresnel value √π e^{±iπ/4}; for
/// m = 1 every coefficient vanishes (no stationary point).
pub fn full_line_term_coefficient(m: u32, k: u32, sign: Sign) -> Result<Complex> {
    if m == 0 {
        return Err(Error::Domain("phase power m must be a positive integer".into()));
    }
    let angle = PI * (k + 1) as f64 / (2.0 * m as f64);
    let s = sign.factor();
    // θ is the rational multiple π(k+1)/(2m), so the structural zeros of the
    // bracket (cos θ at odd multiples of π/2, sin θ at multiples of π) are
    // decidable on integers; producing them exactly keeps all-zero
    // expansions exactly zero instead of 1e-16 phase residue.
    let num = (k + 1) as i64;
    let den = 2 * m as i64;
    let term = if m % 2 == 0 {
        if k % 2 == 1 {
            Complex::ZERO
        } else {
            Complex::from_polar(2.0, s * angle)
        }
    } else if k % 2 == 0 {
        // e^{isθ} + e^{−isθ} = 2cos θ.
        if (2 * num - den).rem_euclid(2 * den) == 0 {
            Complex::ZERO
        } else {
            Complex::new(2.0 * (s * angle).cos(), 0.0)
        }
    } else {
        // e^{isθ} − e^{−isθ} = 2i sin(sθ).
        if num % den == 0 {
            Complex::ZERO
        } else {
            Complex::new(0.0, 2.0 * (s * angle).sin())
        }
    };
    let g = gamma(Complex::new((k + 1) as f64 / m as f64, 0.0))?;
    Ok(term * g / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn assert_close(got: Complex, want: Complex, tol: f64, what: &str) {
        let scale = want.norm().max(1.0);
        assert!(
            (got - want).norm() <= tol * scale,
            "{what}: got {got}, want {want} (|Δ| = {:.3e})",
            (got - want).norm()
        );
    }

    // Frozen high-precision references (30-digit arithmetic):
    //   I+(2,1) = (√π/2)e^{iπ/4},  I+(3,1) = (1/3)e^{iπ/6}Γ(1/3),
    //   I+(2,3) = (1/2)e^{3iπ/4}Γ(3/2),  I−(4,2) = (1/4)e^{−iπ/4}Γ(1/2).
    const I_2_1: (f64, f64) = (0.626657068657750125603941321203, 0.626657068657750125603941321203);
    const I_3_1: (f64, f64) = (0.773342942077989850196101611295, 0.446489755784624605609282156829);
    const I_2_3: (f64, f64) = (-0.313328534328875062801970660601, 0.313328534328875062801970660601);
    const I_4_2_MINUS: (f64, f64) =
        (0.313328534328875062801970660601, -0.313328534328875062801970660601);

    #[test]
    fn frozen_values() {
        let cases = [
            (2.0, 1.0, Sign::Plus, I_2_1),
            (3.0, 1.0, Sign::Plus, I_3_1),
            (2.0, 3.0, Sign::Plus, I_2_3),
            (4.0, 2.0, Sign::Minus, I_4_2_MINUS),
        ];
        for (p, q, sign, want) in cases {
            let got = closed_form(FresnelParams::new(p, q), sign).unwrap();
            assert_close(got, Complex::new(want.0, want.1), 1e-13, &format!("I({p},{q})"));
        }
        // I+(1,1) = e^{iπ/2}Γ(1) = i.
        let got = closed_form(FresnelParams::new(1.0, 1.0), Sign::Plus).unwrap();
        assert_close(got, Complex::i(), 1e-15, "I+(1,1)");
    }

    #[test]
    fn conjugation_and_nonvanishing() {
        let mut rng = StdRng::seed_from_u64(0x0f2e5);
        let mut tested = 0;
        while tested < 200 {
            let p = 0.1 + 7.9 * rng.gen::<f64>();
            let q = -6.0 + 12.0 * rng.gen::<f64>();
            // Skip draws too close to the pole set.
            let j = (-q / p).round();
            if j >= 0.0 && (q + p * j).abs() < 1e-3 {
                continue;
            }
            tested += 1;
            let params = FresnelParams::new(p, q);
            let plus = closed_form(params, Sign::Plus).unwrap();
            let minus = closed_form(params, Sign::Minus).unwrap();
            assert!(
                (minus - plus.conj()).norm() <= 1e-13 * plus.norm(),
                "conjugation failed at p={p}, q={q}"
            );
            assert!(plus.norm() > 0.0, "vanished at p={p}, q={q}");
        }
    }

    #[test]
    fn pole_rejection_and_near_pole_window() {
        let err = closed_form(FresnelParams::new(2.0, -2.0), Sign::Plus).unwrap_err();
        match err {
            Error::AtPole { location, index, residue } => {
                assert_eq!(location, -2.0);
                assert_eq!(index, 1);
                // Residue e^{−iπ/2}(−1) = +i for the plus sign.
                assert_close(residue, Complex::i(), 1e-15, "residue at q=−2");
            }
            other => panic!("expected pole error, got {other:?}"),
        }
        // Within the detection window.
        assert!(closed_form(FresnelParams::new(2.0, -2.0 + 1e-12), Sign::Plus).is_err());
        // Near but outside: evaluable.
        assert!(closed_form(FresnelParams::new(2.0, -2.0001), Sign::Plus).is_ok());
        // Invalid p.
        assert!(matches!(
            closed_form(FresnelParams::new(0.0, 1.0), Sign::Plus),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn pole_windows_in_q() {
        let poles = poles_in_q(2.0, (-5.0, 0.0), Sign::Plus).unwrap();
        assert_eq!(poles.len(), 2);
        assert_eq!(poles[0].location, Complex::new(-2.0, 0.0));
        assert_close(poles[0].residue, Complex::i(), 1e-15, "res q=−2");
        assert_eq!(poles[1].location, Complex::new(-4.0, 0.0));
        assert_close(poles[1].residue, Complex::new(-0.5, 0.0), 1e-15, "res q=−4");
        for p in &poles {
            assert_eq!(p.order, 1);
        }

        assert!(poles_in_q(1.0, (-0.5, 0.0), Sign::Plus).unwrap().is_empty());

        let poles = poles_in_q(0.5, (-1.2, 0.0), Sign::Plus).unwrap();
        let locs: Vec<f64> = poles.iter().map(|p| p.location.re).collect();
        assert_eq!(locs, vec![-0.5, -1.0]);

        // j = 0 (q = 0) is a pole too, residue 1·e^0 = 1.
        let poles = poles_in_q(2.0, (-1.0, 0.5), Sign::Minus).unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].location, Complex::new(0.0, 0.0));
        assert_close(poles[0].residue, Complex::new(1.0, 0.0), 1e-15, "res q=0");
    }

    #[test]
    fn residues_match_numeric_limit_in_q() {
        // residue = lim_{d→0} d·I(p, −pj + d), extracted with one Richardson
        // step 2f(d/2) − f(d) to kill the O(d) error.
        for &p in &[1.0, 2.0] {
            for j in 1u32..=3 {
                for sign in [Sign::Plus, Sign::Minus] {
                    let q0 = -p * j as f64;
                    let f = |d: f64| {
                        closed_form(FresnelParams::new(p, q0 + d), sign).unwrap() * d
                    };
                    let d = 1e-5;
                    let fitted = 2.0 * f(d / 2.0) - f(d);
                    let want = residue_in_q(sign, j);
                    assert!(
                        (fitted - want).norm() <= 1e-8 * want.norm().max(1.0),
                        "p={p} j={j} {sign}: fitted {fitted}, want {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn pole_windows_and_residues_in_p() {
        // q = −1.3 puts poles at p = 1.3/j on the positive axis.
        let q = Complex::new(-1.3, 0.0);
        let poles = poles_in_p(q, (1.0, 2.0), Sign::Plus).unwrap();
        assert_eq!(poles.len(), 1);
        assert_close(poles[0].location, Complex::new(1.3, 0.0), 1e-15, "p-pole location");
        // Residue (−1)e^{−iπ/2}/(1·1!) = i.
        assert_close(poles[0].residue, Complex::i(), 1e-15, "p-pole residue");

        // Numeric limit in p across the same pole.
        let f = |d: f64| closed_form(FresnelParams::new(1.3 + d, q), Sign::Plus).unwrap() * d;
        let d = 1e-5;
        let fitted = 2.0 * f(d / 2.0) - f(d);
        assert!(
            (fitted - Complex::i()).norm() <= 1e-7,
            "fitted p-residue {fitted}"
        );

        let locs: Vec<f64> = poles_in_p(q, (0.3, 0.7), Sign::Plus)
            .unwrap()
            .iter()
            .map(|p| p.location.re)
            .collect();
        assert_eq!(locs, vec![1.3 / 4.0, 1.3 / 3.0, 1.3 / 2.0]);

        assert!(poles_in_p(Complex::new(1.0, 0.5), (0.5, 2.0), Sign::Plus)
            .unwrap()
            .is_empty());
        assert!(poles_in_p(q, (0.0, 1.0), Sign::Plus).is_err());
        assert!(poles_in_p(Complex::new(0.0, 0.0), (0.5, 1.0), Sign::Plus).is_err());
    }

    #[test]
    fn generalized_beta_examples() {
        let one = Complex::new(1.0, 0.0);
        let got = generalized_beta([1.0; 3], [one, one, 2.0 * one], Sign::Plus).unwrap();
        assert_close(got, one, 1e-13, "B(1,1)");

        let half = Complex::new(0.5, 0.0);
        let got = generalized_beta([1.0; 3], [half, half, one], Sign::Plus).unwrap();
        assert_close(got, Complex::new(std::f64::consts::PI, 0.0), 1e-13, "B(1/2,1/2)");

        // All p = 2: prefactor is e^0 and the value collapses to π as well.
        let got = generalized_beta([2.0; 3], [one, one, 2.0 * one], Sign::Plus).unwrap();
        assert_close(got, Complex::new(std::f64::consts::PI, 0.0), 1e-13, "p=2 variant");
    }

    #[test]
    fn generalized_beta_reduces_to_euler_beta() {
        let mut rng = StdRng::seed_from_u64(0xbe7a);
        for _ in 0..50 {
            let q1 = 5.0 * rng.gen::<f64>();
            let q2 = 5.0 * rng.gen::<f64>();
            if q1 < 1e-3 || q2 < 1e-3 {
                continue;
            }
            let want = crate::special::euler_beta(q1, q2).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let got = generalized_beta(
                    [1.0; 3],
                    [
                        Complex::new(q1, 0.0),
                        Complex::new(q2, 0.0),
                        Complex::new(q1 + q2, 0.0),
                    ],
                    sign,
                )
                .unwrap();
                assert!(
                    (got - want).norm() <= 1e-10,
                    "B({q1},{q2}) {sign}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn full_line_coefficients() {
        // m=2, k=0: the classical full-line Fresnel value √π e^{iπ/4}.
        let want = Complex::new(
            1.25331413731550025120788264241,
            1.25331413731550025120788264241,
        );
        let got = full_line_term_coefficient(2, 0, Sign::Plus).unwrap();
        assert_close(got, want, 1e-14, "m=2 k=0");

        // m=3, k=0: (√3/3)Γ(1/3); k=1: (i√3/3)Γ(2/3).
        let got = full_line_term_coefficient(3, 0, Sign::Plus).unwrap();
        assert_close(
            got,
            Complex::new(1.54668588415597970039220322259, 0.0),
            1e-14,
            "m=3 k=0",
        );
        let got = full_line_term_coefficient(3, 1, Sign::Plus).unwrap();
        assert_close(
            got,
            Complex::new(0.0, 0.781800356842333635924358599686),
            1e-14,
            "m=3 k=1",
        );

        // m=3, k=2: the cosine at π/2 kills the term.
        let got = full_line_term_coefficient(3, 2, Sign::Plus).unwrap();
        assert!(got.norm() < 1e-15, "m=3 k=2 should vanish, got {got}");

        // m=1: no stationary point, every coefficient vanishes.
        for k in 0..4 {
            for sign in [Sign::Plus, Sign::Minus] {
                let got = full_line_term_coefficient(1, k, sign).unwrap();
                assert!(got.norm() < 1e-14, "m=1 k={k} {sign}: {got}");
            }
        }

        // Conjugation between the signs.
        for (m, k) in [(2u32, 0u32), (3, 0), (3, 1), (4, 2), (5, 3)] {
            let plus = full_line_term_coefficient(m, k, Sign::Plus).unwrap();
            let minus = full_line_term_coefficient(m, k, Sign::Minus).unwrap();
            assert_close(minus, plus.conj(), 1e-14, "coefficient conjugation");
        }

        assert!(full_line_term_coefficient(0, 0, Sign::Plus).is_err());
    }
}
