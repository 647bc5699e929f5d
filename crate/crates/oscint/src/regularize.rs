//! Numerical values of oscillatory integrals by cutoff regularization.
//!
//! The regularized value of Os-∫₀^∞ e^{±ix^p} x^{q−1} dx is the ε → 0 limit
//! of F(ε) = ∫₀^∞ e^{±ix^p} x^{q−1} χ(εx) dx for a Schwartz cutoff χ with
//! χ(0) = 1. Each F(ε) is computed by quadrature and the limit is extracted
//! by polynomial extrapolation over a geometric ε schedule. Two independent
//! oracles cross-check the limit: a rotated-contour quadrature (no cutoff,
//! no Gamma function) and, for phase x, an Abel e^{−τx} damping limit.
//!
//! Per-ε strategy:
//!
//! * Near the origin, a substitution t = x^r (r ≤ min(p, q, 1)) removes both
//!   the x^{q−1} endpoint singularity and, for p < 1, the unbounded phase
//!   derivative.
//! * For p > 1 the tail is preconditioned by repeated integration by parts
//!   against e^{±ix^p} (each application trades one power of the weight for
//!   a 1/(px^{p−1}) factor), then integrated over phase-resolved panels with
//!   a provable truncation bound. For p ≤ 1, where that operator gains
//!   nothing, the tail is integrated directly out to the cutoff's decay
//!   range.
//!
//! All evaluations are pure and the types are Send + Sync, so per-ε work may
//! run concurrently.

use std::f64::consts::PI;

use crate::cutoff::{Cutoff, DerivativeFamily};
use crate::error::{Error, Result};
use crate::fresnel::{FresnelParams, Sign};
use crate::quad::{adaptive, power_phase_breakpoints, QuadOptions};
use crate::Complex;

/// Relative gap between the last two extrapolants below which the
/// extrapolation counts as converged.
const CONVERGENCE_REL: f64 = 1e-8;

/// Most integration-by-parts applications attempted; beyond this the
/// boundary-term cancellation erodes double precision.
const MAX_IBP: usize = 12;

/// Cap on the estimated boundary-term magnitude. Terms of size B cancel down
/// to an O(1) value, leaving roundoff noise ≈ B·ulp; 3e4 keeps that near
/// 1e-12.
const BOUNDARY_CAP: f64 = 3e4;

/// Phase-panel budget for one tail integral (π/2 of phase per panel).
const TAIL_PANEL_BUDGET: f64 = 3.9e5;

/// Absolute target for dropped integration tails.
const TAIL_TOL: f64 = 1e-15;

/// Decreasing ε values with the extrapolation step order.
#[derive(Debug, Clone)]
pub struct EpsilonSchedule {
    /// Strictly decreasing, all in (0, 1).
    pub values: Vec<f64>,
    /// F(ε) is extrapolated as a polynomial in ε^order. Even cutoffs give
    /// order 2 (only even powers appear); a non-even custom cutoff needs
    /// order 1.
    pub order: u32,
}

impl EpsilonSchedule {
    /// ε_j = 2^{−j} for j = lo..=hi.
    pub fn geometric(lo: u32, hi: u32, order: u32) -> Self {
        EpsilonSchedule {
            values: (lo..=hi).map(|j| 2f64.powi(-(j as i32))).collect(),
            order,
        }
    }

    /// The default schedule: ε_j = 2^{−j}, j = 3..12, order 2.
    pub fn default_geometric() -> Self {
        Self::geometric(3, 12, 2)
    }

    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Domain("epsilon schedule is empty".into()));
        }
        if self.order == 0 {
            return Err(Error::Domain("extrapolation order must be ≥ 1".into()));
        }
        for w in self.values.windows(2) {
            if !(w[1] < w[0]) {
                return Err(Error::Domain(format!(
                    "epsilon schedule must be strictly decreasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let (first, last) = (self.values[0], *self.values.last().unwrap());
        if !(first < 1.0 && last > 0.0) {
            return Err(Error::Domain(format!(
                "epsilon values must lie in (0, 1), got range [{last}, {first}]"
            )));
        }
        Ok(())
    }
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self::default_geometric()
    }
}

/// An extrapolated quadrature value with its diagnostics.
///
/// `error_estimate` is |last extrapolant − previous extrapolant| plus the
/// accumulated per-ε panel error, so it bounds the distance from `value` to
/// the preceding extrapolation stage with heuristic factor 1. It is a
/// heuristic for the true error, not a rigorous bound.
#[derive(Debug, Clone)]
pub struct QuadratureOutcome {
    pub value: Complex,
    pub error_estimate: f64,
    /// The raw (ε, F(ε)) samples feeding the extrapolation (the damping
    /// parameter τ takes the role of ε for the Abel oracle).
    pub per_epsilon_values: Vec<(f64, Complex)>,
    /// True when the last two extrapolants agree to 1e-8 relative to the
    /// sample scale.
    pub converged: bool,
}

/// Neville tableau evaluated at h = 0; returns the diagonal, whose last entry
/// is the highest-order extrapolant.
pub(crate) fn neville_diagonal(points: &[(f64, Complex)]) -> Vec<Complex> {
    let mut hs: Vec<f64> = Vec::with_capacity(points.len());
    let mut row: Vec<Complex> = Vec::with_capacity(points.len());
    let mut diag = Vec::with_capacity(points.len());
    for &(h, f) in points {
        hs.push(h);
        let j = hs.len() - 1;
        let mut next = Vec::with_capacity(j + 1);
        next.push(f);
        for m in 1..=j {
            let h_back = hs[j - m];
            let t = (h_back * next[m - 1] - h * row[m - 1]) / (h_back - h);
            next.push(t);
        }
        diag.push(*next.last().unwrap());
        row = next;
    }
    diag
}

/// Extrapolate the per-ε samples to ε = 0 and classify convergence.
fn extrapolate(
    per: Vec<(f64, Complex)>,
    order: u32,
    panel_err: f64,
    what: &str,
) -> Result<QuadratureOutcome> {
    let pts: Vec<(f64, Complex)> = per
        .iter()
        .map(|&(e, v)| (e.powi(order as i32), v))
        .collect();
    let diag = neville_diagonal(&pts);
    let n = diag.len();
    let value = diag[n - 1];
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonConvergence(format!(
            "{what}: extrapolation produced a non-finite value"
        )));
    }
    if n == 1 {
        return Ok(QuadratureOutcome {
            value,
            error_estimate: panel_err,
            per_epsilon_values: per,
            converged: false,
        });
    }
    let scale = per
        .iter()
        .map(|(_, v)| v.norm())
        .fold(value.norm(), f64::max)
        .max(1e-300);
    let diffs: Vec<f64> = diag.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let d_last = *diffs.last().unwrap();
    let converged = d_last <= CONVERGENCE_REL * scale;
    if !converged && n >= 3 && d_last >= diffs[0] {
        return Err(Error::NonConvergence(format!(
            "{what}: extrapolant differences fail to decrease \
             (first {:.3e}, last {:.3e}, scale {:.3e})",
            diffs[0], d_last, scale
        )));
    }
    Ok(QuadratureOutcome {
        value,
        error_estimate: d_last + panel_err,
        per_epsilon_values: per,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Integration-by-parts preconditioning.
//
// On x ≥ x₀ > 0 write e^{isx^p} = (e^{isx^p})′ · w(x), w = 1/(isp x^{p−1}).
// With M g = −(w g)′,
//
//   ∫_{x₀}^∞ e^{isx^p} g dx
//     = Σ_{j=0}^{k−1} −e^{isx₀^p} (w · M^j g)(x₀)  +  ∫_{x₀}^∞ e^{isx^p} M^k g dx.
//
// Acting on a term x^α E^{(m)} (E = the scaled-cutoff envelope),
//
//   M (x^α E^{(m)}) = −β (α+1−p) x^{α−p} E^{(m)} − β x^{α+1−p} E^{(m+1)},
//   β = 1/(isp).
//
// Starting from g = x^{q−1} E, after k applications only k+1 merged terms
// survive, with weight powers α_m = q − 1 − kp + m and coefficients
// (is)^k p^{−k} r_m^{(k)} for the real table
//
//   r^{(0)} = [1],   r_m^{(k+1)} = (q − (k+1)p + m) r_m^{(k)} + r_{m−1}^{(k)}.
// ---------------------------------------------------------------------------

/// One term c·x^{weight_power}·E^{(envelope_order)} of a preconditioned
/// integrand, with c = (±i)^times p^{−times} · real_factor (upper sign for
/// `Sign::Plus`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IbpTerm {
    pub real_factor: f64,
    pub weight_power: f64,
    pub envelope_order: u32,
}

/// Description of the integrand after `times` integrations by parts on the
/// tail region x ≥ x₀.
#[derive(Debug, Clone)]
pub struct IbpReport {
    pub times: u32,
    /// The merged integrand terms (see [`IbpTerm`] for the coefficient
    /// convention). `times + 1` entries.
    pub terms: Vec<IbpTerm>,
    /// Weight order of the slowest-decaying term: q − 1 − times·(p − 1)
    /// (the envelope-derivative factors are bounded, so this is the decay
    /// order that matters for integrability).
    pub tail_power: f64,
    /// tail_power < −1, i.e. the transformed tail is absolutely integrable.
    pub absolutely_integrable: bool,
    /// ceil((q+1)/(p−1)) applications suffice for an absolutely integrable
    /// tail when p > 1; `None` for p ≤ 1 where no progress is possible.
    pub required_times: Option<u32>,
}

fn ibp_rows(p: f64, q: f64, depth: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for k in 0..depth {
        let prev = &rows[k];
        let kp = (k + 1) as f64 * p;
        let mut next = vec![0.0; k + 2];
        for (m, slot) in next.iter_mut().enumerate() {
            let from_same = if m <= k { (q - kp + m as f64) * prev[m] } else { 0.0 };
            let from_below = if m >= 1 { prev[m - 1] } else { 0.0 };
            *slot = from_same + from_below;
        }
        rows.push(next);
    }
    rows
}

/// (±i)^j (upper for `Plus`), exact.
fn unit_power(sign: Sign, j: usize) -> Complex {
    let table = [
        Complex::new(1.0, 0.0),
        Complex::new(0.0, 1.0),
        Complex::new(-1.0, 0.0),
        Complex::new(0.0, -1.0),
    ];
    let t = table[j % 4];
    match sign {
        Sign::Plus => t,
        Sign::Minus => t.conj(),
    }
}

/// Describe the tail integrand after `times` integrations by parts.
///
/// Errors for p = 1 (each application leaves the weight order unchanged; the
/// tail is handled by direct cutoff-decay integration instead) and for p < 1
/// (the phase derivative is not bounded below on the tail, so the operator
/// is not even defined there).
pub fn ibp_precondition(params: FresnelParams, times: u32) -> Result<IbpReport> {
    let p = params.p;
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!(
            "phase exponent p must be a positive finite real, got {p}"
        )));
    }
    let q = params
        .q_real()
        .ok_or_else(|| Error::Domain("tail preconditioning expects real q".into()))?;
    if times > 0 && p == 1.0 {
        return Err(Error::Domain(
            "integration by parts makes no progress for p = 1 \
             (weight order drops by p − 1 = 0 per application)"
            .into(),
        ));
    }
    if times > 0 && p < 1.0 {
        return Err(Error::Domain(
            "for p < 1 the phase derivative is not bounded below on the tail; \
             integration by parts does not apply"
                .into(),
        ));
    }
    if times as usize > 4 * MAX_IBP {
        return Err(Error::Domain(format!(
            "requested {times} integrations by parts; the coefficient table is \
             meaningless past ~{MAX_IBP} in double precision"
        )));
    }
    let rows = ibp_rows(p, q, times as usize);
    let terms = rows[times as usize]
        .iter()
        .enumerate()
        .map(|(m, &r)| IbpTerm {
            real_factor: r,
            weight_power: q - 1.0 - times as f64 * p + m as f64,
            envelope_order: m as u32,
        })
        .collect();
    let tail_power = q - 1.0 - times as f64 * (p - 1.0);
    let required_times = (p > 1.0).then(|| {
        let k = ((q + 1.0) / (p - 1.0)).ceil().max(1.0);
        k.min(u32::MAX as f64) as u32
    });
    Ok(IbpReport {
        times,
        terms,
        tail_power,
        absolutely_integrable: tail_power < -1.0,
        required_times,
    })
}

// ---------------------------------------------------------------------------
// The per-ε evaluation engine.
// ---------------------------------------------------------------------------

enum Route {
    /// Direct quadrature out to the envelope's decay range (p ≤ 1, or p so
    /// close to 1 that the parts-count for an integrable tail is infeasible).
    Direct,
    /// Boundary terms at x₀ plus the preconditioned tail integral.
    Ibp { depth: usize },
}

struct Plan {
    p: f64,
    q: f64,
    s: f64,
    k0: usize,
    family: DerivativeFamily,
    /// sup |χ^{(j)}| over the sample grid, j ≤ k0 + depth.
    sups: Vec<f64>,
    /// Argument beyond which every needed |χ^{(j)}(y)| is below 1e-18 of its
    /// sup (the support end for compactly supported cutoffs).
    ystar: f64,
    compact: bool,
    x0: f64,
    /// Near-origin substitution exponent t = x^r.
    r_sub: f64,
    route: Route,
    rows: Vec<Vec<f64>>,
}

fn scan_sups(family: &DerivativeFamily, max_order: usize, half_width: f64) -> Vec<f64> {
    let n = 4000;
    let mut sups = vec![0.0f64; max_order + 1];
    let mut buf = vec![0.0f64; max_order + 1];
    for i in 0..=n {
        let x = -half_width + 2.0 * half_width * i as f64 / n as f64;
        family.eval_all(x, &mut buf);
        for (s, &v) in sups.iter_mut().zip(&buf) {
            *s = s.max(v.abs());
        }
    }
    sups
}

fn scan_ystar(
    family: &DerivativeFamily,
    orders: std::ops::RangeInclusive<usize>,
    sups: &[f64],
    limit: f64,
) -> f64 {
    let step = 0.05;
    let mut last_live = 0.0f64;
    let mut y = 0.0;
    while y <= limit {
        let live = orders
            .clone()
            .any(|j| family.eval(j, y).abs() > 1e-18 * sups[j].max(1.0));
        if live {
            last_live = y;
        }
        y += step;
    }
    (last_live + 2.0 * step).min(limit)
}

fn make_plan(
    p: f64,
    q: f64,
    sign: Sign,
    chi: &Cutoff,
    k0: usize,
    schedule: &EpsilonSchedule,
) -> Result<Plan> {
    let compact = chi.support().is_some();
    // For a compactly supported cutoff any depth ≥ 1 is usable: truncating at
    // the support end is exact, so absolute integrability of the transformed
    // tail is not needed. Schwartz cutoffs need the full integrable depth.
    let required = if p > 1.0 {
        (((q + 1.0) / (p - 1.0)).ceil() as usize).max(1)
    } else {
        usize::MAX
    };
    let direct_forced = p <= 1.0 || (!compact && required > MAX_IBP);
    let max_order = k0 + if direct_forced { 0 } else { MAX_IBP };
    let family = chi.derivative_family(max_order);
    let scan_limit = match chi.support() {
        Some((_, hi)) => hi,
        None => 60.0,
    };
    let sups = scan_sups(&family, max_order, scan_limit.min(50.0).max(1.0));
    let ystar = if compact {
        scan_limit
    } else {
        scan_ystar(&family, k0..=max_order, &sups, scan_limit)
    };
    let x0 = (2.0 * q / p).powf(1.0 / p).max(1.0);
    let r_sub = if p > 1.0 { q.min(1.0) } else { p.min(q).min(1.0) };
    let rows = ibp_rows(p, q, if direct_forced { 0 } else { MAX_IBP });
    let mut plan = Plan {
        p,
        q,
        s: sign.factor(),
        k0,
        family,
        sups,
        ystar,
        compact,
        x0,
        r_sub,
        route: Route::Direct,
        rows,
    };
    if !direct_forced {
        let d_lo = if compact { 1 } else { required };
        plan.route = choose_ibp_depth(&plan, d_lo, schedule);
    }
    Ok(plan)
}

/// Pick the preconditioning depth: among the depths whose boundary terms and
/// panel budgets are acceptable across the whole schedule, take the cheapest
/// one that reproduces a trusted reference value of the tail at the largest
/// (stiffest) scheduled ε. The reference is the shallowest-depth evaluation
/// for a compactly supported cutoff (exactly truncatable, tiny coefficients)
/// and a direct phase-resolved quadrature otherwise, when affordable.
fn choose_ibp_depth(plan: &Plan, d_lo: usize, schedule: &EpsilonSchedule) -> Route {
    let (p, q, k0, x0) = (plan.p, plan.q, plan.k0, plan.x0);
    let eps_max = schedule.values[0];
    let mut feasible: Vec<(usize, f64)> = Vec::new();
    let mut fallback = (d_lo, f64::INFINITY);
    for depth in d_lo..=MAX_IBP {
        let maxb =
            boundary_magnitude(&plan.rows, depth, p, q, k0, &plan.family, eps_max, x0);
        let mut cost = 0.0;
        let mut budget_ok = true;
        for &eps in &schedule.values {
            let xc = ibp_cutoff(
                &plan.rows[depth],
                depth,
                p,
                q,
                k0,
                &plan.sups,
                plan.ystar,
                plan.compact,
                x0,
                eps,
            )
            .0;
            let panels = (xc.powf(p) - x0.powf(p)).max(0.0) / (0.5 * PI);
            if panels > TAIL_PANEL_BUDGET {
                budget_ok = false;
            }
            cost += panels * (depth + 1) as f64;
        }
        if maxb < fallback.1 {
            fallback = (depth, maxb);
        }
        if maxb <= BOUNDARY_CAP && budget_ok {
            feasible.push((depth, cost));
        }
    }
    if feasible.is_empty() {
        return Route::Ibp { depth: fallback.0 };
    }
    feasible.sort_by(|a, b| a.1.total_cmp(&b.1));

    let reference = if plan.compact {
        (1..=MAX_IBP).find_map(|d| plan.ibp_tail(eps_max, d).ok())
    } else {
        plan.direct_tail(eps_max).ok()
    };
    let Some((ref_v, ref_e)) = reference else {
        return Route::Ibp { depth: feasible[0].0 };
    };
    let mut best = (feasible[0].0, f64::INFINITY);
    for &(depth, _) in &feasible {
        if let Ok((v, e)) = plan.ibp_tail(eps_max, depth) {
            let dev = (v - ref_v).norm();
            let tol = 1e-10 * ref_v.norm().max(v.norm()).max(1.0) + 30.0 * (ref_e + e);
            if dev <= tol {
                return Route::Ibp { depth };
            }
            if dev < best.1 {
                best = (depth, dev);
            }
        }
    }
    Route::Ibp { depth: best.0 }
}

/// Estimated magnitude of the largest boundary term for a candidate depth,
/// evaluated at the largest scheduled ε (where the envelope factors peak).
fn boundary_magnitude(
    rows: &[Vec<f64>],
    depth: usize,
    p: f64,
    q: f64,
    k0: usize,
    family: &DerivativeFamily,
    eps: f64,
    x0: f64,
) -> f64 {
    let mut buf = vec![0.0f64; k0 + depth + 1];
    family.eval_all(eps * x0, &mut buf);
    let mut worst = 0.0f64;
    for (jj, row) in rows.iter().enumerate().take(depth) {
        let mut total = 0.0;
        let alpha0 = q - 1.0 - jj as f64 * p;
        let mut xpow = x0.powf(alpha0 + 1.0 - p);
        for (m, &r) in row.iter().enumerate() {
            total += (r * xpow * eps.powi((k0 + m) as i32) * buf[k0 + m]).abs();
            xpow *= x0;
        }
        worst = worst.max(total / p.powi(jj as i32 + 1));
    }
    worst
}

/// Truncation point for the preconditioned tail: the smallest X ≥ x₀ past
/// which every term's remaining integral is below `TAIL_TOL`, never beyond
/// the envelope decay range. Returns (X, tail bound at X); the bound is 0
/// when a compact support makes the truncation exact.
#[allow(clippy::too_many_arguments)]
fn ibp_cutoff(
    row: &[f64],
    depth: usize,
    p: f64,
    q: f64,
    k0: usize,
    sups: &[f64],
    ystar: f64,
    compact: bool,
    x0: f64,
    eps: f64,
) -> (f64, f64) {
    let x_env = (ystar / eps).max(x0);
    let scale = p.powi(-(depth as i32));
    let mut x_cut = x0;
    for (m, &r) in row.iter().enumerate() {
        // a1neg < 0 means the term decays; a shallow depth on a compact
        // cutoff can leave growing terms, which force the support end.
        let a1neg = q - depth as f64 * p + m as f64;
        if a1neg >= -1e-9 {
            x_cut = x_env;
            break;
        }
        let a1 = -a1neg;
        let c = r.abs() * scale * eps.powi((k0 + m) as i32) * sups[k0 + m] / a1;
        if c > TAIL_TOL {
            x_cut = x_cut.max((c / TAIL_TOL).powf(1.0 / a1));
        }
    }
    let x_cut = x_cut.min(x_env);
    if compact && x_cut >= x_env * (1.0 - 1e-9) {
        return (x_cut, 0.0);
    }
    let mut bound = 0.0;
    for (m, &r) in row.iter().enumerate() {
        let a1 = (q - depth as f64 * p + m as f64).abs();
        bound += r.abs() * scale * eps.powi((k0 + m) as i32) * sups[k0 + m] / a1
            * x_cut.powf(-a1);
    }
    (x_cut, bound)
}

fn merge_breakpoints(mut pts: Vec<f64>, extra: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    for x in extra {
        if x > lo && x < hi {
            pts.push(x);
        }
    }
    pts.sort_by(f64::total_cmp);
    let gap = 1e-12 * (hi - lo).max(1.0);
    let mut out = Vec::with_capacity(pts.len());
    for x in pts {
        if out.last().map_or(true, |&last| x - last > gap) {
            out.push(x);
        }
    }
    if out.last().map_or(true, |&last| last < hi) {
        out.push(hi);
    }
    out
}

impl Plan {
    /// ε^{k0}·χ^{(k0)}(εx), the envelope whose limit behavior is being
    /// extrapolated (k0 = 0: the cutoff itself).
    fn envelope(&self, eps: f64, x: f64) -> f64 {
        eps.powi(self.k0 as i32) * self.family.eval(self.k0, eps * x)
    }

    /// ∫₀^{x₀} e^{isx^p} x^{q−1} E(x) dx via t = x^r.
    fn region_a(&self, eps: f64) -> Result<(Complex, f64)> {
        let (p, q, r, s) = (self.p, self.q, self.r_sub, self.s);
        let t0 = self.x0.powf(r);
        let pr = p / r;
        let wexp = q / r - 1.0;
        let f = |t: f64| {
            let x = t.powf(1.0 / r);
            let weight = if wexp == 0.0 { 1.0 } else { t.powf(wexp) };
            Complex::from_polar(weight * self.envelope(eps, x) / r, s * t.powf(pr))
        };
        let pts = power_phase_breakpoints(1.0, pr, 0.0, t0, 0.5 * PI, 40_000)?;
        let opts = QuadOptions {
            rel_tol: 5e-14,
            abs_tol: 1e-17,
            max_panels: 8_000,
        };
        adaptive(&f, &pts, &opts)
    }

    /// Direct tail ∫_{x₀}^{X_env} for p ≤ 1 (or when preconditioning is
    /// infeasible).
    fn direct_tail(&self, eps: f64) -> Result<(Complex, f64)> {
        let (p, q, s) = (self.p, self.q, self.s);
        let x_env = self.ystar / eps;
        if x_env <= self.x0 * (1.0 + 1e-12) {
            return Ok((Complex::ZERO, 0.0));
        }
        // Half-π phase steps: the per-panel rule error is systematic across a
        // long oscillation train, so the panels are kept short enough that the
        // summed bias stays near machine precision even when Σ|f| is large.
        let pts = power_phase_breakpoints(1.0, p, self.x0, x_env, 0.5 * PI, 900_000)?;
        // Envelope-scale refinement: the phase grid alone can leave panels far
        // longer than the cutoff's variation scale 1/ε.
        let span = x_env - self.x0;
        let step = (0.5 / eps).max(span / 512.0);
        let env_grid = (1..).map(|i| self.x0 + i as f64 * step).take_while(|&x| x < x_env);
        let mut pts = merge_breakpoints(pts, env_grid, self.x0, x_env);
        if self.compact {
            let approach = (1..=8).map(|i| self.x0 + span * (1.0 - 0.5f64.powi(i)));
            pts = merge_breakpoints(pts, approach, self.x0, x_env);
        }
        let f = |x: f64| {
            Complex::from_polar(x.powf(q - 1.0) * self.envelope(eps, x), s * x.powf(p))
        };
        let opts = QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_panels: pts.len() + 8_192,
        };
        let (value, err) = adaptive(&f, &pts, &opts)?;
        let tail = if self.compact {
            0.0
        } else {
            f(x_env).norm() * x_env
        };
        Ok((value, err + tail))
    }

    /// Boundary terms at x₀ plus the preconditioned tail integral.
    fn ibp_tail(&self, eps: f64, depth: usize) -> Result<(Complex, f64)> {
        let (p, q, s, k0) = (self.p, self.q, self.s, self.k0);
        let sign = if s > 0.0 { Sign::Plus } else { Sign::Minus };
        let orders = k0 + depth + 1;
        let epow: Vec<f64> = (0..orders).map(|m| eps.powi((k0 + m) as i32)).collect();

        // Boundary contributions −e^{isx₀^p} (w·M^{jj} g)(x₀), jj < depth.
        let x0 = self.x0;
        let phase0 = Complex::from_polar(1.0, s * x0.powf(p));
        let beta = Complex::new(0.0, -s) / p;
        let mut chi_buf = vec![0.0f64; orders];
        self.family.eval_all(eps * x0, &mut chi_buf);
        let mut boundary = Complex::ZERO;
        for (jj, row) in self.rows.iter().enumerate().take(depth) {
            let lead = unit_power(sign, jj) * p.powi(-(jj as i32));
            let alpha0 = q - 1.0 - jj as f64 * p;
            let mut xpow = x0.powf(alpha0 + 1.0 - p);
            let mut inner = Complex::ZERO;
            for (m, &r) in row.iter().enumerate() {
                inner += r * xpow * epow[m] * chi_buf[k0 + m];
                xpow *= x0;
            }
            boundary -= phase0 * beta * lead * inner;
        }

        // Tail integral of the depth-times preconditioned integrand.
        let row = &self.rows[depth];
        let (x_cut, tail_bound) = ibp_cutoff(
            row,
            depth,
            p,
            q,
            k0,
            &self.sups,
            self.ystar,
            self.compact,
            x0,
            eps,
        );
        if x_cut <= x0 * (1.0 + 1e-12) {
            return Ok((boundary, tail_bound));
        }
        let lead = unit_power(sign, depth) * p.powi(-(depth as i32));
        let coeff: Vec<Complex> = row.iter().map(|&r| lead * r).collect();
        let alpha0 = q - 1.0 - depth as f64 * p;
        let f = |x: f64| {
            let mut buf = [0.0f64; 32];
            self.family.eval_all(eps * x, &mut buf[..orders]);
            let mut xpow = x.powf(alpha0);
            let mut acc = Complex::ZERO;
            for (m, &c) in coeff.iter().enumerate() {
                acc += c * (epow[m] * buf[k0 + m] * xpow);
                xpow *= x;
            }
            acc * Complex::from_polar(1.0, s * x.powf(p))
        };
        let pts = power_phase_breakpoints(1.0, p, x0, x_cut, 0.5 * PI, 400_000)?;
        let step = (0.5 / eps).max((x_cut - x0) / 512.0);
        let env_grid = (1..).map(|i| x0 + i as f64 * step).take_while(|&x| x < x_cut);
        let mut pts = merge_breakpoints(pts, env_grid, x0, x_cut);
        if self.compact {
            let span = x_cut - x0;
            let approach = (1..=8).map(|i| x0 + span * (1.0 - 0.5f64.powi(i)));
            pts = merge_breakpoints(pts, approach, x0, x_cut);
        }
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            max_panels: pts.len() + 20_000,
        };
        let (value, err) = adaptive(&f, &pts, &opts)?;
        Ok((boundary + value, err + tail_bound))
    }

    fn one_epsilon(&self, eps: f64) -> Result<(Complex, f64)> {
        let (a, ea) = self.region_a(eps)?;
        let (b, eb) = match self.route {
            Route::Direct => self.direct_tail(eps)?,
            Route::Ibp { depth } => self.ibp_tail(eps, depth)?,
        };
        Ok((a + b, ea + eb))
    }
}

fn real_positive_q(params: &FresnelParams, what: &str) -> Result<(f64, f64)> {
    let p = params.p;
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::Domain(format!(
            "{what}: phase exponent p must be a positive finite real, got {p}"
        )));
    }
    let q = params
        .q_real()
        .filter(|&v| v.is_finite() && v > 0.0)
        .ok_or_else(|| {
            Error::Domain(format!(
                "{what}: weight exponent q must be a positive real, got {}",
                params.q
            ))
        })?;
    Ok((p, q))
}

fn envelope_extrapolated(
    params: FresnelParams,
    sign: Sign,
    chi: &Cutoff,
    k0: usize,
    schedule: &EpsilonSchedule,
    what: &str,
) -> Result<QuadratureOutcome> {
    let (p, q) = real_positive_q(&params, what)?;
    schedule.validate()?;
    let plan = make_plan(p, q, sign, chi, k0, schedule)?;
    let mut per = Vec::with_capacity(schedule.values.len());
    let mut panel_err = 0.0;
    for &eps in &schedule.values {
        let (v, e) = plan.one_epsilon(eps)?;
        per.push((eps, v));
        panel_err += e;
    }
    extrapolate(per, schedule.order, panel_err, what)
}

/// The regularized value of Os-∫₀^∞ e^{±ix^p} x^{q−1} dx: the ε → 0
/// extrapolation of ∫₀^∞ e^{±ix^p} x^{q−1} χ(εx) dx.
///
/// The limit is independent of the cutoff kind; with the default schedule the
/// extrapolants for different χ agree far below the 1e-6 documentation
/// tolerance (they are typically within ~1e-11 of the closed form).
pub fn regularized_integral(
    params: FresnelParams,
    sign: Sign,
    chi: &Cutoff,
    schedule: &EpsilonSchedule,
) -> Result<QuadratureOutcome> {
    envelope_extrapolated(params, sign, chi, 0, schedule, "regularized integral")
}

/// The ε → 0 extrapolation of ∫₀^∞ e^{±ix^p} x^{q−1} (d^k/dx^k)[χ(εx)] dx
/// for k ≥ 1, whose limit is exactly 0: the k-th derivative of the scaled
/// cutoff is ε^k χ^{(k)}(εx), and the ε^k factor kills the limit.
///
/// The extrapolated |value| is the deliverable: it should be below
/// max(1e-6, error_estimate).
pub fn chi_derivative_integral(
    params: FresnelParams,
    sign: Sign,
    k: u32,
    chi: &Cutoff,
    schedule: &EpsilonSchedule,
) -> Result<QuadratureOutcome> {
    if k == 0 {
        return Err(Error::Domain(
            "derivative order k must be ≥ 1 (k = 0 is the regularized integral itself)".into(),
        ));
    }
    if k > 16 {
        return Err(Error::Domain(format!(
            "derivative order {k} exceeds the supported cutoff-derivative range (16)"
        )));
    }
    envelope_extrapolated(
        params,
        sign,
        chi,
        k as usize,
        schedule,
        "cutoff-derivative integral",
    )
}

/// Gamma-free oracle: rotating the contour by ±π/(2p) turns the oscillatory
/// integral into e^{±iπq/(2p)} ∫₀^∞ e^{−t^p} t^{q−1} dt, a plain absolutely
/// convergent real integral evaluated here by adaptive quadrature.
pub fn rotated_contour_oracle(params: FresnelParams, sign: Sign) -> Result<Complex> {
    let (p, q) = real_positive_q(&params, "rotated-contour oracle")?;
    // u = t^r flattens the endpoint weight; the exponent becomes q/r − 1 ≥ 0.
    let r = q.min(1.0);
    let pr = p / r;
    let wexp = q / r - 1.0;
    // Truncate where e^{−w} u^{wexp+1} ≤ 1e-19, w = u^{pr}.
    let mut w = 50.0f64;
    for _ in 0..4 {
        w = 43.8 + (wexp + 1.0) / pr * w.ln().max(0.0);
    }
    let f = |u: f64| {
        let weight = if wexp == 0.0 { 1.0 } else { u.powf(wexp) };
        Complex::new(weight * (-u.powf(pr)).exp() / r, 0.0)
    };
    // Breakpoints uniform in the decay exponent u^{pr}.
    let n = (2.0 * w).ceil() as usize;
    let pts: Vec<f64> = (0..=n)
        .map(|i| (w * i as f64 / n as f64).powf(1.0 / pr))
        .collect();
    let opts = QuadOptions {
        rel_tol: 5e-14,
        abs_tol: 1e-18,
        max_panels: 20_000,
    };
    let (real_integral, _) = adaptive(&f, &pts, &opts)?;
    Ok(sign.phase(PI * q / (2.0 * p)) * real_integral)
}

/// Abel damping oracle for phase x: the τ → +0 extrapolation of
/// ∫₀^∞ e^{ix} x^{q−1} e^{−τx} dx, which equals e^{iπq/2} Γ(q).
///
/// The τ schedule mirrors the default ε schedule; F(τ) is analytic in τ at 0
/// (all powers appear), so the extrapolation runs in h = τ.
pub fn abel_oracle(q: f64) -> Result<QuadratureOutcome> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::Domain(format!(
            "Abel damping limit needs q > 0, got {q}"
        )));
    }
    let r = q.min(1.0);
    let x0 = (2.0 * q).max(1.0);
    let t0 = x0.powf(r);
    let wexp = q / r - 1.0;
    let mut per = Vec::new();
    let mut panel_err = 0.0;
    for tau in EpsilonSchedule::default_geometric().values {
        // Near-origin region via t = x^r.
        let fa = |t: f64| {
            let x = t.powf(1.0 / r);
            let weight = if wexp == 0.0 { 1.0 } else { t.powf(wexp) };
            Complex::from_polar(weight * (-tau * x).exp() / r, t.powf(1.0 / r))
        };
        let pts = power_phase_breakpoints(1.0, 1.0 / r, 0.0, t0, 0.5 * PI, 40_000)?;
        let opts_a = QuadOptions {
            rel_tol: 5e-14,
            abs_tol: 1e-17,
            max_panels: 8_000,
        };
        let (a, ea) = adaptive(&fa, &pts, &opts_a)?;

        // Damped oscillatory tail, truncated where the damping wins.
        let mut x_end = 45.0 / tau;
        for _ in 0..3 {
            x_end = (45.0 + (q - 1.0).max(0.0) * x_end.ln()) / tau;
        }
        let fb = |x: f64| Complex::from_polar(x.powf(q - 1.0) * (-tau * x).exp(), x);
        // Half-π steps keep the systematic per-panel rule error below the
        // extrapolation's working precision even when ∫|f| ≈ Γ(q)/τ^q is huge.
        let pts = power_phase_breakpoints(1.0, 1.0, x0, x_end, 0.5 * PI, 900_000)?;
        let opts_b = QuadOptions {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_panels: pts.len() + 8_192,
        };
        let (b, eb) = adaptive(&fb, &pts, &opts_b)?;
        per.push((tau, a + b));
        panel_err += ea + eb + fb(x_end).norm() * x_end;
    }
    extrapolate(per, 1, panel_err, "Abel damping limit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fresnel::closed_form;

    fn params(p: f64, q: f64) -> FresnelParams {
        FresnelParams::new(p, q)
    }

    fn assert_close(got: Complex, want: Complex, tol: f64, what: &str) {
        assert!(
            (got - want).norm() <= tol,
            "{what}: got {got}, want {want} (|Δ| = {:.3e})",
            (got - want).norm()
        );
    }

    #[test]
    fn schedule_validation() {
        assert!(EpsilonSchedule::default_geometric().validate().is_ok());
        let bad = EpsilonSchedule { values: vec![0.5, 0.5], order: 2 };
        assert!(bad.validate().is_err());
        let bad = EpsilonSchedule { values: vec![1.5, 0.5], order: 2 };
        assert!(bad.validate().is_err());
        let bad = EpsilonSchedule { values: vec![], order: 2 };
        assert!(bad.validate().is_err());
        let bad = EpsilonSchedule { values: vec![0.5, 0.25], order: 0 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn neville_extrapolates_polynomials_exactly() {
        // f(h) = 3 − 2h + h², sampled geometrically: the degree-2 diagonal
        // entry onward must hit f(0) = 3 exactly.
        let pts: Vec<(f64, Complex)> = (0..6)
            .map(|j| {
                let h = 0.5f64.powi(j);
                (h, Complex::new(3.0 - 2.0 * h + h * h, 0.0))
            })
            .collect();
        let diag = neville_diagonal(&pts);
        assert!((diag[2].re - 3.0).abs() < 1e-12);
        assert!((diag[5].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ibp_report_bookkeeping() {
        // (p=2, q=1), one application: two terms, coefficients from
        // r^{(1)} = [q − p, 1] = [−1, 1].
        let rep = ibp_precondition(params(2.0, 1.0), 1).unwrap();
        assert_eq!(rep.terms.len(), 2);
        assert_eq!(rep.terms[0].real_factor, -1.0);
        assert_eq!(rep.terms[0].weight_power, -2.0);
        assert_eq!(rep.terms[0].envelope_order, 0);
        assert_eq!(rep.terms[1].real_factor, 1.0);
        assert_eq!(rep.terms[1].weight_power, -1.0);
        assert_eq!(rep.terms[1].envelope_order, 1);
        assert_eq!(rep.tail_power, -1.0);
        assert!(!rep.absolutely_integrable);
        assert_eq!(rep.required_times, Some(2));

        // (p=3, q=2): one application drops the weight order to −1; two make
        // it −3, absolutely integrable.
        let rep = ibp_precondition(params(3.0, 2.0), 1).unwrap();
        assert_eq!(rep.tail_power, -1.0);
        assert!(!rep.absolutely_integrable);
        let rep = ibp_precondition(params(3.0, 2.0), 2).unwrap();
        assert_eq!(rep.tail_power, -3.0);
        assert!(rep.absolutely_integrable);

        // (p=2, q=3): four applications needed.
        let rep = ibp_precondition(params(2.0, 3.0), 3).unwrap();
        assert_eq!(rep.required_times, Some(4));
        assert!(!rep.absolutely_integrable);
        assert!(ibp_precondition(params(2.0, 3.0), 4).unwrap().absolutely_integrable);

        // p = 1 makes no progress; p < 1 has no bounded-below phase derivative.
        assert!(ibp_precondition(params(1.0, 1.0), 1).is_err());
        assert!(ibp_precondition(params(1.0, 1.0), 0).is_ok());
        assert!(ibp_precondition(params(0.5, 1.0), 1).is_err());
    }

    // Fixed-ε cross-check: the boundary-terms-plus-preconditioned-tail
    // machinery must reproduce a brute-force quadrature of the same F(ε).
    #[test]
    fn preconditioned_value_matches_brute_force() {
        let cases = [
            (2.0, 1.0, 0usize, Cutoff::Gaussian),
            (3.0, 2.0, 0, Cutoff::Gaussian),
            (1.8, 0.6, 0, Cutoff::Sech),
            (2.0, 1.0, 1, Cutoff::Bump),
        ];
        for (p, q, k0, chi) in cases {
            // The largest scheduled ε, the stiffest the engine will ever see.
            let eps = 0.125;
            let schedule = EpsilonSchedule::default_geometric();
            let plan = make_plan(p, q, Sign::Plus, &chi, k0, &schedule).unwrap();
            assert!(matches!(plan.route, Route::Ibp { .. }), "p={p} should precondition");
            let (machine, _) = plan.one_epsilon(eps).unwrap();

            // Brute force: phase-resolved panels out to the envelope's decay
            // range, with extra refinement toward the origin for q < 1.
            let x_end = plan.ystar / eps;
            let pts = power_phase_breakpoints(1.0, p, 0.0, x_end, PI, 200_000).unwrap();
            let near0 = (1..=60).map(|i| x_end * 0.5f64.powi(i));
            let pts = merge_breakpoints(pts, near0, 0.0, x_end);
            let f = |x: f64| {
                if x <= 0.0 {
                    return Complex::ZERO;
                }
                Complex::from_polar(x.powf(q - 1.0) * plan.envelope(eps, x), x.powf(p))
            };
            let opts = QuadOptions {
                rel_tol: 5e-12,
                abs_tol: 1e-14,
                max_panels: pts.len() + 60_000,
            };
            let (brute, brute_err) = adaptive(&f, &pts, &opts).unwrap();
            assert!(
                (machine - brute).norm() <= 1e-9 + 10.0 * brute_err,
                "p={p} q={q} k0={k0} {}: machine {machine} vs brute {brute} (|Δ|={:.3e})",
                chi.name(),
                (machine - brute).norm()
            );
        }
    }

    #[test]
    fn regularized_matches_closed_form() {
        // (p=1, q=1): Os-∫ e^{ix} dx = i, the direct (non-preconditioned) route.
        let out = regularized_integral(
            params(1.0, 1.0),
            Sign::Plus,
            &Cutoff::Gaussian,
            &EpsilonSchedule::default_geometric(),
        )
        .unwrap();
        assert_close(out.value, Complex::i(), 1e-6, "(1,1) gaussian");
        assert!(out.converged, "(1,1) should converge");
        assert_eq!(out.per_epsilon_values.len(), 10);

        // (p=2, q=3): the oscillatory-only regime q ≥ p.
        let want = closed_form(params(2.0, 3.0), Sign::Plus).unwrap();
        let out = regularized_integral(
            params(2.0, 3.0),
            Sign::Plus,
            &Cutoff::Gaussian,
            &EpsilonSchedule::default_geometric(),
        )
        .unwrap();
        assert_close(out.value, want, 1e-6, "(2,3) gaussian");
        assert!(out.converged);
        assert!(out.error_estimate < 1e-6);
    }

    #[test]
    fn chi_independence_and_conjugation() {
        let schedule = EpsilonSchedule::default_geometric();
        let want = closed_form(params(2.0, 1.0), Sign::Plus).unwrap();
        let gauss =
            regularized_integral(params(2.0, 1.0), Sign::Plus, &Cutoff::Gaussian, &schedule)
                .unwrap();
        let sech =
            regularized_integral(params(2.0, 1.0), Sign::Plus, &Cutoff::Sech, &schedule).unwrap();
        assert_close(gauss.value, want, 1e-6, "(2,1) gaussian vs closed form");
        assert_close(sech.value, want, 1e-6, "(2,1) sech vs closed form");
        assert!(
            (gauss.value - sech.value).norm()
                <= 2.0 * gauss.error_estimate.max(sech.error_estimate).max(1e-9),
            "cutoff kinds disagree: {} vs {}",
            gauss.value,
            sech.value
        );

        let minus =
            regularized_integral(params(2.0, 1.0), Sign::Minus, &Cutoff::Gaussian, &schedule)
                .unwrap();
        assert_close(minus.value, gauss.value.conj(), 1e-8, "sign conjugation");
    }

    #[test]
    fn extrapolation_invariant_holds() {
        // error_estimate ≥ |value − previous extrapolation stage| exactly
        // (factor 1): the first summand IS that distance.
        let schedule = EpsilonSchedule::default_geometric();
        let out = regularized_integral(params(2.0, 1.0), Sign::Plus, &Cutoff::Gaussian, &schedule)
            .unwrap();
        let pts: Vec<(f64, Complex)> = out
            .per_epsilon_values
            .iter()
            .map(|&(e, v)| (e * e, v))
            .collect();
        let diag = neville_diagonal(&pts);
        let prev = diag[diag.len() - 2];
        assert!(out.error_estimate >= (out.value - prev).norm() * (1.0 - 1e-12));
    }

    #[test]
    fn derivative_integrals_extrapolate_to_zero() {
        let schedule = EpsilonSchedule::default_geometric();
        let cases = [
            (2.0, 1.0, 1u32, Cutoff::Gaussian),
            (1.0, 2.0, 2, Cutoff::Sech),
            (3.0, 1.0, 1, Cutoff::Bump),
        ];
        for (p, q, k, chi) in cases {
            let out = chi_derivative_integral(params(p, q), Sign::Plus, k, &chi, &schedule)
                .unwrap();
            assert!(
                out.value.norm() <= 1e-6f64.max(out.error_estimate),
                "(p={p}, q={q}, k={k}, {}): |value| = {:.3e}, est = {:.3e}",
                chi.name(),
                out.value.norm(),
                out.error_estimate
            );
        }
        assert!(chi_derivative_integral(
            params(2.0, 1.0),
            Sign::Plus,
            0,
            &Cutoff::Gaussian,
            &schedule
        )
        .is_err());
    }

    #[test]
    fn domain_errors() {
        let schedule = EpsilonSchedule::default_geometric();
        for bad in [params(0.0, 1.0), params(2.0, 0.0), params(2.0, -1.0)] {
            assert!(matches!(
                regularized_integral(bad, Sign::Plus, &Cutoff::Gaussian, &schedule),
                Err(Error::Domain(_))
            ));
        }
        let complex_q = FresnelParams::new(2.0, Complex::new(1.0, 0.5));
        assert!(regularized_integral(complex_q, Sign::Plus, &Cutoff::Gaussian, &schedule).is_err());
        assert!(abel_oracle(-1.0).is_err());
    }

    #[test]
    fn rotated_oracle_values() {
        // (2,1,+): the classical half-line Fresnel value (√π/2)e^{iπ/4}.
        let want = Complex::new(
            0.626657068657750125603941321203,
            0.626657068657750125603941321203,
        );
        let got = rotated_contour_oracle(params(2.0, 1.0), Sign::Plus).unwrap();
        assert_close(got, want, 1e-11, "rotated (2,1,+)");

        // (1,2,+): e^{iπ}Γ(2) = −1.
        let got = rotated_contour_oracle(params(1.0, 2.0), Sign::Plus).unwrap();
        assert_close(got, Complex::new(-1.0, 0.0), 1e-11, "rotated (1,2,+)");

        // (4,2,−): e^{−iπ/4}Γ(1/2)/4.
        let want = Complex::new(
            0.313328534328875062801970660601,
            -0.313328534328875062801970660601,
        );
        let got = rotated_contour_oracle(params(4.0, 2.0), Sign::Minus).unwrap();
        assert_close(got, want, 1e-11, "rotated (4,2,−)");
    }

    #[test]
    fn rotated_oracle_agrees_with_closed_form_on_grid() {
        for &p in &[0.5, 1.0, 2.0, 3.0, 7.5] {
            for frac in [0.1, 0.5, 0.9] {
                let q = frac * p;
                for sign in [Sign::Plus, Sign::Minus] {
                    let want = closed_form(params(p, q), sign).unwrap();
                    let got = rotated_contour_oracle(params(p, q), sign).unwrap();
                    assert!(
                        (got - want).norm() <= 1e-10 * want.norm(),
                        "(p={p}, q={q}, {sign}): got {got}, want {want}, rel {:.3e}",
                        (got - want).norm() / want.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn abel_oracle_values() {
        let out = abel_oracle(1.0).unwrap();
        assert_close(out.value, Complex::i(), 1e-6, "abel q=1");
        assert!(out.converged);

        let out = abel_oracle(2.0).unwrap();
        assert_close(out.value, Complex::new(-1.0, 0.0), 1e-6, "abel q=2");

        // q = 1/2: e^{iπ/4}√π.
        let want = Complex::new(
            1.25331413731550025120788264241,
            1.25331413731550025120788264241,
        );
        let out = abel_oracle(0.5).unwrap();
        assert_close(out.value, want, 1e-6, "abel q=1/2");
    }
}
