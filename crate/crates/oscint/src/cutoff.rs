//! Schwartz-class cutoff functions χ with χ(0) = 1 and exact derivatives.
//!
//! The regularization engine needs χ^{(k)} for k up to ~14 (envelope
//! derivatives generated by integration by parts), so every built-in kind
//! carries a closed-form derivative recurrence:
//!
//! * gaussian e^{−x²}:      χ^{(k)} = H_k(x) e^{−x²},   H_{k+1} = H_k′ − 2x H_k
//! * sech 2/(eˣ+e⁻ˣ):       χ^{(k)} = sech(x) Q_k(tanh x),
//!                          Q_{k+1}(t) = −t Q_k + (1−t²) Q_k′
//! * bump exp(1 − 1/(1−x²)) on |x| < 1, else 0:
//!                          χ^{(k)} = N_k(x) (1−x²)^{−2k} χ,
//!                          N_{k+1} = (N_k′ D + 4k x N_k) D − 2x N_k,  D = 1−x²
//!
//! All three are even, which the ε-extrapolation exploits (the regularized
//! values expand in ε²).

use std::sync::Arc;

// Dense polynomial helpers, ascending coefficient order.

pub(crate) fn poly_eval(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &ci in c.iter().rev() {
        acc = acc * x + ci;
    }
    acc
}

pub(crate) fn poly_derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub(crate) fn poly_add_scaled(a: &mut Vec<f64>, b: &[f64], s: f64) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (ai, &bi) in a.iter_mut().zip(b) {
        *ai += s * bi;
    }
}

/// A user-supplied cutoff: one callable giving χ^{(k)}(x) for every k.
pub struct CustomCutoff {
    /// Short name used in diagnostics.
    pub name: String,
    /// (k, x) ↦ χ^{(k)}(x); k = 0 is the value itself. Must satisfy χ(0) = 1.
    pub derivatives: Box<dyn Fn(usize, f64) -> f64 + Send + Sync>,
    /// Support interval when compactly supported.
    pub support: Option<(f64, f64)>,
}

/// Schwartz cutoff χ with χ(0) = 1.
#[derive(Clone)]
pub enum Cutoff {
    /// e^{−x²}
    Gaussian,
    /// 2/(eˣ + e⁻ˣ)
    Sech,
    /// exp(1 − 1/(1−x²)) on |x| < 1, identically 0 outside
    Bump,
    /// Programmatic hook for cutoffs beyond the built-in kinds.
    Custom(Arc<CustomCutoff>),
}

impl std::fmt::Debug for Cutoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Beyond this, 1/(1−x²) > 700 and the bump value underflows the error
/// tolerances of every consumer; derivatives are cut to exact zero there
/// (true magnitude below ~1e-140).
const BUMP_EDGE_GUARD: f64 = 700.0;

impl Cutoff {
    /// The three built-in kinds, in documentation order.
    pub const BUILT_IN: [Cutoff; 3] = [Cutoff::Gaussian, Cutoff::Sech, Cutoff::Bump];

    pub fn name(&self) -> &str {
        match self {
            Cutoff::Gaussian => "gaussian",
            Cutoff::Sech => "sech",
            Cutoff::Bump => "bump",
            Cutoff::Custom(c) => &c.name,
        }
    }

    /// χ(x).
    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// χ^{(k)}(x). For hot loops evaluating many orders at many points, use
    /// [`Cutoff::derivative_family`] instead (it hoists the recurrences).
    pub fn derivative(&self, k: usize, x: f64) -> f64 {
        match self {
            Cutoff::Custom(c) => (c.derivatives)(k, x),
            _ => self.derivative_family(k).eval(k, x),
        }
    }

    /// Support interval when compactly supported.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Cutoff::Bump => Some((-1.0, 1.0)),
            Cutoff::Custom(c) => c.support,
            _ => None,
        }
    }

    /// Precompute derivative polynomials up to order `max_k`.
    pub fn derivative_family(&self, max_k: usize) -> DerivativeFamily {
        let polys = match self {
            Cutoff::Gaussian => {
                let mut h: Vec<Vec<f64>> = vec![vec![1.0]];
                for k in 0..max_k {
                    // H_{k+1} = H_k′ − 2x H_k
                    let mut next = poly_derivative(&h[k]);
                    poly_add_scaled(&mut next, &poly_mul(&[0.0, 1.0], &h[k]), -2.0);
                    h.push(next);
                }
                FamilyKind::Gaussian(h)
            }
            Cutoff::Sech => {
                let mut q: Vec<Vec<f64>> = vec![vec![1.0]];
                for k in 0..max_k {
                    // Q_{k+1}(t) = −t Q_k + (1 − t²) Q_k′
                    let mut next = poly_mul(&[0.0, -1.0], &q[k]);
                    poly_add_scaled(&mut next, &poly_mul(&[1.0, 0.0, -1.0], &poly_derivative(&q[k])), 1.0);
                    q.push(next);
                }
                FamilyKind::Sech(q)
            }
            Cutoff::Bump => {
                let d = [1.0, 0.0, -1.0];
                let mut n: Vec<Vec<f64>> = vec![vec![1.0]];
                for k in 0..max_k {
                    // N_{k+1} = (N_k′ D + 4k x N_k) D − 2x N_k
                    let mut inner = poly_mul(&poly_derivative(&n[k]), &d);
                    poly_add_scaled(&mut inner, &poly_mul(&[0.0, 1.0], &n[k]), 4.0 * k as f64);
                    let mut next = poly_mul(&inner, &d);
                    poly_add_scaled(&mut next, &poly_mul(&[0.0, 1.0], &n[k]), -2.0);
                    n.push(next);
                }
                FamilyKind::Bump(n)
            }
            Cutoff::Custom(c) => FamilyKind::Custom(c.clone()),
        };
        DerivativeFamily { polys }
    }

    /// Grid sup of |χ^{(k)}| over [−50, 50] (or the support), 4001 samples.
    /// Used to size truncation tails; an upper-bound heuristic, not exact.
    pub fn derivative_sup(&self, k: usize) -> f64 {
        let family = self.derivative_family(k);
        let (lo, hi) = self.support().unwrap_or((-50.0, 50.0));
        let n = 4000;
        let mut sup = 0.0f64;
        for i in 0..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            sup = sup.max(family.eval(k, x).abs());
        }
        sup
    }
}

enum FamilyKind {
    Gaussian(Vec<Vec<f64>>),
    Sech(Vec<Vec<f64>>),
    Bump(Vec<Vec<f64>>),
    Custom(Arc<CustomCutoff>),
}

/// Precomputed derivative evaluators χ^{(k)} for k ≤ max_k.
pub struct DerivativeFamily {
    polys: FamilyKind,
}

impl DerivativeFamily {
    /// χ^{(k)}(x); k must be within the precomputed range.
    pub fn eval(&self, k: usize, x: f64) -> f64 {
        match &self.polys {
            FamilyKind::Gaussian(h) => poly_eval(&h[k], x) * (-x * x).exp(),
            FamilyKind::Sech(q) => {
                let t = x.tanh();
                let s = 1.0 / x.cosh();
                s * poly_eval(&q[k], t)
            }
            FamilyKind::Bump(n) => {
                let d = 1.0 - x * x;
                if d <= 0.0 || 1.0 / d > BUMP_EDGE_GUARD {
                    return 0.0;
                }
                let chi = (1.0 - 1.0 / d).exp();
                poly_eval(&n[k], x) * d.powi(-2 * k as i32) * chi
            }
            FamilyKind::Custom(c) => (c.derivatives)(k, x),
        }
    }

    /// χ^{(j)}(x) for all j = 0..out.len(), sharing the transcendental calls.
    pub fn eval_all(&self, x: f64, out: &mut [f64]) {
        match &self.polys {
            FamilyKind::Gaussian(h) => {
                let e = (-x * x).exp();
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = poly_eval(&h[j], x) * e;
                }
            }
            FamilyKind::Sech(q) => {
                let t = x.tanh();
                let s = 1.0 / x.cosh();
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = s * poly_eval(&q[j], t);
                }
            }
            FamilyKind::Bump(n) => {
                let d = 1.0 - x * x;
                if d <= 0.0 || 1.0 / d > BUMP_EDGE_GUARD {
                    out.fill(0.0);
                    return;
                }
                let chi = (1.0 - 1.0 / d).exp();
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = poly_eval(&n[j], x) * d.powi(-2 * j as i32) * chi;
                }
            }
            FamilyKind::Custom(c) => {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = (c.derivatives)(j, x);
                }
            }
        }
    }
}
