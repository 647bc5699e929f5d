//! The `fresnel` subcommand: one oscillatory power integral, four methods.

use clap::Args;
use oscint::fresnel::{closed_form, poles_in_q, FresnelParams, Sign};
use oscint::regularize::{
    abel_oracle, regularized_integral, rotated_contour_oracle, EpsilonSchedule, QuadratureOutcome,
};
use oscint::{Complex, Error, Result};
use serde_json::json;

use crate::args::{ChiArg, MethodArg, SignArg};
use crate::report::{complex_json, NamedValue, Provenance, RunReport};

#[derive(Args)]
#[command(after_help = "\
Methods:
  closed       gamma-function closed form (the reference)
  rotated      contour rotated onto the decay ray, adaptive quadrature
  oscillatory  cutoff-regularized limit, extrapolated over the cutoff scale
  abel         exponential damping limit (phase power p = 1 only)")]
pub struct FresnelArgs {
    /// Phase power p > 0
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    /// Weight exponent: the integrand carries x^{q-1}
    #[arg(long, allow_negative_numbers = true)]
    pub q: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    /// Cutoff kind for the oscillatory method
    #[arg(long, value_enum, default_value_t = ChiArg::Gaussian)]
    pub chi: ChiArg,
    /// Acceptance gate on the extrapolation error estimate
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

pub fn run(args: &FresnelArgs) -> Result<RunReport> {
    let mut rep = RunReport::new("fresnel");
    rep.input("p", json!(args.p));
    rep.input("q", json!(args.q));
    rep.input("sign", args.sign.label());
    rep.input("method", args.method.label());
    rep.input("chi", args.chi.label());
    rep.input("tol", json!(args.tol));

    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(Error::Domain(format!(
            "tol must be positive and finite, got {}",
            args.tol
        )));
    }

    let sign = args.sign.sign();
    let params = FresnelParams::new(args.p, args.q);
    near_pole_scan(&mut rep, args.p, args.q, sign)?;

    match args.method {
        MethodArg::Closed => {
            let v = closed_form(params, sign)?;
            rep.outputs
                .push(NamedValue::new("integral", v, Provenance::ClosedForm));
        }
        MethodArg::Rotated => {
            let v = rotated_contour_oracle(params, sign)?;
            rep.outputs
                .push(NamedValue::new("integral", v, Provenance::Quadrature));
            push_closed_reference(&mut rep, params, sign, v)?;
        }
        MethodArg::Oscillatory => {
            let schedule = EpsilonSchedule::default_geometric();
            rep.default_in_effect("epsilon_schedule", schedule_json(&schedule));
            let out = regularized_integral(params, sign, &args.chi.cutoff(), &schedule)?;
            gate(&out, args.tol, "regularized integral")?;
            push_extrapolated(&mut rep, &out, out.value);
            push_closed_reference(&mut rep, params, sign, out.value)?;
        }
        MethodArg::Abel => {
            if args.p != 1.0 {
                return Err(Error::Domain(format!(
                    "the abel method damps the phase e^{{±ix}} and needs p = 1, got p = {}",
                    args.p
                )));
            }
            rep.default_in_effect(
                "tau_schedule",
                schedule_json(&EpsilonSchedule::default_geometric()),
            );
            let out = abel_oracle(args.q)?;
            // The damped integrand for the minus sign is the complex
            // conjugate pointwise, so the limit conjugates too.
            let v = match sign {
                Sign::Plus => out.value,
                Sign::Minus => out.value.conj(),
            };
            gate(&out, args.tol, "damping limit")?;
            push_extrapolated(&mut rep, &out, v);
            push_closed_reference(&mut rep, params, sign, v)?;
        }
    }
    Ok(rep)
}

/// Adds the closed-form reference value and the deviation of `v` from it.
fn push_closed_reference(
    rep: &mut RunReport,
    params: FresnelParams,
    sign: Sign,
    v: Complex,
) -> Result<()> {
    let c = closed_form(params, sign)?;
    rep.outputs.push(NamedValue::new(
        "closed_form_reference",
        c,
        Provenance::ClosedForm,
    ));
    rep.diag("deviation_from_closed", json!((v - c).norm()));
    Ok(())
}

fn push_extrapolated(rep: &mut RunReport, out: &QuadratureOutcome, v: Complex) {
    rep.outputs.push(
        NamedValue::new("integral", v, Provenance::Extrapolated)
            .error_estimate(out.error_estimate),
    );
    rep.diag("converged", json!(out.converged));
    rep.diag("extrapolation_samples", json!(out.per_epsilon_values.len()));
}

fn gate(out: &QuadratureOutcome, tol: f64, what: &str) -> Result<()> {
    if !out.converged || !(out.error_estimate <= tol) {
        return Err(Error::NonConvergence(format!(
            "{what}: error estimate {:.3e} exceeds tol {:.1e} (converged: {})",
            out.error_estimate, tol, out.converged
        )));
    }
    Ok(())
}

fn schedule_json(s: &EpsilonSchedule) -> serde_json::Value {
    json!({ "values": s.values, "extrapolation_order": s.order })
}

/// The integral, as a function of q, has simple poles at q = -p·j for
/// j = 0, 1, 2, ...; warn when q sits within 1e-3·max(1, p·j) of one.
/// Exactly at a pole the evaluation itself reports the error instead.
fn near_pole_scan(rep: &mut RunReport, p: f64, q: f64, sign: Sign) -> Result<()> {
    if !(p > 0.0) {
        return Ok(()); // let the evaluation report the bad p
    }
    let j = (-q / p).round();
    if j < 0.0 {
        return Ok(());
    }
    let loc = -p * j;
    let dist = (q - loc).abs();
    if dist == 0.0 || dist >= 1e-3 * loc.abs().max(1.0) {
        return Ok(());
    }
    let window = (loc - 0.4 * p, loc + 0.4 * p);
    let pole = poles_in_q(p, window, sign)?
        .into_iter()
        .find(|r| (r.location.re - loc).abs() < 1e-9 * loc.abs().max(1.0))
        .ok_or_else(|| Error::Domain(format!("no pole found near q = {loc}")))?;
    rep.warn(format!(
        "q = {q} is within {dist:.1e} of the pole at q = {loc}; \
         residue there is {:.6e} + {:.6e}i",
        pole.residue.re, pole.residue.im
    ));
    rep.diag(
        "nearest_pole",
        json!({
            "location": complex_json(pole.location),
            "residue": complex_json(pole.residue),
            "distance": dist,
        }),
    );
    Ok(())
}
