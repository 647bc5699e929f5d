//! The `expand` subcommand: expansion term table vs a quadrature oracle.

use clap::Args;
use oscint::stationary::{
    full_line_expansion, half_line_expansion, weighted_full_line_value, weighted_half_line_value,
};
use oscint::{Error, Result};
use serde_json::json;

use crate::ampspec;
use crate::args::{full_line_power, DomainArg, SignArg};
use crate::report::{NamedValue, Provenance, RunReport};

#[derive(Args)]
#[command(after_help = ampspec::GRAMMAR_HELP)]
pub struct ExpandArgs {
    /// Phase power: any real p ≥ 1 on the half line, an integer m ≥ 1 on the line
    #[arg(long = "phase-power", allow_negative_numbers = true)]
    pub phase_power: f64,
    #[arg(long, value_enum)]
    pub domain: DomainArg,
    /// Amplitude spec (see the grammar below)
    #[arg(long)]
    pub amplitude: String,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,
    /// Number of expansion terms N; requires N + 1 > phase power
    #[arg(long)]
    pub order: u32,
    /// Scale at which to evaluate the partial sum and the oracle
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
}

pub fn run(args: &ExpandArgs) -> Result<RunReport> {
    let mut rep = RunReport::new("expand");
    rep.input("phase_power", json!(args.phase_power));
    rep.input("domain", args.domain.label());
    rep.input("amplitude", args.amplitude.as_str());
    rep.input("sign", args.sign.label());
    rep.input("order", json!(args.order));
    rep.input("lambda", json!(args.lambda));

    if !(args.lambda > 0.0 && args.lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "lambda must be positive and finite, got {}",
            args.lambda
        )));
    }
    let a = ampspec::parse(&args.amplitude)?;
    let sign = args.sign.sign();

    let (expansion, oracle) = match args.domain {
        DomainArg::Halfline => (
            half_line_expansion(args.phase_power, &a, sign, args.order)?,
            weighted_half_line_value(args.phase_power, 1.0, &a, sign, args.lambda)?,
        ),
        DomainArg::Line => {
            let m = full_line_power(args.phase_power)?;
            (
                full_line_expansion(m, &a, sign, args.order)?,
                weighted_full_line_value(m, &a, sign, args.lambda)?,
            )
        }
    };

    for (k, term) in expansion.terms.iter().enumerate() {
        rep.outputs.push(
            NamedValue::new(format!("term[{k}]"), term.coefficient, Provenance::ClosedForm)
                .exponent(term.exponent),
        );
    }
    let partial = expansion.partial_sum(args.lambda);
    rep.outputs.push(NamedValue::new(
        "partial_sum",
        partial,
        Provenance::ClosedForm,
    ));
    rep.outputs.push(
        NamedValue::new("oracle", oracle.value, Provenance::Quadrature)
            .error_estimate(oracle.error_estimate),
    );
    rep.diag("abs_remainder", json!((oracle.value - partial).norm()));
    rep.diag(
        "remainder_exponent",
        json!(expansion.remainder_exponent),
    );
    rep.diag("all_terms_zero", json!(expansion.is_zero()));
    Ok(rep)
}
