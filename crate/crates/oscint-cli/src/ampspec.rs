//! The amplitude mini-grammar shared by `expand` and `sweep`.
//!
//! Three forms (also listed in --help):
//!   gaussian                   e^{-x²/2}
//!   poly:c0,c1,...;gaussian    (c0 + c1·x + ...) e^{-x²/2}
//!   bump:lo,hi                 smooth bump supported exactly on (lo, hi)

use oscint::amplitude::Amplitude;
use oscint::{Error, Result};

pub const GRAMMAR_HELP: &str = "\
Amplitude specs:
  gaussian                   e^{-x^2/2}
  poly:c0,c1,...;gaussian    (c0 + c1*x + ...) e^{-x^2/2}
  bump:lo,hi                 smooth bump supported exactly on (lo, hi)";

pub fn parse(spec: &str) -> Result<Amplitude> {
    if spec == "gaussian" {
        return Ok(Amplitude::gaussian());
    }
    if let Some(rest) = spec.strip_prefix("poly:") {
        let Some(coeff_list) = rest.strip_suffix(";gaussian") else {
            return Err(bad(spec, "the poly form must end in \";gaussian\""));
        };
        let coeffs = parse_floats(coeff_list).map_err(|m| bad(spec, &m))?;
        return Amplitude::poly_gaussian(coeffs);
    }
    if let Some(rest) = spec.strip_prefix("bump:") {
        let ends = parse_floats(rest).map_err(|m| bad(spec, &m))?;
        let [lo, hi] = ends[..] else {
            return Err(bad(spec, "the bump form takes exactly two endpoints"));
        };
        if !(lo < hi) {
            return Err(bad(spec, "bump endpoints must satisfy lo < hi"));
        }
        return Amplitude::bump(0.5 * (lo + hi), 0.5 * (hi - lo));
    }
    Err(bad(spec, "unknown form"))
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .map_err(|_| format!("\"{tok}\" is not a number"))
        })
        .collect()
}

fn bad(spec: &str, why: &str) -> Error {
    Error::Domain(format!(
        "amplitude spec \"{spec}\": {why}; accepted forms are \
         gaussian, poly:c0,c1,...;gaussian, bump:lo,hi"
    ))
}
