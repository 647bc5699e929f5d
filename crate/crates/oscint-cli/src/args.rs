//! Flag-level enums shared by the subcommands, plus small flag validators.

use clap::ValueEnum;
use oscint::cutoff::Cutoff;
use oscint::fresnel::Sign;
use oscint::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl SignArg {
    pub fn sign(self) -> Sign {
        match self {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SignArg::Plus => "plus",
            SignArg::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Gamma-function closed form (the reference)
    Closed,
    /// Contour rotated onto the decay ray, adaptive quadrature
    Rotated,
    /// Cutoff-regularized limit, extrapolated over the cutoff scale
    Oscillatory,
    /// Exponential damping limit (phase power p = 1 only)
    Abel,
}

impl MethodArg {
    pub fn label(self) -> &'static str {
        match self {
            MethodArg::Closed => "closed",
            MethodArg::Rotated => "rotated",
            MethodArg::Oscillatory => "oscillatory",
            MethodArg::Abel => "abel",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChiArg {
    Gaussian,
    Sech,
    Bump,
}

impl ChiArg {
    pub fn cutoff(self) -> Cutoff {
        match self {
            ChiArg::Gaussian => Cutoff::Gaussian,
            ChiArg::Sech => Cutoff::Sech,
            ChiArg::Bump => Cutoff::Bump,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ChiArg::Gaussian => "gaussian",
            ChiArg::Sech => "sech",
            ChiArg::Bump => "bump",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    /// Integral over (0, ∞), any real phase power p ≥ 1
    Halfline,
    /// Integral over ℝ, integer phase power m ≥ 1
    Line,
}

impl DomainArg {
    pub fn label(self) -> &'static str {
        match self {
            DomainArg::Halfline => "halfline",
            DomainArg::Line => "line",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentArg {
    /// |oracle − partial sum| vs λ, slope fit against the remainder order
    Remainder,
    /// |weighted half-line integral| vs λ, slope fit against the decay order
    Decay,
    /// Regularized value under the three cutoff kinds; λ column is a row index
    ChiIndependence,
}

impl ExperimentArg {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentArg::Remainder => "remainder",
            ExperimentArg::Decay => "decay",
            ExperimentArg::ChiIndependence => "chi-independence",
        }
    }
}

/// Full-line phase powers must be positive integers (the phase x^m has to be
/// smooth across 0).
pub fn full_line_power(p: f64) -> Result<u32> {
    if p.is_finite() && p >= 1.0 && p.fract() == 0.0 && p <= u32::MAX as f64 {
        Ok(p as u32)
    } else {
        Err(Error::Domain(format!(
            "full-line phase power must be an integer ≥ 1, got {p}"
        )))
    }
}

/// Worker count for sweep evaluation: the OSCINT_THREADS override when set,
/// otherwise the machine parallelism, never more than the number of items.
pub fn thread_count(items: usize) -> Result<usize> {
    let n = match std::env::var("OSCINT_THREADS") {
        Ok(s) => s.parse::<usize>().ok().filter(|&t| t >= 1).ok_or_else(|| {
            Error::Domain(format!(
                "OSCINT_THREADS must be a positive integer, got \"{s}\""
            ))
        })?,
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    Ok(n.min(items.max(1)))
}
