//! Argument groups and their validation into core objects.

use std::fmt;

use anyhow::Result;
use charp_core::degeneration::{default_curve, ThetaVariant};
use charp_core::elliptic::WeierstrassCurve;
use charp_core::gf::FiniteField;
use charp_core::Error;
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

/// Invalid command-line input that clap cannot detect by itself.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Core errors caused by the input rather than by a failed computation.
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::NotPrime(_)
            | Error::FieldTooLarge { .. }
            | Error::ReducibleModulus(_)
            | Error::SingularCurve
            | Error::EnumerationBound { .. }
            | Error::NonDivisible { .. }
            | Error::IncompleteAnnotation(_)
            | Error::BaseDependent(_)
            | Error::InvalidInput(_)
    )
}

#[derive(Args, Debug, Clone)]
pub struct CurveArgs {
    /// Characteristic of the base field.
    #[arg(long)]
    pub p: u32,
    /// Degree n of the base field GF(p^n).
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
    /// Weierstrass coefficients a1,a2,a3,a4,a6. Integers over GF(p); field element codes
    /// (base-p digits of the coefficient vector) over GF(p^n).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub curve: Option<Vec<i64>>,
}

impl CurveArgs {
    pub fn build(&self) -> Result<WeierstrassCurve> {
        if self.degree == 0 {
            return Err(usage("--degree must be at least 1"));
        }
        let field = FiniteField::new(self.p, self.degree, None)?;
        let Some(coeffs) = &self.curve else {
            let base = default_curve(self.p)?;
            let ints = base.coefficients().map(|c| c.code() as i64);
            return Ok(WeierstrassCurve::from_ints(field, ints)?);
        };
        let a: [i64; 5] = coeffs
            .as_slice()
            .try_into()
            .map_err(|_| usage("--curve takes exactly five coefficients"))?;
        if self.degree == 1 {
            return Ok(WeierstrassCurve::from_ints(field, a)?);
        }
        let q = field.order() as i64;
        if a.iter().any(|&c| c < 0 || c >= q) {
            return Err(usage(format!("coefficient codes must lie in 0..{q}")));
        }
        Ok(WeierstrassCurve::from_codes(field, a.map(|c| c as u32))?)
    }
}

pub fn curve_json(curve: &WeierstrassCurve) -> Value {
    let f = curve.field();
    json!({
        "p": f.characteristic(),
        "degree": f.degree(),
        "field_order": f.order(),
        "modulus": f.modulus(),
        "coefficients": curve.coefficients().map(|c| c.code()),
    })
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaArg {
    /// The section D with coefficient 1.
    Section,
    /// m_bar further members of the pencil |pD|.
    PencilAverage,
}

impl From<ThetaArg> for ThetaVariant {
    fn from(t: ThetaArg) -> Self {
        match t {
            ThetaArg::Section => ThetaVariant::Section,
            ThetaArg::PencilAverage => ThetaVariant::PencilAverage,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Format of the report on standard output.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub out_json: Option<std::path::PathBuf>,
    /// Add wall-clock timings to the report, which makes it nondeterministic.
    #[arg(long)]
    pub timings: bool,
}
