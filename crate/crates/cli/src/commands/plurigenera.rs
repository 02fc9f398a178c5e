//! `plurigenera`: the surface and threefold plurigenera tables of the family.

use std::path::PathBuf;

use anyhow::{Context, Result};
use charp_core::degeneration::{ConeModel, FamilyConfig, PlurigeneraTable};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use crate::input::{curve_json, usage, CurveArgs, OutputArgs, ThetaArg};
use crate::report::{Check, Provenance, Report, Timer};

#[derive(Args, Debug)]
pub struct PlurigeneraArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Largest m; rows are the multiples of m_bar p up to it.
    #[arg(long)]
    pub m_max: u64,
    /// The divisibility parameter m_bar.
    #[arg(long, default_value_t = 1)]
    pub mbar: u32,
    /// Degree a of the ample line bundle on E used for the cone.
    #[arg(long, default_value_t = 1)]
    pub a: u32,
    #[arg(long, value_enum, default_value_t = ThetaArg::Section)]
    pub theta: ThetaArg,
    /// Write the table as CSV to this file.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct CsvRow {
    m: u64,
    #[serde(rename = "P_m_t0")]
    p_m_t0: usize,
    #[serde(rename = "P_m_generic")]
    p_m_generic: usize,
    jump: i64,
    #[serde(rename = "threefold_P_m_t0")]
    threefold_p_m_t0: u64,
    #[serde(rename = "threefold_P_m_generic")]
    threefold_p_m_generic: u64,
}

pub fn write_csv(table: &PlurigeneraTable, path: &PathBuf) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for r in &table.rows {
        w.serialize(CsvRow {
            m: r.m,
            p_m_t0: r.surface_special,
            p_m_generic: r.surface_generic,
            jump: r.surface_jump,
            threefold_p_m_t0: r.threefold_special,
            threefold_p_m_generic: r.threefold_generic,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &PlurigeneraArgs) -> Result<(Report, PlurigeneraTable)> {
    let curve = args.curve.build()?;
    if args.mbar == 0 {
        return Err(usage("--mbar must be positive"));
    }
    let cfg = FamilyConfig::new(&curve, args.mbar, args.theta.into())?;
    let cone = ConeModel::new(args.a)?;
    let step = cfg.step();
    if args.m_max < step {
        return Err(usage(format!(
            "no m <= {} divisible by m_bar p = {step}",
            args.m_max
        )));
    }
    let p = cfg.characteristic() as i64;
    let mut report = Report::new(
        "plurigenera",
        json!({
            "curve": curve_json(&curve),
            "m_max": args.m_max,
            "m_bar": args.mbar,
            "a": args.a,
            "theta": cfg.theta(),
        }),
    );
    let mut timer = Timer::new();
    let table = timer.time("table", || {
        PlurigeneraTable::compute(&cfg, &cone, args.m_max)
    })?;
    for r in &table.rows {
        report.push(Check::relation(
            format!("surface_jump.m={}", r.m),
            Provenance::Derived,
            format!(">= {}", p - 1),
            r.surface_jump,
            r.surface_jump >= p - 1,
        ));
        report.push(Check::equal(
            format!("threefold_jump_equals_surface_jump.m={}", r.m),
            Provenance::Paper,
            r.surface_jump,
            r.threefold_jump,
        ));
        report.push(
            Check::equal(
                format!("expectation.floor(m/p)+1.m={}", r.m),
                Provenance::Paper,
                r.floor_expectation,
                r.surface_generic,
            )
            .informational(),
        );
    }
    report.notes.push(
        "expectation.* rows compare with the expected floor(m/p)+1 and are non-binding".into(),
    );
    report.set_result("table", &table);
    report.finish(args.output.timings.then_some(&timer));
    Ok((report, table))
}
