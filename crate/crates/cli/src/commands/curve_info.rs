//! `curve-info`: invariants of a Weierstrass curve and of its bundle F_2.

use anyhow::Result;
use charp_core::cech::{h0, TwoChartCover};
use charp_core::unipotent::make_fr;
use clap::Args;
use serde_json::json;

use crate::input::{curve_json, CurveArgs, OutputArgs};
use crate::report::{Check, Provenance, Report, Timer};

#[derive(Args, Debug)]
pub struct CurveInfoArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn run(args: &CurveInfoArgs) -> Result<Report> {
    let curve = args.curve.build()?;
    let q = curve.field().order() as i64;
    let mut report = Report::new("curve-info", json!({ "curve": curve_json(&curve) }));
    let mut timer = Timer::new();

    let points = timer.time("point_count", || curve.count_points(1))?;
    let trace = q + 1 - points as i64;
    let by_trace = curve.is_supersingular_by_trace()?;
    let supersingular = curve.is_supersingular()?;
    report.set_result("discriminant", curve.discriminant().code());
    report.set_result("j_invariant", curve.j_invariant().code());
    report.set_result("points", points);
    report.set_result("frobenius_trace", trace);
    report.set_result("hasse_invariant", curve.hasse_invariant().map(|h| h.code()));
    report.set_result("supersingular", supersingular);

    report.push(Check::relation(
        "hasse_bound",
        Provenance::Trivial,
        "t^2 <= 4q",
        trace,
        trace * trace <= 4 * q,
    ));
    report.push(Check::equal(
        "supersingular.hasse_vs_trace",
        Provenance::Derived,
        by_trace,
        supersingular,
    ));

    let cover = TwoChartCover::new(&curve);
    report.set_metadata("base_point_x", cover.base_x().code());
    let f2 = make_fr(&cover, 2)?;
    let pulled = timer.time("frobenius_pullback", || {
        h0(&f2.bundle().frobenius_pullback())
    });
    report.set_result("frobenius_pullback_h0", pulled);
    report.push(Check::equal(
        "frobenius.pullback_splits_iff_supersingular",
        Provenance::Derived,
        supersingular,
        pulled == 2,
    ));
    report.finish(args.output.timings.then_some(&timer));
    Ok(report)
}
