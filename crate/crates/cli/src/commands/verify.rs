//! `verify-claims`: the claim suite for one characteristic and curve.

use anyhow::Result;
use charp_core::cech::{cohomology, h0};
use charp_core::degeneration::{
    non_cm_certificate, parametric_cohomology, FamilyConfig, FiberChoice, ThetaVariant,
};
use charp_core::ruled::RuledSurfaceModel;
use charp_core::unipotent::UnipotentBundle;
use clap::Args;
use serde_json::json;

use crate::input::{curve_json, CurveArgs, OutputArgs};
use crate::report::{Check, Provenance, Report, Timer};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Truncation level for the section counts instead of the certified one.
    #[arg(long)]
    pub truncation_level: Option<i64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

struct Counter<'a> {
    model: &'a RuledSurfaceModel,
    level: Option<i64>,
    levels: Vec<serde_json::Value>,
}

impl Counter<'_> {
    /// `h0(O(mD))`, recording the truncation level used.
    fn count(&mut self, m: u32) -> Result<usize> {
        let v = self.model.pushforward(m)?;
        let r = cohomology(v.bundle(), self.level)?;
        self.levels
            .push(json!({ "m": m, "level": r.truncation_level, "certified": r.certified }));
        Ok(r.h0)
    }
}

pub fn run(args: &VerifyArgs) -> Result<Report> {
    let curve = args.curve.build()?;
    let cfg = FamilyConfig::new(&curve, 1, ThetaVariant::Section)?;
    let p = cfg.characteristic();
    let mut report = Report::new(
        "verify-claims",
        json!({ "curve": curve_json(&curve), "truncation_level": args.truncation_level }),
    );
    report.set_metadata("base_point_x", cfg.cover().base_x().code());
    let mut timer = Timer::new();
    let nonsplit = cfg.model(FiberChoice::Generic);
    let split = cfg.model(FiberChoice::Special);
    let mut counter = Counter {
        model: nonsplit,
        level: args.truncation_level,
        levels: Vec::new(),
    };

    let m_top = 2 * p + 2;
    let counts = timer.time("section_counts", || {
        (1..=m_top)
            .map(|m| counter.count(m))
            .collect::<Result<Vec<_>>>()
    })?;
    let h = |m: u32| counts[m as usize - 1];

    timer.time("pushforward_types", || -> Result<()> {
        for m in 1..p {
            report.push(Check::equal(
                format!("claim1.h0(mD).m={m}"),
                Provenance::Paper,
                1,
                h(m),
            ));
            let ty = nonsplit.pushforward_type(m)?;
            report.push(Check::equal(
                format!("claim1.pushforward_type.m={m}"),
                Provenance::Paper,
                format!("{{{}}}", m + 1),
                ty.to_string(),
            ));
        }
        report.push(Check::equal("claim2.h0(pD)", Provenance::Paper, 2, h(p)));
        let ty = nonsplit.pushforward_type(p)?;
        report.push(Check::equal(
            "claim2.pushforward_type",
            Provenance::Paper,
            format!("{{1,{p}}}"),
            ty.to_string(),
        ));
        Ok(())
    })?;

    for m in 1..=m_top {
        report.push(Check::relation(
            format!("claim3.h0(mD)<m+1.m={m}"),
            Provenance::Paper,
            format!("< {}", m + 1),
            h(m),
            h(m) < m as usize + 1,
        ));
    }
    // the filtration bound needs the subsheaf O((p-1)D), so it starts at m = p - 1
    for m in (p - 1).max(1)..=m_top {
        let bound = (m + 2 - p) as usize;
        report.push(Check::relation(
            format!("claim3.filtration_bound.m={m}"),
            Provenance::Paper,
            format!("<= {bound}"),
            h(m),
            h(m) <= bound,
        ));
    }
    for m in 1..=m_top {
        let expectation = (m / p + 1) as usize;
        report.push(
            Check::equal(
                format!("expectation.floor(m/p)+1.m={m}"),
                Provenance::Paper,
                expectation,
                h(m),
            )
            .informational(),
        );
    }

    let non_cm = timer.time("non_cm", || non_cm_certificate(&cfg))?;
    report.push(Check::equal(
        "non_cm.thickened_h1(pD)",
        Provenance::Paper,
        2,
        nonsplit.thickened_section_h1(p)?,
    ));
    let thickened = UnipotentBundle::new(nonsplit.thickened_pushforward(p)?)?;
    let ty = nonsplit.engine().decomposition_type(&thickened)?;
    report.push(Check::equal(
        "non_cm.thickened_pushforward_type",
        Provenance::Paper,
        format!("{{1,{}}}", p - 1),
        ty.to_string(),
    ));
    report.push(Check::equal(
        "non_cm.reduced_section_h1",
        Provenance::Trivial,
        1,
        non_cm.reduced_section_h1,
    ));
    for v in &non_cm.fibers {
        let (name, cm) = match v.fiber {
            FiberChoice::Special => ("t=0", true),
            FiberChoice::Generic => ("t!=0", false),
        };
        let multiplicity = if cm { 1 } else { p };
        report.push(Check::equal(
            format!("non_cm.fiber_multiplicity.{name}"),
            Provenance::Paper,
            multiplicity,
            v.fiber_multiplicity,
        ));
        report.push(Check::equal(
            format!("non_cm.cohen_macaulay.{name}"),
            Provenance::Paper,
            cm,
            v.cohen_macaulay,
        ));
    }
    report.push(Check::equal(
        "non_cm.split_thickened_h1(pD)",
        Provenance::Derived,
        p,
        split.thickened_section_h1(p)?,
    ));
    report.set_result("non_cm", &non_cm);

    let free = timer.time("pencil", || nonsplit.pencil_basepoint_check(p))?;
    report.push(Check::equal(
        "pencil.basepoint_free(pD)",
        Provenance::Paper,
        true,
        free,
    ));

    let ranks = timer.time("parametric", || {
        (1..=m_top)
            .map(|m| parametric_cohomology(&cfg, m))
            .collect::<Result<Vec<_>, _>>()
    })?;
    for (m, r) in (1..=m_top).zip(&ranks) {
        report.push(Check::relation(
            format!("parametric.generic<special.m={m}"),
            Provenance::Derived,
            "generic < special",
            json!({ "generic": r.generic, "special": r.special }),
            r.generic < r.special,
        ));
    }
    let at_p = &ranks[p as usize - 1];
    report.push(Check::equal(
        "parametric.ranks.m=p",
        Provenance::Paper,
        json!({ "generic": 2, "special": p + 1 }),
        json!({ "generic": at_p.generic, "special": at_p.special }),
    ));

    let supersingular = curve.is_supersingular()?;
    let pulled = timer.time("frobenius", || {
        h0(&nonsplit.bundle().bundle().frobenius_pullback())
    });
    report.push(Check::equal(
        "frobenius.pullback_splits_iff_supersingular",
        Provenance::Derived,
        supersingular,
        pulled == 2,
    ));
    report.set_result("supersingular", supersingular);
    report.set_result("section_counts", &counts);
    report.set_metadata("truncation_levels", &counter.levels);
    report.finish(args.output.timings.then_some(&timer));
    Ok(report)
}
