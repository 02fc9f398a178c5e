//! `dlt-check`: the multiplicity criterion on an annotated pair or family.

use std::io::Read;
use std::path::PathBuf;

use anyhow::{Context, Result};
use charp_core::degeneration::{ConeModel, FamilyConfig};
use charp_core::snc::{
    check_condition, explore_blowup_chains, family_check, paper_config, FamilyPair,
    PaperPairOptions, StratifiedPair, Verdict,
};
use clap::Args;
use serde_json::{json, Value};

use crate::input::{curve_json, usage, CurveArgs, OutputArgs, ThetaArg};
use crate::report::{Check, Provenance, Report, Timer};

#[derive(Args, Debug)]
pub struct DltArgs {
    /// Pair or family JSON; `-` reads standard input.
    pub path: Option<PathBuf>,
    /// Check the built-in cone configuration instead of a file.
    #[arg(long, conflicts_with = "path", requires = "p")]
    pub paper_config: bool,
    /// Characteristic for `--paper-config`.
    #[arg(long)]
    pub p: Option<u32>,
    /// Weierstrass coefficients for `--paper-config`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub curve: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1)]
    pub mbar: u32,
    #[arg(long, value_enum, default_value_t = ThetaArg::Section)]
    pub theta: ThetaArg,
    /// Number k of general members in `Z'_inf = (2/k)(H_1 + ... + H_k)`.
    #[arg(long, default_value_t = PaperPairOptions::default().z_inf_members)]
    pub z_inf_members: u32,
    /// Test only the lc condition, never concluding dlt.
    #[arg(long)]
    pub lc_only: bool,
    /// Also explore blow-up chains of this depth from each fiber pair.
    #[arg(long, default_value_t = 0)]
    pub chain_depth: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

enum Input {
    Pair(StratifiedPair),
    Family(FamilyPair),
}

fn read_input(path: &PathBuf) -> Result<Input> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("cannot read standard input")?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
    };
    let v: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("malformed JSON: {e}")))?;
    let parsed = if v.get("fibers").is_some() {
        serde_json::from_value(v).map(Input::Family)
    } else {
        serde_json::from_value(v).map(Input::Pair)
    };
    parsed.map_err(|e| usage(format!("malformed pair: {e}")))
}

pub fn run(args: &DltArgs) -> Result<Report> {
    let strict = !args.lc_only;
    let mut timer = Timer::new();
    let (input, config, expect_dlt) = if args.paper_config {
        let p = args.p.expect("clap requires --p");
        let curve = CurveArgs {
            p,
            degree: 1,
            curve: args.curve.clone(),
        }
        .build()?;
        if args.mbar == 0 {
            return Err(usage("--mbar must be positive"));
        }
        let cfg = FamilyConfig::new(&curve, args.mbar, args.theta.into())?;
        let opts = PaperPairOptions {
            z_inf_members: args.z_inf_members,
        };
        let fp = paper_config(&cfg, &ConeModel::new(1)?, opts)?;
        let config = json!({
            "paper_config": true,
            "curve": curve_json(&curve),
            "m_bar": args.mbar,
            "theta": cfg.theta(),
            "z_inf_members": args.z_inf_members,
            "strict": strict,
        });
        (Input::Family(fp), config, true)
    } else {
        let path = args
            .path
            .as_ref()
            .ok_or_else(|| usage("give a pair file or --paper-config"))?;
        let config = json!({ "paper_config": false, "path": path, "strict": strict });
        (read_input(path)?, config, false)
    };
    let mut report = Report::new("dlt-check", config);

    let (verdict, pairs) = match &input {
        Input::Pair(pair) => {
            let r = timer.time("check", || check_condition(pair, strict))?;
            report.set_result("strata", &r.strata);
            (r.verdict, vec![pair])
        }
        Input::Family(fp) => {
            let r = timer.time("check", || family_check(fp, strict))?;
            report.set_result("fibers", &r.fibers);
            report.set_result("base_change_stable", r.base_change_stable);
            (r.verdict(), fp.fibers.iter().map(|f| &f.pair).collect())
        }
    };
    report.set_result("verdict", verdict);

    if expect_dlt && strict {
        report.push(Check::equal(
            "verdict",
            Provenance::Derived,
            Verdict::Dlt,
            verdict,
        ));
    } else {
        report.push(Check::relation(
            "verdict",
            Provenance::Trivial,
            "dlt or lc",
            verdict,
            verdict >= Verdict::Lc,
        ));
    }
    if verdict == Verdict::Lc && strict {
        report.notes.push("not dlt-strict".into());
    }

    if args.chain_depth > 0 && verdict >= Verdict::Lc {
        let mut chains = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let s = timer.time("chains", || explore_blowup_chains(pair, args.chain_depth))?;
            let strict_chain = strict && verdict == Verdict::Dlt;
            report.push(Check::relation(
                format!("blowup_chains.pair={i}"),
                Provenance::Derived,
                if strict_chain {
                    "discrepancy > -1 over supp Delta, >= -1 elsewhere"
                } else {
                    "discrepancy >= -1"
                },
                &s,
                s.holds(strict_chain),
            ));
            chains.push(s);
        }
        report.set_result("chains", &chains);
    }
    report.finish(args.output.timings.then_some(&timer));
    Ok(report)
}
