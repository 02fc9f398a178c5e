//! One pass/fail line per acceptance criterion. Runs without the libtest harness so
//! the lines always appear in `cargo test` output.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use charp_core::cech::{certified_level, cohomology, h0, TwoChartCover};
use charp_core::degeneration::{
    non_cm_certificate, parametric_cohomology, ConeModel, FamilyConfig, FiberChoice,
    PlurigeneraTable, ThetaVariant,
};
use charp_core::snc::{check_condition, explore_blowup_chains, Verdict, Q};
use charp_core::unipotent::{make_fr, DecompositionType};
use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn default_cfg(p: u32) -> FamilyConfig {
    FamilyConfig::default_for_prime(p).unwrap()
}

fn criterion_1() -> Outcome {
    for p in PRIMES {
        let cfg = default_cfg(p);
        let s = cfg.model(FiberChoice::Generic);
        for m in 1..p {
            let h = s.section_count(m, None).map_err(|e| e.to_string())?;
            let ty = s.pushforward_type(m).map_err(|e| e.to_string())?;
            ensure(h == 1, || format!("p = {p}, m = {m}: h0 = {h}"))?;
            ensure(ty == DecompositionType::new(vec![m as usize + 1]), || {
                format!("p = {p}, m = {m}: type {ty}")
            })?;
        }
    }
    Ok("h0(mD) = 1 and type {m+1} for 1 <= m < p, p in {2,3,5}".into())
}

fn criterion_2() -> Outcome {
    for p in PRIMES {
        let cfg = default_cfg(p);
        let s = cfg.model(FiberChoice::Generic);
        let h = s.section_count(p, None).map_err(|e| e.to_string())?;
        let ty = s.pushforward_type(p).map_err(|e| e.to_string())?;
        ensure(
            h == 2 && ty == DecompositionType::new(vec![1, p as usize]),
            || format!("p = {p}: h0 = {h}, {ty}"),
        )?;
    }
    Ok("h0(pD) = 2 and type {1,p}".into())
}

/// The literal bound `h0 <= m + 2 - p` on all of `1..=2p+2`, which criterion 1 forces to
/// fail where `m + 2 - p < 1`. Returns the violations and whether the corrected form holds.
/// `(p, m, h0)` where the literal bound fails.
type Violation = (u32, u32, usize);

fn criterion_3() -> (Vec<Violation>, Result<(), String>) {
    let mut violations = Vec::new();
    let mut corrected = Ok(());
    for p in PRIMES {
        let cfg = default_cfg(p);
        let s = cfg.model(FiberChoice::Generic);
        for m in 1..=2 * p + 2 {
            let h = s.section_count(m, None).unwrap();
            if h as i64 > (m + 2) as i64 - p as i64 {
                violations.push((p, m, h));
            }
            if h > m as usize || (m + 1 >= p && h > (m + 2 - p) as usize) {
                corrected = Err(format!("p = {p}, m = {m}: h0 = {h}"));
            }
        }
    }
    (violations, corrected)
}

fn criterion_4() -> Outcome {
    for p in PRIMES {
        let cfg = default_cfg(p);
        let h = cfg
            .model(FiberChoice::Generic)
            .thickened_section_h1(p)
            .map_err(|e| e.to_string())?;
        ensure(h == 2, || format!("p = {p}: h1(pD, O) = {h}"))?;
        let r = non_cm_certificate(&cfg).map_err(|e| e.to_string())?;
        let verdicts: Vec<_> = r
            .fibers
            .iter()
            .map(|f| (f.fiber, f.h1, f.cohen_macaulay))
            .collect();
        ensure(
            verdicts
                == [
                    (FiberChoice::Special, 1, true),
                    (FiberChoice::Generic, 2, false),
                ],
            || format!("p = {p}: {verdicts:?}"),
        )?;
    }
    Ok("h1(pD, O) = 2; t = 0: h1 = 1 (torsion-free), CM; t != 0: not CM".into())
}

fn criterion_5() -> Outcome {
    let mut rows = 0;
    for p in PRIMES {
        for m_bar in [1, 2] {
            let cfg = FamilyConfig::new(
                &default_cfg(p).curve().clone(),
                m_bar,
                ThetaVariant::Section,
            )
            .unwrap();
            let t = PlurigeneraTable::compute(&cfg, &ConeModel::new(1).unwrap(), 2 * p as u64 + 2)
                .map_err(|e| e.to_string())?;
            for r in &t.rows {
                rows += 1;
                ensure(
                    r.surface_jump >= p as i64 - 1 && r.threefold_jump == r.surface_jump,
                    || {
                        format!(
                            "p = {p}, m = {}: jumps {} / {}",
                            r.m, r.surface_jump, r.threefold_jump
                        )
                    },
                )?;
            }
        }
    }
    Ok(format!(
        "{rows} valid rows with jump >= p - 1 and equal threefold jump"
    ))
}

fn criterion_6() -> Outcome {
    for p in PRIMES {
        let cfg = default_cfg(p);
        for m in 1..=2 * p + 2 {
            let r = parametric_cohomology(&cfg, m).map_err(|e| e.to_string())?;
            ensure(r.generic < r.special, || format!("p = {p}, m = {m}: {r:?}"))?;
            if m == p {
                ensure((r.generic, r.special) == (2, p as usize + 1), || {
                    format!("p = {p}: {r:?}")
                })?;
            }
        }
    }
    Ok("generic < special on 1..=2p+2, (2, p+1) at m = p".into())
}

fn criterion_7() -> Outcome {
    let mut bundles = 0;
    for (i, p) in PRIMES.into_iter().enumerate() {
        let cover = cover_for(p, dichotomy_curves(p)[0]);
        let mut r = rng(7000 + i as u64);
        for _ in 0..50 {
            let v = random_bundle(&cover, &mut r);
            let res = cohomology(&v, None).map_err(|e| e.to_string())?;
            bundles += 1;
            ensure(res.h0 as i64 - res.h1 as i64 == v.degree(), || {
                format!("Riemann-Roch fails, p = {p}")
            })?;
            ensure(res.h1 == h0(&v.dual()), || {
                format!("Serre duality fails, p = {p}")
            })?;
            let n = certified_level(&v);
            let at = |k| cohomology(&v, Some(k)).map(|c| (c.h0, c.h1)).unwrap();
            ensure(at(n) == at(n + 1), || {
                format!("truncation N vs N+1 differs, p = {p}")
            })?;
        }
        let f2 = make_fr(&TwoChartCover::new(&default_cfg(p).curve().clone()), 2).unwrap();
        for m in 1..=2 * p + 2 {
            let v = f2.bundle().sym(m);
            ensure(h0(&v) == filtration_h0(&v), || {
                format!("filtration oracle differs, p = {p}, m = {m}")
            })?;
        }
    }
    Ok(format!(
        "{bundles} random bundles: RR, Serre, N/N+1; filtration oracle on Sym^m F_2"
    ))
}

fn criterion_8() -> Outcome {
    let mut counts = Vec::new();
    for p in PRIMES {
        let (mut ordinary, mut supersingular) = (0, 0);
        for a in dichotomy_curves(p) {
            let c = curve(p, a);
            let ss = c.is_supersingular().map_err(|e| e.to_string())?;
            ensure(ss == supersingular_by_count(&c), || {
                format!("p = {p}, {a:?}: Hasse and point count disagree")
            })?;
            let pulled = h0(&make_fr(&TwoChartCover::new(&c), 2)
                .unwrap()
                .bundle()
                .frobenius_pullback());
            ensure((pulled == 2) == ss, || {
                format!("p = {p}, {a:?}: h0 = {pulled}, supersingular {ss}")
            })?;
            if ss {
                supersingular += 1;
            } else {
                ordinary += 1;
            }
        }
        ensure(ordinary >= 1 && supersingular >= 1, || {
            format!("p = {p}: only one kind of curve")
        })?;
        counts.push(format!(
            "p = {p}: {ordinary} ordinary, {supersingular} supersingular"
        ));
    }
    Ok(counts.join("; "))
}

fn criterion_9() -> Outcome {
    use charp_core::snc::{DeltaComponent, StratifiedPair, Stratum};
    let line = |c: Q| StratifiedPair {
        dimension: 2,
        divisors: vec!["L".into()],
        strata: vec![Stratum {
            j: vec!["L".into()],
            dim: 1,
            contains_delta_component: false,
            max_mult: c,
            depends_on: vec![],
        }],
        delta: vec![DeltaComponent {
            name: "M".into(),
            coeff: c,
        }],
    };
    let verdicts: Vec<Verdict> = [Q::new(1, 2), Q::from_integer(1), Q::new(3, 2)]
        .into_iter()
        .map(|c| check_condition(&line(c), true).unwrap().verdict)
        .collect();
    ensure(
        verdicts == [Verdict::Dlt, Verdict::Lc, Verdict::ConditionViolated],
        || format!("{verdicts:?}"),
    )?;
    let mut pairs = vec![line(Q::new(1, 2)), line(Q::from_integer(1))];
    let mut r = rng(9000);
    while pairs.len() < 40 {
        let p = random_pair(&mut r);
        if check_condition(&p, true).unwrap().verdict != Verdict::ConditionViolated {
            pairs.push(p);
        }
    }
    for p in [2, 3, 5] {
        for m_bar in [1, 2] {
            let cfg = FamilyConfig::new(
                &default_cfg(p).curve().clone(),
                m_bar,
                ThetaVariant::Section,
            )
            .unwrap();
            let fp = charp_core::snc::paper_config(
                &cfg,
                &ConeModel::new(1).unwrap(),
                Default::default(),
            )
            .unwrap();
            pairs.push(fp.fibers[0].pair.clone());
        }
    }
    let mut visited = 0;
    for pair in &pairs {
        let strict = check_condition(pair, true).unwrap().verdict == Verdict::Dlt;
        let s = explore_blowup_chains(pair, 4).map_err(|e| e.to_string())?;
        visited += s.pairs_visited;
        ensure(s.holds(strict), || format!("{pair:?}: {s:?}"))?;
    }
    Ok(format!(
        "three worked verdicts; {} passing pairs, {visited} blow-ups to depth 4",
        pairs.len()
    ))
}

fn criterion_10() -> Outcome {
    for p in [2, 3, 5] {
        for m_bar in [1, 2] {
            let out = Command::new(env!("CARGO_BIN_EXE_charp"))
                .args([
                    "dlt-check",
                    "--paper-config",
                    "--p",
                    &p.to_string(),
                    "--mbar",
                    &m_bar.to_string(),
                ])
                .output()
                .map_err(|e| e.to_string())?;
            let report: serde_json::Value =
                serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
            ensure(
                out.status.code() == Some(0) && report["results"]["verdict"] == "dlt",
                || {
                    format!(
                        "p = {p}, m_bar = {m_bar}: exit {:?}, verdict {}",
                        out.status.code(),
                        report["results"]["verdict"]
                    )
                },
            )?;
        }
    }
    Ok("charp dlt-check --paper-config: dlt, exit 0 for p in {2,3,5}, m_bar in {1,2}".into())
}

fn main() -> ExitCode {
    let mut unexpected = 0;
    let mut line = |n: u32, outcome: Outcome, secs: f64| match outcome {
        Ok(detail) => println!("criterion {n:>2}: PASS ({secs:.1}s) {detail}"),
        Err(detail) => {
            unexpected += 1;
            println!("criterion {n:>2}: FAIL ({secs:.1}s) {detail}");
        }
    };
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    for (n, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        line(n, outcome, start.elapsed().as_secs_f64());
        if n == 2 {
            let start = Instant::now();
            let (violations, corrected) = criterion_3();
            let secs = start.elapsed().as_secs_f64();
            // criterion 1 forces h0 = 1 below p, so the literal bound fails exactly on m < p - 1
            let forced: Vec<Violation> = PRIMES
                .into_iter()
                .flat_map(|p| (1..p.saturating_sub(1)).map(move |m| (p, m, 1)))
                .collect();
            let listed: Vec<String> = violations
                .iter()
                .map(|(p, m, h)| format!("p={p} m={m} h0={h}"))
                .collect();
            match corrected {
                Ok(()) if violations.is_empty() => line(3, Ok("h0 <= m + 2 - p on 1..=2p+2".into()), secs),
                Ok(()) if violations == forced => println!(
                    "criterion  3: FAIL ({secs:.1}s) literal bound h0 <= m + 2 - p violated at {}, where criterion 1 \
                     forces h0 = 1; h0 < m + 1 holds on 1..=2p+2 and h0 <= m + 2 - p holds on p-1..=2p+2 \
                     (known conflict, not counted)",
                    listed.join(", ")
                ),
                Ok(()) => line(3, Err(format!("unexpected violations {}", listed.join(", "))), secs),
                Err(e) => line(3, Err(e), secs),
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
