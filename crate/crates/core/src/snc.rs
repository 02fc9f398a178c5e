//! A combinatorial log canonical / dlt criterion for pairs `(X, D + Delta)` with `X`
//! regular, `D = sum D_i` simple normal crossing and `Delta` effective.
//!
//! If for every stratum `D_J` no component of `D_J` lies in `supp Delta` and
//! `mult_x(Delta|D_J) <= 1` (resp. `< 1`) at every `x` in `D_J`, the pair is lc (resp.
//! dlt) near `D`. The criterion is sufficient only: a violated condition proves nothing.
//! Multiplicities are supplied as per-stratum upper bounds rather than computed from
//! equations.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::degeneration::{ConeModel, FamilyConfig, ThetaVariant};
use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// Serde for rationals: written as `"a/b"` (or `"a"`), read from that form, a decimal
/// string, an integer or a JSON number.
pub mod rational_serde {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Float(f64),
        Text(String),
    }

    pub fn parse(text: &str) -> Option<Q> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            return (b != 0).then(|| Q::new(a, b));
        }
        if let Some((int, frac)) = text.split_once('.') {
            let neg = int.starts_with('-');
            let digits = frac.len() as u32;
            if digits > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return None;
            }
            let den = 10i64.pow(digits);
            let whole: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().ok()?
            };
            let f: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().ok()?
            };
            let num = whole.abs() * den + f;
            return Some(Q::new(if neg { -num } else { num }, den));
        }
        text.parse::<i64>().ok().map(Q::from_integer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        use serde::de::Error;
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Q::from_integer(i)),
            // shortest round-trip representation, read back as an exact decimal
            Raw::Float(x) => {
                parse(&format!("{x}")).ok_or_else(|| D::Error::custom(format!("bad rational {x}")))
            }
            Raw::Text(t) => {
                parse(&t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}")))
            }
        }
    }
}

/// One stratum `D_J` with its annotation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub dim: u32,
    pub contains_delta_component: bool,
    /// Upper bound for `mult_x(Delta|D_J)` over `x` in `D_J`.
    #[serde(with = "rational_serde")]
    pub max_mult: Q,
    /// Coordinates the annotation depends on.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub depends_on: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaComponent {
    pub name: String,
    #[serde(with = "rational_serde")]
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedPair {
    pub dimension: u32,
    pub divisors: Vec<String>,
    pub strata: Vec<Stratum>,
    #[serde(default)]
    pub delta: Vec<DeltaComponent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConditionViolated,
    Lc,
    Dlt,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Dlt => "dlt",
            Verdict::Lc => "lc",
            Verdict::ConditionViolated => "condition-violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumDiagnostic {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    #[serde(with = "rational_serde")]
    pub max_mult: Q,
    pub contains_delta_component: bool,
    pub lc_condition: bool,
    pub dlt_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub strata: Vec<StratumDiagnostic>,
}

type Key = BTreeSet<String>;

impl StratifiedPair {
    fn key(j: &[String]) -> Key {
        j.iter().cloned().collect()
    }

    fn stratum(&self, j: &Key) -> Option<&Stratum> {
        self.strata.iter().find(|s| Self::key(&s.j) == *j)
    }

    /// Structural checks: SNC dimensions, names, and an annotation for every subset of
    /// an annotated stratum and for every divisor.
    pub fn validate(&self) -> Result<()> {
        let n = self.dimension;
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let names: BTreeSet<&String> = self.divisors.iter().collect();
        if names.len() != self.divisors.len() {
            return Err(Error::InvalidInput("duplicate divisor names".into()));
        }
        let mut seen: HashMap<Key, usize> = HashMap::new();
        for (idx, s) in self.strata.iter().enumerate() {
            let k = Self::key(&s.j);
            if k.is_empty() || k.len() != s.j.len() {
                return Err(Error::InvalidInput(format!(
                    "stratum {:?} must list distinct divisors",
                    s.j
                )));
            }
            if let Some(bad) = k.iter().find(|d| !names.contains(d)) {
                return Err(Error::InvalidInput(format!("unknown divisor {bad}")));
            }
            if k.len() as u32 > n || s.dim != n - k.len() as u32 {
                return Err(Error::InvalidInput(format!(
                    "stratum {:?} of a normal crossing divisor has dimension {}",
                    s.j,
                    n as i64 - k.len() as i64
                )));
            }
            if s.max_mult < Q::zero() {
                return Err(Error::InvalidInput(format!(
                    "negative multiplicity on {:?}",
                    s.j
                )));
            }
            if seen.insert(k, idx).is_some() {
                return Err(Error::InvalidInput(format!(
                    "stratum {:?} listed twice",
                    s.j
                )));
            }
        }
        for d in &self.divisors {
            if !seen.contains_key(&Self::key(std::slice::from_ref(d))) {
                return Err(Error::IncompleteAnnotation(format!(
                    "no stratum for divisor {d}"
                )));
            }
        }
        for k in seen.keys() {
            for drop in k {
                let mut sub = k.clone();
                sub.remove(drop);
                if !sub.is_empty() && !seen.contains_key(&sub) {
                    return Err(Error::IncompleteAnnotation(format!(
                        "no stratum for {sub:?}"
                    )));
                }
            }
        }
        for c in &self.delta {
            if c.coeff <= Q::zero() {
                return Err(Error::InvalidInput(format!(
                    "coefficient of {} must be positive",
                    c.name
                )));
            }
        }
        Ok(())
    }
}

/// Evaluates the criterion. With `strict = false` only lc is tested, so the verdict is
/// never `Dlt`.
pub fn check_condition(pair: &StratifiedPair, strict: bool) -> Result<CheckReport> {
    pair.validate()?;
    let one = Q::one();
    let strata: Vec<StratumDiagnostic> = pair
        .strata
        .iter()
        .map(|s| {
            // a point stratum lies in supp Delta as soon as Delta passes through it
            let contained = s.contains_delta_component || (s.dim == 0 && s.max_mult > Q::zero());
            StratumDiagnostic {
                j: s.j.clone(),
                max_mult: s.max_mult,
                contains_delta_component: contained,
                lc_condition: !contained && s.max_mult <= one,
                dlt_condition: !contained && s.max_mult < one,
            }
        })
        .collect();
    let verdict = if strict && strata.iter().all(|s| s.dlt_condition) {
        Verdict::Dlt
    } else if strata.iter().all(|s| s.lc_condition) {
        Verdict::Lc
    } else {
        Verdict::ConditionViolated
    };
    Ok(CheckReport { verdict, strata })
}

/// A closed point `x`: the boundary divisors through it and `mult_x(Delta)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDatum {
    pub through: Vec<String>,
    #[serde(with = "rational_serde")]
    pub delta_mult: Q,
    /// No tangent direction of a stratum through `x` lies in the tangent cone of `Delta`.
    pub transversal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Discrepancy(#[serde(with = "rational_serde")] pub Q);

impl Discrepancy {
    pub fn value(&self) -> Q {
        self.0
    }

    pub fn is_log_canonical(&self) -> bool {
        self.0 >= -Q::one()
    }

    pub fn exceeds_minus_one(&self) -> bool {
        self.0 > -Q::one()
    }
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn check_point(pair: &StratifiedPair, x: &PointDatum) -> Result<()> {
    let k = StratifiedPair::key(&x.through);
    if k.len() != x.through.len() || x.delta_mult < Q::zero() {
        return Err(Error::InvalidInput("malformed point datum".into()));
    }
    if k.is_empty() {
        return Ok(());
    }
    let s = pair.stratum(&k).ok_or_else(|| {
        Error::InvalidInput(format!("no stratum {:?} through the point", x.through))
    })?;
    if x.delta_mult > s.max_mult {
        return Err(Error::InvalidInput(format!(
            "mult_x(Delta) exceeds the bound on {:?}",
            x.through
        )));
    }
    Ok(())
}

/// `a(D_0, X, D + Delta) = (n - 1) - mult_x(D) - mult_x(Delta)` for the blow-up of `x`.
pub fn discrepancy_first_blowup(pair: &StratifiedPair, x: &PointDatum) -> Result<Discrepancy> {
    check_point(pair, x)?;
    Ok(Discrepancy(
        Q::from_integer(pair.dimension as i64 - 1 - x.through.len() as i64) - x.delta_mult,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupStep {
    pub center: PointDatum,
    pub exceptional: String,
    pub discrepancy: Discrepancy,
}

/// `(B_x X, (D_0 + pi^-1_* D) + pi^-1_* Delta)` with annotations updated conservatively.
///
/// Old strata keep their bounds, since multiplicities of strict transforms do not grow.
/// The new strata are `D_0 ∩ D_J'` for `J` among the divisors through `x`; inside
/// `D_0 = P(T_x X)` this is `P(T_x D_J)`, and `Delta'` restricts to the tangent cone of
/// `Delta`, of degree `mult_x(Delta)`. So the bound is `min(mult_x(Delta), bound on D_J)`.
/// A transversal tangent cone misses the points `P(T_x D_J)` of 0-dimensional new strata
/// and contains no positive-dimensional one; otherwise containment is assumed.
pub fn blowup_step(pair: &StratifiedPair, x: &PointDatum) -> Result<(StratifiedPair, BlowupStep)> {
    if check_condition(pair, false)?.verdict == Verdict::ConditionViolated {
        return Err(Error::ConditionViolated(
            "the pair before blowing up".into(),
        ));
    }
    let discrepancy = discrepancy_first_blowup(pair, x)?;
    let n = pair.dimension;
    let name = (0..)
        .map(|i| format!("E{i}"))
        .find(|c| !pair.divisors.contains(c) && !pair.delta.iter().any(|d| &d.name == c))
        .expect("unbounded name supply");
    let through: Vec<String> = StratifiedPair::key(&x.through).into_iter().collect();
    let mut out = pair.clone();
    out.divisors.push(name.clone());
    let in_support = x.delta_mult > Q::zero();
    for mask in 0u32..(1 << through.len()) {
        let j: Vec<String> = (0..through.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| through[b].clone())
            .collect();
        if j.len() as u32 >= n {
            continue;
        }
        let dim = n - 1 - j.len() as u32;
        let (max_mult, contains, depends_on) = if j.is_empty() {
            (x.delta_mult, false, Vec::new())
        } else {
            let old = pair
                .stratum(&StratifiedPair::key(&j))
                .ok_or_else(|| Error::IncompleteAnnotation(format!("no stratum for {j:?}")))?;
            let contains = in_support && !x.transversal;
            let bound = if dim == 0 {
                Q::zero()
            } else {
                x.delta_mult.min(old.max_mult)
            };
            (
                if contains { x.delta_mult } else { bound },
                contains,
                old.depends_on.clone(),
            )
        };
        let mut jj = j;
        jj.push(name.clone());
        out.strata.push(Stratum {
            j: jj,
            dim,
            contains_delta_component: contains,
            max_mult,
            depends_on,
        });
    }
    if check_condition(&out, false)?.verdict == Verdict::ConditionViolated {
        return Err(Error::ConditionViolated(format!(
            "the blow-up at {:?}",
            x.through
        )));
    }
    Ok((
        out,
        BlowupStep {
            center: x.clone(),
            exceptional: name,
            discrepancy,
        },
    ))
}

/// Candidate blow-up centers: a point of each stratum where `Delta` reaches its bound,
/// and the points of 0-dimensional strata.
pub fn candidate_centers(pair: &StratifiedPair) -> Vec<PointDatum> {
    let mut out = Vec::new();
    for s in &pair.strata {
        if s.dim == 0 {
            out.push(PointDatum {
                through: s.j.clone(),
                delta_mult: Q::zero(),
                transversal: true,
            });
        } else if s.max_mult > Q::zero() {
            out.push(PointDatum {
                through: s.j.clone(),
                delta_mult: s.max_mult,
                transversal: !s.contains_delta_component,
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    pub pairs_visited: usize,
    pub depth_reached: u32,
    /// Least discrepancy over all blow-ups.
    #[serde(with = "opt_rational")]
    pub min_discrepancy: Option<Q>,
    /// Least discrepancy over blow-ups centered in `supp Delta`.
    #[serde(with = "opt_rational")]
    pub min_discrepancy_in_support: Option<Q>,
}

mod opt_rational {
    use super::Q;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&q.to_string()),
            None => s.serialize_none(),
        }
    }
}

impl ChainSummary {
    /// Every discrepancy is at least -1, and for `strict` those centered in
    /// `supp Delta` exceed -1.
    pub fn holds(&self, strict: bool) -> bool {
        let m1 = -Q::one();
        self.min_discrepancy.is_none_or(|d| d >= m1)
            && (!strict || self.min_discrepancy_in_support.is_none_or(|d| d > m1))
    }
}

/// Explores all blow-up chains of length at most `depth` over [`candidate_centers`].
pub fn explore_blowup_chains(pair: &StratifiedPair, depth: u32) -> Result<ChainSummary> {
    fn rec(pair: &StratifiedPair, level: u32, depth: u32, acc: &mut ChainSummary) -> Result<()> {
        acc.pairs_visited += 1;
        acc.depth_reached = acc.depth_reached.max(level);
        if level == depth {
            return Ok(());
        }
        for x in candidate_centers(pair) {
            let (next, step) = blowup_step(pair, &x)?;
            let d = step.discrepancy.value();
            acc.min_discrepancy = Some(acc.min_discrepancy.map_or(d, |m| m.min(d)));
            if x.delta_mult > Q::zero() {
                acc.min_discrepancy_in_support =
                    Some(acc.min_discrepancy_in_support.map_or(d, |m| m.min(d)));
            }
            rec(&next, level + 1, depth, acc)?;
        }
        Ok(())
    }
    let mut acc = ChainSummary {
        pairs_visited: 0,
        depth_reached: 0,
        min_discrepancy: None,
        min_discrepancy_in_support: None,
    };
    rec(pair, 0, depth, &mut acc)?;
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberKind {
    Generic,
    Special,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberPair {
    pub kind: FiberKind,
    /// The pair `(X, (X_c + D) + Delta)`, with the fiber divisor among its divisors.
    pub pair: StratifiedPair,
}

/// A smooth family over a curve with coordinate `base_parameter`, given fiberwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPair {
    pub fiber_divisor: String,
    pub base_parameter: String,
    pub fibers: Vec<FiberPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub kind: FiberKind,
    pub report: CheckReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub fibers: Vec<FiberReport>,
    /// The verdicts hold after any base change: annotations never refer to the base.
    pub base_change_stable: bool,
}

impl FamilyReport {
    /// The weakest verdict over all fibers.
    pub fn verdict(&self) -> Verdict {
        self.fibers
            .iter()
            .map(|f| f.report.verdict)
            .min()
            .unwrap_or(Verdict::ConditionViolated)
    }
}

pub fn family_check(fp: &FamilyPair, strict: bool) -> Result<FamilyReport> {
    if !fp.fibers.iter().any(|f| f.kind == FiberKind::Generic) {
        return Err(Error::InvalidInput("family has no generic fiber".into()));
    }
    let mut fibers = Vec::new();
    for f in &fp.fibers {
        if !f.pair.divisors.contains(&fp.fiber_divisor) {
            return Err(Error::InvalidInput(format!(
                "fiber divisor {} missing from the boundary",
                fp.fiber_divisor
            )));
        }
        if f.pair
            .strata
            .iter()
            .any(|s| s.depends_on.contains(&fp.base_parameter))
        {
            return Err(Error::BaseDependent(fp.base_parameter.clone()));
        }
        fibers.push(FiberReport {
            kind: f.kind,
            report: check_condition(&f.pair, strict)?,
        });
    }
    Ok(FamilyReport {
        fibers,
        base_change_stable: true,
    })
}

/// Options for [`paper_config`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PaperPairOptions {
    /// `Z'_inf = (2/k)(H_1 + ... + H_k)` with `H_i` general in `|Z_inf|`.
    pub z_inf_members: u32,
}

impl Default for PaperPairOptions {
    fn default() -> Self {
        PaperPairOptions { z_inf_members: 8 }
    }
}

/// A family of `Delta`-components of equal coefficient and the boundary divisors they miss.
struct DeltaGroup {
    coefficient: Q,
    count: u32,
    /// Members are pairwise disjoint.
    disjoint: bool,
    avoids: Vec<&'static str>,
}

/// Largest `mult_x(Delta|D_J)` on a `d`-dimensional stratum: general members meet strata
/// transversally, at most `d` of them pass through a point of it, and a disjoint group
/// contributes at most one member.
fn stratum_bound(groups: &[DeltaGroup], j: &[&str], d: u32) -> Q {
    let mut coeffs: Vec<Q> = Vec::new();
    for g in groups
        .iter()
        .filter(|g| !g.avoids.iter().any(|a| j.contains(a)))
    {
        let n = if g.disjoint { 1 } else { g.count };
        coeffs.extend(std::iter::repeat_n(g.coefficient, n as usize));
    }
    coeffs.sort_by(|a, b| b.cmp(a));
    coeffs
        .into_iter()
        .take(d as usize)
        .fold(Q::zero(), |a, b| a + b)
}

/// The annotated pair `(Y, Delta_Y + Z_0 + Z'_inf + D_Y + Y_t)` on the cone, for both
/// kinds of fiber.
///
/// The boundary is `Z_0`, the fiber `Y_t` and, when `Theta = D`, the pullback `D_Y`.
/// `Delta_Y` consists of `2 m_bar` general members of the pencil `|p D|` (pairwise
/// disjoint and disjoint from `D`), with `m_bar` more when `Theta` is replaced by them,
/// and `Z'_inf` of `k` general members of `|Z_inf|`, which miss `Z_0`.
pub fn paper_config(
    cfg: &FamilyConfig,
    _cone: &ConeModel,
    opts: PaperPairOptions,
) -> Result<FamilyPair> {
    let k = opts.z_inf_members;
    if k == 0 {
        return Err(Error::InvalidInput(
            "Z'_inf needs at least one member".into(),
        ));
    }
    let g = Q::new(1, cfg.step() as i64);
    let h = Q::new(2, k as i64);
    let one = Q::one();
    if g >= one || h >= one {
        return Err(Error::InvalidInput(
            "boundary coefficients of the Q-divisor part must be below 1".into(),
        ));
    }
    let pencil_members = match cfg.theta() {
        ThetaVariant::Section => 2 * cfg.m_bar(),
        ThetaVariant::PencilAverage => 3 * cfg.m_bar(),
    };
    let groups = [
        DeltaGroup {
            coefficient: g,
            count: pencil_members,
            disjoint: true,
            avoids: vec!["DY"],
        },
        DeltaGroup {
            coefficient: h,
            count: k,
            disjoint: false,
            avoids: vec!["Z0"],
        },
    ];
    let mut boundary = vec!["Z0", "Yt"];
    if cfg.theta() == ThetaVariant::Section {
        boundary.push("DY");
    }
    let n = 3u32;
    let mut strata = Vec::new();
    for mask in 1u32..(1 << boundary.len()) {
        let j: Vec<&str> = (0..boundary.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| boundary[b])
            .collect();
        let d = n - j.len() as u32;
        strata.push(Stratum {
            j: j.iter().map(|s| s.to_string()).collect(),
            dim: d,
            contains_delta_component: false,
            max_mult: stratum_bound(&groups, &j, d),
            depends_on: Vec::new(),
        });
    }
    let mut delta: Vec<DeltaComponent> = (1..=pencil_members)
        .map(|i| DeltaComponent {
            name: format!("G{i}"),
            coeff: g,
        })
        .collect();
    delta.extend((1..=k).map(|i| DeltaComponent {
        name: format!("H{i}"),
        coeff: h,
    }));
    let pair = StratifiedPair {
        dimension: n,
        divisors: boundary.iter().map(|s| s.to_string()).collect(),
        strata,
        delta,
    };
    Ok(FamilyPair {
        fiber_divisor: "Yt".into(),
        base_parameter: "t".into(),
        fibers: vec![
            FiberPair {
                kind: FiberKind::Special,
                pair: pair.clone(),
            },
            FiberPair {
                kind: FiberKind::Generic,
                pair,
            },
        ],
    })
}
