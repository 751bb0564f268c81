//! Seeded verification suites. Every check instance yields one
//! [`ReportRecord`]; records come back in instance order regardless of the
//! worker pool size.

mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charts::AtlasConfig;
use crate::error::{Error, Result};
use crate::rng::instance_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Param,
    Couple,
    Hormander,
    Elliptic,
    Charts,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Param,
        Suite::Couple,
        Suite::Hormander,
        Suite::Elliptic,
        Suite::Charts,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Param => "param",
            Suite::Couple => "couple",
            Suite::Hormander => "hormander",
            Suite::Elliptic => "elliptic",
            Suite::Charts => "charts",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::ALL.to_vec(),
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown suite `{s}`")))
    }
}

/// How `lhs`, `rhs` and `tolerance` decide a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|lhs - rhs| <= tol·max(|lhs|, |rhs|, 1)`.
    Eq,
    /// `|lhs - rhs| <= tol`.
    AbsEq,
    /// `lhs <= rhs + tol·max(|rhs|, 1)`.
    Le,
    /// `lhs > rhs`.
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Eq => (lhs - rhs).abs() <= tol * lhs.abs().max(rhs.abs()).max(1.0),
            Relation::AbsEq => (lhs - rhs).abs() <= tol,
            Relation::Le => lhs <= rhs + tol * rhs.abs().max(1.0),
            Relation::Gt => lhs > rhs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: Suite,
    pub check: String,
    /// The identity or bound being checked.
    pub anchor: String,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl ReportRecord {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Counts {
    pub expression: usize,
    pub reiteration: usize,
    pub duality: usize,
    pub product: usize,
    pub two_point: usize,
    pub uniform_trials: usize,
    pub interpolation: usize,
    pub calculus: usize,
    pub isomorphism: usize,
    pub graph: usize,
    pub kt: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Counts {
            expression: 200,
            reiteration: 1000,
            duality: 1000,
            product: 200,
            two_point: 50,
            uniform_trials: 500,
            interpolation: 500,
            calculus: 500,
            isomorphism: 500,
            graph: 200,
            kt: 100,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Norm identities that hold exactly in the spectral model.
    pub identity: f64,
    pub two_point: f64,
    pub counterexample: f64,
    /// Slack over `1` for the observed uniform interpolation constant.
    pub uniform_bound: f64,
    /// Slack over `1` for the quasiconcavity constant of powers.
    pub quasiconcavity: f64,
    /// Half-width of the band around `1` for `φ(λt)/φ(t)`.
    pub karamata_band: f64,
    pub kt: f64,
    pub partition: f64,
    pub refinement: f64,
    pub graph: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-12,
            two_point: 1e-12,
            counterexample: 1e-9,
            uniform_bound: 1e-6,
            quasiconcavity: 1e-9,
            karamata_band: 0.05,
            kt: 1e-8,
            partition: 1e-12,
            refinement: 1e-2,
            graph: 1e-12,
        }
    }
}

impl Tolerances {
    fn values(&self) -> [f64; 10] {
        [
            self.identity,
            self.two_point,
            self.counterexample,
            self.uniform_bound,
            self.quasiconcavity,
            self.karamata_band,
            self.kt,
            self.partition,
            self.refinement,
            self.graph,
        ]
    }

    pub fn scaled(&self, k: f64) -> Self {
        Tolerances {
            identity: self.identity * k,
            two_point: self.two_point * k,
            counterexample: self.counterexample * k,
            uniform_bound: self.uniform_bound * k,
            quasiconcavity: self.quasiconcavity * k,
            karamata_band: self.karamata_band * k,
            kt: self.kt * k,
            partition: self.partition * k,
            refinement: self.refinement * k,
            graph: self.graph * k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub counts: Counts,
    pub tolerances: Tolerances,
    pub atlas: AtlasConfig,
    /// Attach per-record wall times; reports are then not byte-reproducible.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            suite: Suite::All,
            seed: 0,
            counts: Counts::default(),
            tolerances: Tolerances::default(),
            atlas: AtlasConfig::default(),
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self
            .tolerances
            .values()
            .iter()
            .any(|t| !(*t > 0.0 && t.is_finite()))
        {
            return Err(Error::InvalidConfig(
                "tolerances must be positive and finite".into(),
            ));
        }
        crate::charts::ChartAtlas::new(self.atlas)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn of(records: &[ReportRecord]) -> Self {
        let passed = records.iter().filter(|r| r.passed()).count();
        Summary {
            passed,
            failed: records.len() - passed,
        }
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} records: {} passed, {} failed",
            self.passed + self.failed,
            self.passed,
            self.failed
        )
    }
}

/// Runs the selected suites on the current rayon pool.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<ReportRecord>> {
    cfg.validate()?;
    let mut out = Vec::new();
    for suite in cfg.suite.expand() {
        let ctx = Ctx { cfg, suite };
        match suite {
            Suite::Param => suites::param(&ctx, &mut out),
            Suite::Couple => suites::couple(&ctx, &mut out),
            Suite::Hormander => suites::hormander(&ctx, &mut out),
            Suite::Elliptic => suites::elliptic(&ctx, &mut out),
            Suite::Charts => suites::charts(&ctx, &mut out),
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(out)
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    suite: Suite,
}

/// Static description of a check.
struct Check {
    id: u64,
    name: &'static str,
    anchor: &'static str,
    relation: Relation,
    tolerance: f64,
}

/// One evaluated instance.
struct Row {
    instance: String,
    lhs: f64,
    rhs: f64,
}

impl Row {
    fn new(instance: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Row {
            instance: instance.into(),
            lhs,
            rhs,
        }
    }
}

impl Ctx<'_> {
    fn record(
        &self,
        check: &Check,
        label: String,
        row: Result<Row>,
        ms: Option<f64>,
    ) -> ReportRecord {
        let (instance, lhs, rhs, error) = match row {
            Ok(r) => (r.instance, r.lhs, r.rhs, None),
            Err(e) => (label, f64::NAN, f64::NAN, Some(e.to_string())),
        };
        let ok = error.is_none() && check.relation.holds(lhs, rhs, check.tolerance);
        ReportRecord {
            suite: self.suite,
            check: check.name.to_string(),
            anchor: check.anchor.to_string(),
            instance,
            lhs,
            rhs,
            tolerance: check.tolerance,
            relation: check.relation,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            error,
            wall_time_ms: ms,
        }
    }

    fn timed<T>(&self, f: impl FnOnce() -> T) -> (T, Option<f64>) {
        let start = Instant::now();
        let v = f();
        let ms = self
            .cfg
            .timings
            .then(|| start.elapsed().as_secs_f64() * 1e3);
        (v, ms)
    }

    /// `count` seeded instances; instance `i` draws from stream `(id << 32) | i`.
    fn random<F>(&self, check: Check, count: usize, out: &mut Vec<ReportRecord>, f: F)
    where
        F: Fn(&mut ChaCha8Rng) -> Result<Row> + Sync,
    {
        let seed = self.cfg.seed;
        let recs: Vec<ReportRecord> = (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = instance_rng(seed, (check.id << 32) | i as u64);
                let (row, ms) = self.timed(|| f(&mut rng));
                self.record(&check, format!("index={i}"), row.map(|r| prefix(i, r)), ms)
            })
            .collect();
        out.extend(recs);
    }

    /// Deterministic instances, one per item.
    fn fixed<T, F>(&self, check: Check, items: &[T], out: &mut Vec<ReportRecord>, f: F)
    where
        T: Sync,
        F: Fn(&T) -> Result<Row> + Sync,
    {
        let recs: Vec<ReportRecord> = items
            .par_iter()
            .enumerate()
            .map(|(i, item)| {
                let (row, ms) = self.timed(|| f(item));
                self.record(&check, format!("item={i}"), row, ms)
            })
            .collect();
        out.extend(recs);
    }
}

fn prefix(i: usize, mut r: Row) -> Row {
    r.instance = if r.instance.is_empty() {
        format!("index={i}")
    } else {
        format!("index={i} {}", r.instance)
    };
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Relation::Eq.holds(1.0, 1.0 + 1e-13, 1e-12));
        assert!(!Relation::Eq.holds(1.0, 1.0 + 1e-11, 1e-12));
        assert!(Relation::Eq.holds(1e-20, 2e-20, 1e-12));
        assert!(Relation::AbsEq.holds(1.04, 1.0, 0.05));
        assert!(!Relation::AbsEq.holds(0.94, 1.0, 0.05));
        assert!(Relation::Le.holds(1.0 + 1e-7, 1.0, 1e-6));
        assert!(!Relation::Le.holds(2e-8, 0.0, 1e-8));
        assert!(Relation::Gt.holds(1.06, 1.05, 0.0));
        assert!(!Relation::Gt.holds(1.05, 1.05, 0.0));
        assert!(!Relation::Eq.holds(f64::NAN, 1.0, 1.0));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("torus".parse::<Suite>().is_err());
    }

    #[test]
    fn tolerances_must_be_positive() {
        let mut cfg = SuiteConfig::default();
        cfg.tolerances.kt = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
    }

    fn small() -> SuiteConfig {
        SuiteConfig {
            counts: Counts {
                expression: 5,
                reiteration: 5,
                duality: 5,
                product: 5,
                two_point: 5,
                uniform_trials: 5,
                interpolation: 5,
                calculus: 5,
                isomorphism: 5,
                graph: 5,
                kt: 2,
            },
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let cfg = small();
        let a = run_suite(&cfg).unwrap();
        assert!(
            a.iter().all(|r| r.passed()),
            "{:?}",
            a.iter().find(|r| !r.passed())
        );
        let b = run_suite(&cfg).unwrap();
        let enc = |v: &[ReportRecord]| serde_json::to_string(v).unwrap();
        assert_eq!(enc(&a), enc(&b));
        for s in Suite::ALL {
            assert!(a.iter().any(|r| r.suite == s));
        }
    }

    #[test]
    fn failing_instance_fails_record() {
        let cfg = small();
        let ctx = Ctx {
            cfg: &cfg,
            suite: Suite::Param,
        };
        let check = Check {
            id: 0,
            name: "demo",
            anchor: "demo",
            relation: Relation::Eq,
            tolerance: 1e-12,
        };
        let mut out = Vec::new();
        ctx.fixed(check, &[0u8], &mut out, |_| Err(Error::EmptyGrid));
        assert_eq!(out[0].verdict, Verdict::Fail);
        assert!(out[0].error.is_some());
    }
}
