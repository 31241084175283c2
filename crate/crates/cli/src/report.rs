use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exit::{CliResult, Failure, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Williamson,
    Maxmin,
    Wielandt,
    LidskiiAdd,
    LidskiiMult,
    PhiExtremal,
    DetProduct,
    Construction,
    Majorization,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Williamson,
        Suite::Maxmin,
        Suite::Wielandt,
        Suite::LidskiiAdd,
        Suite::LidskiiMult,
        Suite::PhiExtremal,
        Suite::DetProduct,
        Suite::Construction,
        Suite::Majorization,
    ];

    /// Stable identifier mixed into per-trial random streams. Never reorder.
    pub fn id(self) -> u64 {
        match self {
            Suite::Williamson => 1,
            Suite::Maxmin => 2,
            Suite::Wielandt => 3,
            Suite::LidskiiAdd => 4,
            Suite::LidskiiMult => 5,
            Suite::PhiExtremal => 6,
            Suite::DetProduct => 7,
            Suite::Construction => 8,
            Suite::Majorization => 9,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Williamson => "williamson",
            Suite::Maxmin => "maxmin",
            Suite::Wielandt => "wielandt",
            Suite::LidskiiAdd => "lidskii-add",
            Suite::LidskiiMult => "lidskii-mult",
            Suite::PhiExtremal => "phi-extremal",
            Suite::DetProduct => "det-product",
            Suite::Construction => "construction",
            Suite::Majorization => "majorization",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single suite or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    One(Suite),
}

impl Selection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            Selection::All => Suite::ALL.to_vec(),
            Selection::One(s) => vec![s],
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(Selection::One)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite `{s}`; expected all or one of {}", names.join(", "))
            })
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::All => f.write_str("all"),
            Selection::One(s) => s.fmt(f),
        }
    }
}

impl Serialize for Selection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub suite: Selection,
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub master_seed: u64,
    pub tol: f64,
    /// Canonical-chain samples per extremal certificate.
    pub samples: usize,
    /// Random chains (or subspaces) per extremal certificate.
    pub chains: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<usize>,
    #[serde(skip)]
    pub report_path: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Selection::All,
            trials: 50,
            n_min: 1,
            n_max: 6,
            master_seed: 0,
            tol: 1e-9,
            samples: 200,
            chains: 100,
            replay: None,
            report_path: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(Failure::new(Status::Validation, m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return bad(format!("need 1 <= nmin <= nmax, got {} and {}", self.n_min, self.n_max));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.samples == 0 || self.chains == 0 {
            return bad("samples and chains must be at least 1".into());
        }
        Ok(())
    }

    /// The command line that reruns one trial of this configuration.
    pub fn replay_command(&self, suite: Suite, trial: usize) -> String {
        format!(
            "sympspec verify --suite {suite} --seed {} --nmin {} --nmax {} --tol {:e} --samples {} --chains {} --replay {trial}",
            self.master_seed, self.n_min, self.n_max, self.tol, self.samples, self.chains
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub suite: Suite,
    pub trial: usize,
    pub n: usize,
    pub passed: bool,
    /// Smallest slack seen in the trial; negative means violated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub detail: Value,
    #[serde(skip)]
    pub status: Status,
    #[serde(skip)]
    pub witness: Value,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

/// Everything needed to rerun and inspect one failed trial.
#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub suite: Suite,
    pub trial: usize,
    pub n: usize,
    pub replay: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub witness: Value,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Tally {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_trial: Option<usize>,
}

impl Tally {
    fn add(&mut self, r: &TrialRecord) {
        self.trials += 1;
        if r.passed {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        if r.error.is_some() {
            self.errors += 1;
        }
        if let Some(s) = r.slack {
            if self.worst_slack.is_none_or(|w| s < w) {
                self.worst_slack = Some(s);
                self.worst_trial = Some(r.trial);
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Aggregate {
    pub pass: bool,
    #[serde(flatten)]
    pub total: Tally,
    pub suites: BTreeMap<Suite, Tally>,
}

/// Wall-clock data, kept apart so that reports compare equal across runs
/// once this field is dropped.
#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub started_unix_ms: u128,
    pub elapsed_ms: f64,
    pub threads: usize,
    /// Summed per-trial time.
    pub suites_ms: BTreeMap<Suite, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: SuiteConfig,
    pub records: Vec<TrialRecord>,
    pub aggregate: Aggregate,
    pub failures: Vec<FailureRecord>,
    pub timing: Timing,
}

impl SuiteReport {
    pub fn new(config: SuiteConfig, mut records: Vec<TrialRecord>, timing: Timing) -> Self {
        records.sort_by_key(|r| (r.suite, r.trial));
        let mut total = Tally::default();
        let mut suites: BTreeMap<Suite, Tally> = BTreeMap::new();
        for r in &records {
            total.add(r);
            suites.entry(r.suite).or_default().add(r);
        }
        let failures = records
            .iter()
            .filter(|r| !r.passed)
            .map(|r| FailureRecord {
                suite: r.suite,
                trial: r.trial,
                n: r.n,
                replay: config.replay_command(r.suite, r.trial),
                error: r.error.clone(),
                witness: r.witness.clone(),
            })
            .collect();
        Self {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config,
            aggregate: Aggregate {
                pass: total.failed == 0,
                total,
                suites,
            },
            records,
            failures,
            timing,
        }
    }

    /// 0 when every trial passed; a violation outranks trial errors.
    pub fn status(&self) -> Status {
        self.records
            .iter()
            .filter(|r| !r.passed)
            .fold(Status::Pass, |acc, r| acc.worst(r.status))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
