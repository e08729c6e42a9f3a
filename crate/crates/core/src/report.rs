//! Run configuration and machine-readable reports.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA: &str = "reported-schema/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub m: usize,
    pub precision: u32,
    pub denom_depth: u32,
    pub degree_cap: u64,
    pub seed: u64,
    /// Overall wall-clock budget; `None` leaves only the per-check limits.
    pub budget_ms: Option<u64>,
    pub format: Format,
    /// Directory overriding the embedded figure fixtures.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixtures_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            p: 2,
            m: 1,
            precision: 4,
            denom_depth: 4,
            degree_cap: 8,
            seed: 0,
            budget_ms: None,
            format: Format::Json,
            fixtures_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !crate::arith::is_prime(self.p) {
            return Err(Error::InvalidParameter(format!("p = {} is not prime", self.p)));
        }
        if self.m == 0 || self.precision == 0 || self.degree_cap == 0 {
            return Err(Error::InvalidParameter("m, precision and degree cap must be positive".into()));
        }
        if self.budget_ms == Some(0) {
            return Err(Error::InvalidParameter("budget must be positive".into()));
        }
        Ok(())
    }

    /// Independent generator for a task: the seed's ChaCha stream numbered `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub status: Status,
    pub samples: u64,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub limit_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            schema: SCHEMA.into(),
            command: command.into(),
            config: config.clone(),
            checks: vec![],
            summary: Summary::default(),
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, c: CheckResult) {
        match c.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Inconclusive => self.summary.inconclusive += 1,
        }
        self.checks.push(c);
    }

    /// 0 all pass, 1 any fail, 3 inconclusive without failures.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    /// Copy with every timing field removed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.elapsed_ms = None;
        for c in &mut r.checks {
            c.elapsed_ms = None;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# {}\n\nseed {}, schema {}\n\n", self.command, self.config.seed, self.schema);
        out.push_str("| # | check | status | samples | detail |\n|---|---|---|---|---|\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Inconclusive => "inconclusive",
            };
            out.push_str(&format!("| {} | {} | {status} | {} | {} |\n", c.id, c.name, c.samples, c.detail.replace('|', "\\|")));
        }
        out.push_str(&format!(
            "\n{} pass, {} fail, {} inconclusive\n",
            self.summary.pass, self.summary.fail, self.summary.inconclusive
        ));
        out
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Markdown => self.to_markdown(),
        }
    }
}

/// Deadline shared by the sampling loops of one check.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    start: Instant,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn new(limit: Option<Duration>) -> Self {
        let start = Instant::now();
        Self { start, deadline: limit.map(|d| start + d) }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn exhausted(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
