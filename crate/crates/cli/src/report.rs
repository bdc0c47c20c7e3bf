//! Scenario execution and the JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use indyn_core::error::Error as CoreError;
use indyn_core::par::Exec;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::scenarios::{registry, Check, Outcome, Params, Scenario};
use crate::{CliError, EXIT_CAP, EXIT_FAIL, EXIT_PASS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Pass,
    Fail,
    ResourceCap,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub citation: String,
    pub params: BTreeMap<String, String>,
    pub status: RunStatus,
    pub checks: Vec<Check>,
    pub verdicts: Vec<indyn_core::detect::PropertyVerdict>,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub outcome: Option<Outcome>,
}

/// Everything except `timings_ms` is reproducible from (flags, files, seed).
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub scenarios: Vec<ScenarioReport>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let has = |s| self.scenarios.iter().any(|r| r.status == s);
        if has(RunStatus::Fail) || has(RunStatus::Error) {
            EXIT_FAIL
        } else if has(RunStatus::ResourceCap) {
            EXIT_CAP
        } else {
            EXIT_PASS
        }
    }

    /// The report without timings, serialized; equal across identical runs.
    pub fn verdict_json(&self) -> String {
        serde_json::to_string(&self.scenarios).expect("serializable")
    }
}

/// Parameters for one scenario out of suite-wide overrides: keys the scenario
/// does not declare are skipped unless `strict`.
pub fn params_for(s: &Scenario, overrides: &BTreeMap<String, String>, strict: bool) -> Result<Params, CliError> {
    let own: BTreeMap<String, String> = overrides
        .iter()
        .filter(|(k, _)| strict || s.params.iter().any(|p| p.name == k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    Params::resolve(s.params, &own)
}

pub fn run_one(s: &Scenario, params: &Params, seed: u64, exec: Exec) -> (ScenarioReport, u128) {
    let start = Instant::now();
    let result = (s.run)(params, seed, exec);
    let ms = start.elapsed().as_millis();
    let mut rep = ScenarioReport {
        name: s.name.into(),
        citation: s.citation.into(),
        params: params.to_strings(),
        status: RunStatus::Pass,
        checks: Vec::new(),
        verdicts: Vec::new(),
        data: Value::Null,
        error: None,
        outcome: None,
    };
    match result {
        Ok(out) => {
            rep.status = if out.passed() { RunStatus::Pass } else { RunStatus::Fail };
            rep.checks = out.checks.clone();
            rep.verdicts = out.verdicts.clone();
            rep.data = out.data.clone();
            rep.outcome = Some(out);
        }
        Err(CoreError::ResourceCap(m)) => {
            rep.status = RunStatus::ResourceCap;
            rep.error = Some(m);
        }
        Err(e) => {
            rep.status = RunStatus::Error;
            rep.error = Some(e.to_string());
        }
    }
    (rep, ms)
}

/// Runs the named scenarios (all when `names` is empty) and reports them in
/// registration order, whatever `jobs` is.
pub fn run_suite(
    names: &[String],
    overrides: &BTreeMap<String, String>,
    seed: u64,
    jobs: usize,
    exec: Exec,
) -> Result<Report, CliError> {
    let mut selected: Vec<&Scenario> = Vec::new();
    for n in names {
        if !registry().iter().any(|s| s.name == n) {
            return Err(CliError::Usage(format!("unknown scenario `{n}` (see --list)")));
        }
    }
    for s in registry() {
        if names.is_empty() || names.iter().any(|n| n == s.name) {
            selected.push(s);
        }
    }
    let strict = selected.len() == 1;
    if !strict {
        if let Some(k) = overrides
            .keys()
            .find(|k| !selected.iter().any(|s| s.params.iter().any(|p| p.name == k.as_str())))
        {
            return Err(CliError::Usage(format!("no selected scenario takes parameter `{k}`")));
        }
    }
    let params = selected
        .iter()
        .map(|s| params_for(s, overrides, strict))
        .collect::<Result<Vec<_>, _>>()?;
    let work: Vec<(&Scenario, Params)> = selected.into_iter().zip(params).collect();
    let results: Vec<(ScenarioReport, u128)> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
        pool.install(|| work.par_iter().map(|(s, p)| run_one(s, p, seed, exec)).collect())
    } else {
        work.iter().map(|(s, p)| run_one(s, p, seed, exec)).collect()
    };
    let mut timings = BTreeMap::new();
    let mut scenarios = Vec::new();
    for (rep, ms) in results {
        timings.insert(rep.name.clone(), ms);
        scenarios.push(rep);
    }
    Ok(Report {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        scenarios,
        timings_ms: timings,
    })
}
