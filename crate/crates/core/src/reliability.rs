//! pass@k over repeated trials and the pass@1 -> pass@k consistency drop.
//!
//! Three readings of pass@k are supported because the literature uses more
//! than one:
//!
//! * [`PassSemantics::Window`] (default) - a task passes if any `k`
//!   consecutive trials all succeed.
//! * [`PassSemantics::Prefix`] - the first `k` trials all succeed.
//! * [`PassSemantics::Combinatorial`] - the expected value over a uniformly
//!   drawn `k`-subset of trials, `C(s, k) / C(n, k)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::AgentRuns;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassSemantics {
    #[default]
    Window,
    Prefix,
    Combinatorial,
}

impl PassSemantics {
    pub const ALL: [PassSemantics; 3] = [
        PassSemantics::Window,
        PassSemantics::Prefix,
        PassSemantics::Combinatorial,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PassSemantics::Window => "window",
            PassSemantics::Prefix => "prefix",
            PassSemantics::Combinatorial => "combinatorial",
        }
    }
}

impl fmt::Display for PassSemantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PassSemantics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        PassSemantics::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown pass@k semantics `{s}` (window|prefix|combinatorial)"))
    }
}

/// pass@k for one task's ordered success sequence.
pub fn task_pass_at_k(sequence: &[bool], k: usize, semantics: PassSemantics) -> Result<f64> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let n = sequence.len();
    if k > n {
        return Err(Error::InsufficientTrials {
            task: "-".into(),
            k,
            available: n,
        });
    }
    let hit = |b: bool| if b { 1.0 } else { 0.0 };
    Ok(match semantics {
        PassSemantics::Window => {
            let mut run = 0usize;
            let mut found = false;
            for &ok in sequence {
                run = if ok { run + 1 } else { 0 };
                if run >= k {
                    found = true;
                    break;
                }
            }
            hit(found)
        }
        PassSemantics::Prefix => hit(sequence[..k].iter().all(|&ok| ok)),
        PassSemantics::Combinatorial => {
            let s = sequence.iter().filter(|&&ok| ok).count();
            if s < k {
                0.0
            } else {
                (0..k).fold(1.0, |acc, i| acc * (s - i) as f64 / (n - i) as f64)
            }
        }
    })
}

/// Ordered success sequences per task for one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMatrix {
    pub agent_id: String,
    pub tasks: Vec<(String, Vec<bool>)>,
}

impl TrialMatrix {
    /// Build from an agent's records. With `subset`, only those tasks are
    /// included (in the subset's order); a subset task the agent never ran
    /// gets an empty sequence and fails any k check. Without it, every task
    /// the agent ran is included in first-seen order.
    pub fn from_runs(runs: &AgentRuns<'_>, subset: Option<&[String]>) -> Result<TrialMatrix> {
        let mut trials: HashMap<&str, BTreeMap<u32, bool>> = HashMap::new();
        let mut seen: Vec<&str> = Vec::new();
        for r in &runs.records {
            let entry = trials.entry(r.task_id.as_str()).or_insert_with(|| {
                seen.push(r.task_id.as_str());
                BTreeMap::new()
            });
            entry.insert(r.trial_index, r.success);
        }
        let order: Vec<&str> = match subset {
            Some(ids) => ids.iter().map(String::as_str).collect(),
            None => seen,
        };
        let mut tasks = Vec::with_capacity(order.len());
        for task in order {
            let seq = match trials.get(task) {
                Some(by_index) => {
                    let contiguous = by_index.keys().enumerate().all(|(i, &t)| t as usize == i);
                    if !contiguous {
                        return Err(Error::TrialGap {
                            agent: runs.agent_id.clone(),
                            task: task.to_string(),
                        });
                    }
                    by_index.values().copied().collect()
                }
                None => Vec::new(),
            };
            tasks.push((task.to_string(), seq));
        }
        Ok(TrialMatrix {
            agent_id: runs.agent_id.clone(),
            tasks,
        })
    }

    pub fn min_trials(&self) -> usize {
        self.tasks.iter().map(|(_, s)| s.len()).min().unwrap_or(0)
    }
}

/// Mean of per-task pass@k over the matrix.
pub fn pass_at_k(matrix: &TrialMatrix, k: usize, semantics: PassSemantics) -> Result<f64> {
    if matrix.tasks.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let mut total = 0.0;
    for (task, seq) in &matrix.tasks {
        total += task_pass_at_k(seq, k, semantics).map_err(|e| match e {
            Error::InsufficientTrials { k, available, .. } => Error::InsufficientTrials {
                task: task.clone(),
                k,
                available,
            },
            other => other,
        })?;
    }
    Ok(total / matrix.tasks.len() as f64)
}

/// Relative decline from pass@1 to pass@k.
pub fn consistency_drop(pass1: f64, passk: f64) -> Result<f64> {
    if pass1.is_nan() || pass1 <= 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok((pass1 - passk) / pass1)
}
