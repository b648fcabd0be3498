use std::fmt;

use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::{gen_with, rng_from_seed, GenConfig};
use crate::bitree::{build_descendant, build_father_subdivided, build_symmetric, Bitree, CoverageMode};
use crate::covering_dp::{audit_dp, evaluate_subtree, oracle_enumerate, solve_indirect_with, ENUMERATION_CAP};
use crate::error::Result;
use crate::hardness::{
    collide_one, decide_wn_membership, decide_wn_via_medianoid, naive_wn_check, random_interleaved, Membership, WnTuple,
};
use crate::instance::{normalize_degree, serialize, Instance};
use crate::medianoid::{naive_medianoid, solve_medianoid, MedianoidInstance, MEDIANOID_ORACLE_CAP};
use crate::penalty_engine::{compute_all_penalties_with, naive_penalties, EngineOptions, DEFAULT_ORACLE_CAP};

const MODES: [CoverageMode; 2] = [CoverageMode::Weak, CoverageMode::Strict];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Engine,
    Indirect,
    Medianoid,
    Hardness,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Engine, Check::Indirect, Check::Medianoid, Check::Hardness];

    pub fn name(self) -> &'static str {
        match self {
            Check::Engine => "engine",
            Check::Indirect => "indirect",
            Check::Medianoid => "medianoid",
            Check::Hardness => "hardness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub trial: usize,
    pub seed: u64,
    pub check: Check,
    pub status: Status,
}

/// A mismatch with everything needed to replay it: the trial seed and the
/// inputs in text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub check: Check,
    pub detail: String,
    pub reproducer: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub trials: usize,
    pub outcomes: Vec<CheckOutcome>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn count(&self, check: Check, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.check == check && o.status == status).count()
    }

    /// `trial,seed,check,status`, one line per outcome.
    pub fn csv_lines(&self) -> Vec<String> {
        self.outcomes
            .iter()
            .map(|o| format!("{},{},{},{}", o.trial, o.seed, o.check.name(), o.status.name()))
            .collect()
    }

    fn sort(&mut self) {
        self.outcomes.sort_by_key(|o| (o.seed, o.trial, o.check));
        self.failures.sort_by_key(|f| (f.seed, f.trial, f.check));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} trials, {} failures", self.trials, self.failures.len())?;
        if self.trials > 0 {
            for c in Check::ALL {
                writeln!(
                    f,
                    "  {:<10} pass {:>5}  fail {:>5}  skip {:>5}",
                    c.name(),
                    self.count(c, Status::Pass),
                    self.count(c, Status::Fail),
                    self.count(c, Status::Skip)
                )?;
            }
        }
        for fail in &self.failures {
            writeln!(f, "FAIL trial {} seed {} check {}: {}", fail.trial, fail.seed, fail.check.name(), fail.detail)?;
            for line in fail.reproducer.lines() {
                writeln!(f, "  | {line}")?;
            }
        }
        for line in self.csv_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Seed of trial `i`: consecutive seeds from the configured base.
fn trial_seed(base: u64, trial: usize) -> u64 {
    base.wrapping_add(trial as u64)
}

/// Runs every check on `trials` independent seeds. With `inject_fault` the
/// engine side uses the wrong tie rule, which the harness must catch.
pub fn run_equivalence_suite(cfg: &GenConfig, trials: usize, inject_fault: bool) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report { trials, ..Report::default() };
    for trial in 0..trials {
        let seed = trial_seed(cfg.seed, trial);
        for check in Check::ALL {
            let (status, failure) = match run_one(cfg, seed, check, inject_fault)? {
                Outcome::Skipped => (Status::Skip, None),
                Outcome::Ran(Ok(())) => (Status::Pass, None),
                Outcome::Ran(Err((detail, reproducer))) => {
                    (Status::Fail, Some(Failure { trial, seed, check, detail, reproducer }))
                }
            };
            report.outcomes.push(CheckOutcome { trial, seed, check, status });
            report.failures.extend(failure);
        }
    }
    report.sort();
    Ok(report)
}

/// Replays one check for one seed; `Ok(None)` means the check was skipped.
pub fn rerun(cfg: &GenConfig, seed: u64, check: Check, inject_fault: bool) -> Result<Option<Result<(), String>>> {
    Ok(match run_one(cfg, seed, check, inject_fault)? {
        Outcome::Skipped => None,
        Outcome::Ran(r) => Some(r.map_err(|(detail, _)| detail)),
    })
}

enum Outcome {
    Skipped,
    Ran(std::result::Result<(), (String, String)>),
}

fn run_one(cfg: &GenConfig, seed: u64, check: Check, fault: bool) -> Result<Outcome> {
    let mut rng = rng_from_seed(seed);
    let t = gen_with(cfg, &mut rng)?;
    // auxiliary draws (X, tuples) use a separate stream so the instance
    // does not depend on which checks run
    rng.set_stream(1);
    let text = || format!("seed {seed}\n{}", serialize(&t));
    Ok(match check {
        Check::Engine if t.n() > DEFAULT_ORACLE_CAP => Outcome::Skipped,
        Check::Engine => Outcome::Ran(check_engine(&t, fault).map_err(|d| (d, text()))),
        Check::Indirect if t.n() > ENUMERATION_CAP => Outcome::Skipped,
        Check::Indirect => Outcome::Ran(check_indirect(&t).map_err(|d| (d, text()))),
        Check::Medianoid if t.n() > MEDIANOID_ORACLE_CAP => Outcome::Skipped,
        Check::Medianoid => {
            let k = rng.gen_range(1..=t.n().min(5));
            let x = sample(&mut rng, t.n(), k).into_vec();
            let mi = MedianoidInstance::new(t.clone(), x.clone())?;
            Outcome::Ran(check_medianoid(&mi).map_err(|d| (d, format!("{}x {}\n", text(), one_based(&x)))))
        }
        Check::Hardness => {
            let n = rng.gen_range(1..=6);
            let member = random_interleaved(n, &mut rng);
            let collided = collide_one(&member, &mut rng);
            Outcome::Ran(check_hardness(&member, &collided).map_err(|d| {
                let show = |w: &WnTuple| format!("xs {:?} ys {:?}", w.xs, w.ys);
                (d, format!("seed {seed}\n{}\n{}\n", show(&member), show(&collided)))
            }))
        }
    })
}

fn one_based(ids: &[usize]) -> String {
    ids.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// The three constructions over the normalized tree, named.
fn constructions(t: &Instance) -> [(&'static str, Bitree); 3] {
    let nt = normalize_degree(t, 0);
    [
        ("symmetric", build_symmetric(&nt)),
        ("descendant", build_descendant(&nt)),
        ("father", build_father_subdivided(&nt).0),
    ]
}

/// Engine against the per-source traversal, all constructions, both modes.
pub fn check_engine(t: &Instance, flip_ties: bool) -> std::result::Result<(), String> {
    let opts = EngineOptions { flip_ties, ..EngineOptions::default() };
    for (name, b) in constructions(t) {
        for mode in MODES {
            let fast = compute_all_penalties_with(&b, mode, opts).penalties;
            let slow = naive_penalties(&b, mode).map_err(|e| e.to_string())?;
            if let Some(x) = (0..b.n()).find(|&x| fast[x] != slow[x]) {
                return Err(format!("{name}/{mode:?}: node {x} engine {} oracle {}", fast[x], slow[x]));
            }
        }
    }
    Ok(())
}

/// DP against enumeration, witness re-evaluation and the recurrence audit.
pub fn check_indirect(t: &Instance) -> std::result::Result<(), String> {
    for mode in MODES {
        let run = solve_indirect_with(t, mode, EngineOptions::default());
        let sol = &run.solution;
        let best = oracle_enumerate(t, mode).map_err(|e| e.to_string())?;
        if sol.total != best.total {
            return Err(format!("{mode:?}: dp total {} enumeration {}", sol.total, best.total));
        }
        let (setup, penalty) = evaluate_subtree(t, &sol.nodes, mode);
        if (setup, penalty) != (sol.setup, sol.penalty) {
            return Err(format!(
                "{mode:?}: witness {:?} reports {}+{} but evaluates to {setup}+{penalty}",
                sol.nodes, sol.setup, sol.penalty
            ));
        }
        audit_dp(t, &run, mode).map_err(|e| format!("{mode:?}: {e}"))?;
    }
    Ok(())
}

pub fn check_medianoid(mi: &MedianoidInstance) -> std::result::Result<(), String> {
    let fast = solve_medianoid(mi).map_err(|e| e.to_string())?;
    let slow = naive_medianoid(mi).map_err(|e| e.to_string())?;
    if (fast.node, fast.captured) != (slow.node, slow.captured) {
        return Err(format!("fast ({}, {}) naive ({}, {})", fast.node, fast.captured, slow.node, slow.captured));
    }
    if fast.capture != slow.capture {
        return Err("capture vectors differ".into());
    }
    Ok(())
}

/// The coverage decision, the definition and the medianoid decision agree,
/// and the minimum penalty is `n` for the member and `n - 1` after the
/// collision.
pub fn check_hardness(member: &WnTuple, collided: &WnTuple) -> std::result::Result<(), String> {
    let n = member.n() as u64;
    for (t, want, min) in [(member, Membership::Member, n), (collided, Membership::NotMember, n - 1)] {
        let d = decide_wn_membership(t).map_err(|e| e.to_string())?;
        let m = decide_wn_via_medianoid(t).map_err(|e| e.to_string())?;
        let naive = naive_wn_check(t);
        if d.membership != want || m != want || naive != want {
            return Err(format!(
                "xs {:?} ys {:?}: coverage {:?} medianoid {m:?} definition {naive:?}",
                t.xs, t.ys, d.membership
            ));
        }
        if d.min_penalty != Some(min) {
            return Err(format!("xs {:?} ys {:?}: min penalty {:?}, expected {min}", t.xs, t.ys, d.min_penalty));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    #[test]
    fn default_suite_is_clean() {
        let r = run_equivalence_suite(&GenConfig::default(), 60, false).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.outcomes.len(), 240);
    }

    #[test]
    fn zero_trials() {
        let r = run_equivalence_suite(&GenConfig::default(), 0, false).unwrap();
        assert!(r.outcomes.is_empty() && r.passed());
        assert!(r.csv_lines().is_empty());
    }

    #[test]
    fn injected_fault_is_caught_and_reproducible() {
        let cfg = GenConfig { seed: 11, ..GenConfig::default() };
        let r = run_equivalence_suite(&cfg, 100, true).unwrap();
        assert!(!r.passed());
        let f = &r.failures[0];
        assert_eq!(f.check, Check::Engine);
        // replay from the seed and from the printed instance
        assert!(matches!(rerun(&cfg, f.seed, f.check, true).unwrap(), Some(Err(_))));
        let text: String = f.reproducer.lines().skip(1).map(|l| format!("{l}\n")).collect();
        let t = parse_instance(&text).unwrap();
        assert!(check_engine(&t, true).is_err());
        assert!(check_engine(&t, false).is_ok());
        assert!(r.failures.windows(2).all(|w| w[0].seed <= w[1].seed));
    }

    #[test]
    fn csv_shape() {
        let r = run_equivalence_suite(&GenConfig { seed: 3, ..GenConfig::default() }, 2, false).unwrap();
        let lines = r.csv_lines();
        assert_eq!(lines[0], "0,3,engine,pass");
        assert_eq!(lines.len(), 8);
    }
}
