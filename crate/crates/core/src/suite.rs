//! Oracle-checked case suites and the self-test harness.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::oracle::{gw_classical, gw_divisor, p1_gw, P1Class};
use crate::par::par_map;
use crate::perm::Permutation;
use crate::pipeline::{decide, DeciderConfig, Decision, Verdict};
use crate::woodward::GwInstance;

/// Source of the expected value of an oracle case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleSource {
    StructConst,
    GwDivisor,
    P1Gw,
}

/// Ground truth for the suites. Tests may substitute a faulty one.
pub trait Oracle: Sync {
    fn classical(&self, u: &Permutation, v: &Permutation, w: &Permutation) -> i64;
    fn divisor(&self, u: &Permutation, r: usize, w: &Permutation, d: &[u32]) -> i64;
    fn p1(&self, a: P1Class, b: P1Class, c: P1Class, d: u32) -> i64;
}

/// The combinatorial oracles of [`crate::oracle`].
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardOracle;

impl Oracle for StandardOracle {
    fn classical(&self, u: &Permutation, v: &Permutation, w: &Permutation) -> i64 {
        gw_classical(u, v, w)
    }
    fn divisor(&self, u: &Permutation, r: usize, w: &Permutation, d: &[u32]) -> i64 {
        gw_divisor(u, r, w, d)
    }
    fn p1(&self, a: P1Class, b: P1Class, c: P1Class, d: u32) -> i64 {
        p1_gw(a, b, c, d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub instance: GwInstance,
    pub source: OracleSource,
    pub oracle_value: i64,
}

impl Case {
    pub fn expected(&self) -> Decision {
        if self.oracle_value > 0 {
            Decision::Nonvanishing
        } else {
            Decision::Vanishing
        }
    }
}

fn perm_label(p: &Permutation) -> String {
    p.entries().iter().map(|x| x.to_string()).collect()
}

fn lengths(ps: &[&Permutation]) -> usize {
    ps.iter().map(|p| p.length()).sum()
}

/// All `(u, v, w)` in `S_n^3` with lengths summing to `C(n,2)`, degree zero.
pub fn classical_cases(n: usize, oracle: &dyn Oracle) -> Vec<Case> {
    let all = Permutation::all(n);
    let dim = n * (n - 1) / 2;
    let mut out = Vec::new();
    for u in &all {
        for v in &all {
            for w in &all {
                if lengths(&[u, v, w]) != dim {
                    continue;
                }
                out.push(Case {
                    name: format!("S{n}/d0/{}-{}-{}", perm_label(u), perm_label(v), perm_label(w)),
                    instance: GwInstance::complete(vec![0; n - 1], u.clone(), v.clone(), w.clone())
                        .expect("valid"),
                    source: OracleSource::StructConst,
                    oracle_value: oracle.classical(u, v, w),
                });
            }
        }
    }
    out
}

/// Every `(u, s_r, w)` on `F(n)` with a unit degree vector that passes the
/// dimension condition.
pub fn divisor_cases(n: usize, oracle: &dyn Oracle) -> Vec<Case> {
    let all = Permutation::all(n);
    let dim = n * (n - 1) / 2;
    let mut out = Vec::new();
    for u in &all {
        for w in &all {
            for r in 1..n {
                let sr = Permutation::simple_transposition(n, r);
                if lengths(&[u, &sr, w]) != dim + 2 {
                    continue;
                }
                for k in 0..n - 1 {
                    let mut d = vec![0; n - 1];
                    d[k] = 1;
                    let dl: String = d.iter().map(|x| x.to_string()).collect();
                    out.push(Case {
                        name: format!("S{n}/q{dl}/{}-s{r}-{}", perm_label(u), perm_label(w)),
                        instance: GwInstance::complete(d.clone(), u.clone(), sr.clone(), w.clone()).expect("valid"),
                        source: OracleSource::GwDivisor,
                        oracle_value: oracle.divisor(u, r, w, &d),
                    });
                }
            }
        }
    }
    out
}

/// Every class triple on `P^1` in degrees `0..=2`.
pub fn p1_cases(oracle: &dyn Oracle) -> Vec<Case> {
    let classes = [P1Class::One, P1Class::Pt];
    let perm = |c: P1Class| match c {
        P1Class::One => Permutation::identity(2),
        P1Class::Pt => Permutation::longest(2),
    };
    let label = |c: P1Class| match c {
        P1Class::One => "1",
        P1Class::Pt => "pt",
    };
    let mut out = Vec::new();
    for d in 0..=2 {
        for a in classes {
            for b in classes {
                for c in classes {
                    out.push(Case {
                        name: format!("P1/d{d}/{}-{}-{}", label(a), label(b), label(c)),
                        instance: GwInstance::complete(vec![d], perm(a), perm(b), perm(c)).expect("valid"),
                        source: OracleSource::P1Gw,
                        oracle_value: oracle.p1(a, b, c, d),
                    });
                }
            }
        }
    }
    out
}

/// Every `stride`-th element of `cases`, starting from the first.
pub fn sample(cases: Vec<Case>, stride: usize) -> Vec<Case> {
    cases.into_iter().step_by(stride.max(1)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub name: String,
    pub instance: GwInstance,
    pub source: OracleSource,
    pub oracle_value: i64,
    pub expected: Decision,
    pub got: Option<Decision>,
    pub status: CaseStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub total: usize,
    pub cases: Vec<CaseRecord>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn merge(suite: &str, seed: u64, parts: Vec<RunReport>) -> RunReport {
        let cases: Vec<CaseRecord> = parts.into_iter().flat_map(|r| r.cases).collect();
        RunReport::from_cases(suite, seed, cases)
    }

    fn from_cases(suite: &str, seed: u64, cases: Vec<CaseRecord>) -> RunReport {
        let count = |s: CaseStatus| cases.iter().filter(|c| c.status == s).count();
        RunReport {
            suite: suite.to_string(),
            seed,
            pass: count(CaseStatus::Pass),
            fail: count(CaseStatus::Fail),
            skip: count(CaseStatus::Skip),
            total: cases.len(),
            cases,
        }
    }
}

/// Decides one case and compares with its oracle value.
pub fn run_case(case: &Case, cfg: &DeciderConfig) -> (CaseRecord, Option<Verdict>) {
    let start = Instant::now();
    let result = decide(&case.instance, cfg);
    let timing_ms = cfg.record_timing.then(|| start.elapsed().as_millis() as u64);
    let expected = case.expected();
    let (got, status, detail, verdict) = match result {
        Ok(v) => {
            let status = if v.decision == expected {
                CaseStatus::Pass
            } else if v.decision == Decision::Inconclusive && v.note.contains("exact-mode limit") {
                CaseStatus::Skip
            } else {
                CaseStatus::Fail
            };
            (Some(v.decision), status, v.note.clone(), Some(v))
        }
        Err(e) => (None, CaseStatus::Fail, e.to_string(), None),
    };
    let record = CaseRecord {
        name: case.name.clone(),
        instance: case.instance.clone(),
        source: case.source,
        oracle_value: case.oracle_value,
        expected,
        got,
        status,
        detail,
        timing_ms,
    };
    (record, verdict)
}

/// Runs `cases` in input order; the report does not depend on scheduling.
pub fn run_cases(suite: &str, cases: &[Case], cfg: &DeciderConfig) -> RunReport {
    run_cases_with_verdicts(suite, cases, cfg).0
}

/// [`run_cases`], also returning the verdict of each case.
pub fn run_cases_with_verdicts(suite: &str, cases: &[Case], cfg: &DeciderConfig) -> (RunReport, Vec<Option<Verdict>>) {
    let (records, verdicts) = par_map(cfg.parallel, cases, |c| run_case(c, cfg)).into_iter().unzip();
    (RunReport::from_cases(suite, cfg.seed, records), verdicts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

/// Quick: the `S_3` sweeps and `P^1`. Full adds `S_4` samples and exact
/// rational spot checks.
pub fn selftest(level: Level, cfg: &DeciderConfig, oracle: &dyn Oracle) -> RunReport {
    let mut parts = vec![
        run_cases("p1", &p1_cases(oracle), cfg),
        run_cases("s3-classical", &classical_cases(3, oracle), cfg),
        run_cases("s3-divisor", &divisor_cases(3, oracle), cfg),
    ];
    if level == Level::Full {
        parts.push(run_cases("s4-classical-sample", &sample(classical_cases(4, oracle), 17), cfg));
        let exact = DeciderConfig { exact: true, ..cfg.clone() };
        parts.push(run_cases("s3-classical-exact", &sample(classical_cases(3, oracle), 5), &exact));
    }
    let name = match level {
        Level::Quick => "selftest-quick",
        Level::Full => "selftest-full",
    };
    RunReport::merge(name, cfg.seed, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_counts() {
        let o = StandardOracle;
        assert_eq!(classical_cases(3, &o).len(), 35);
        assert_eq!(divisor_cases(3, &o).len(), 32);
        assert_eq!(p1_cases(&o).len(), 24);
        let nonzero = p1_cases(&o).iter().filter(|c| c.oracle_value > 0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn worked_divisor_case_is_listed() {
        let cases = divisor_cases(3, &StandardOracle);
        let c = cases.iter().find(|c| c.name == "S3/q10/312-s1-312").unwrap();
        assert_eq!(c.oracle_value, 1);
    }

    #[test]
    fn instances_round_trip() {
        let o = StandardOracle;
        for c in classical_cases(3, &o).iter().chain(&divisor_cases(3, &o)).chain(&p1_cases(&o)) {
            assert_eq!(GwInstance::from_json(&c.instance.to_json()).unwrap(), c.instance);
        }
    }

    struct Inverted;

    impl Oracle for Inverted {
        fn classical(&self, u: &Permutation, v: &Permutation, w: &Permutation) -> i64 {
            1 - gw_classical(u, v, w).min(1)
        }
        fn divisor(&self, u: &Permutation, r: usize, w: &Permutation, d: &[u32]) -> i64 {
            gw_divisor(u, r, w, d)
        }
        fn p1(&self, a: P1Class, b: P1Class, c: P1Class, d: u32) -> i64 {
            p1_gw(a, b, c, d)
        }
    }

    #[test]
    fn faulty_oracle_is_caught() {
        let cases = sample(classical_cases(3, &Inverted), 7);
        let report = run_cases("faulty", &cases, &DeciderConfig::default());
        assert_eq!(report.fail, report.total);
        assert_eq!(report.pass + report.fail + report.skip, report.total);
    }
}
