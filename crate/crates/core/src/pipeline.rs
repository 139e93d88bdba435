//! The end-to-end decider: reduce to a complete flag, apply the dimension
//! filter, enumerate degree splits, build and specialize each system, and
//! aggregate Nullstellensatz outcomes by majority vote.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    random_prime, Field, GbConfig, Monomial, OrderChoice, PolySystem, Polynomial, PrimeField, Rationals, Term,
    VarId, PRIME_RANGE,
};
use crate::error::{AlgebraError, InputError};
use crate::par::par_map;
use crate::splits::{enumerate_splits_capped, DegreeSplit, DEFAULT_SPLIT_CAP};
use crate::sysbuild::{assemble_system, factor_var, factored_blocks, BuildMode, BuildOptions, SystemBundle};
use crate::woodward::{reduce_to_complete, CompleteInstance, GwInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Vanishing,
    Nonvanishing,
    Inconclusive,
}

/// Result of one specialized system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Satisfiable,
    Unsatisfiable,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub split: usize,
    /// `None` for exact rational trials.
    pub prime: Option<u64>,
    pub seed: u64,
    pub outcome: Outcome,
    pub reductions: usize,
    /// Which test settled the outcome.
    pub via: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness_split: Option<DegreeSplit>,
    pub dhat: Option<Vec<u32>>,
    pub dimension_ok: bool,
    pub systems_built: usize,
    pub trials: Vec<TrialRecord>,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeciderConfig {
    /// Trials per split; odd.
    pub trials: usize,
    pub prime_range: (u64, u64),
    pub seed: u64,
    /// Reduction budget for a full Gröbner run.
    pub gb_budget: usize,
    /// Term-operation budget for a full Gröbner run.
    pub gb_term_budget: u64,
    /// Reduction budget for each column-subsystem run.
    pub probe_budget: usize,
    pub probe_term_budget: u64,
    pub split_cap: usize,
    pub exact: bool,
    /// Parameter range `[-R, R]` for exact trials.
    pub exact_range: i64,
    /// Largest unknown count accepted by exact mode.
    pub exact_var_limit: usize,
    pub mode: BuildMode,
    pub per_h_st: bool,
    /// Monomial order on the unknowns of each specialized system.
    /// `OrderChoice::BlockByFamily` gives elimination-style orders.
    pub order: OrderChoice,
    /// Largest polynomial presolve may use to eliminate a variable.
    pub presolve_terms: usize,
    pub parallel: bool,
    pub record_timing: bool,
}

impl Default for DeciderConfig {
    fn default() -> Self {
        DeciderConfig {
            trials: 5,
            prime_range: PRIME_RANGE,
            seed: 0x5eed,
            gb_budget: 200_000,
            gb_term_budget: 400_000_000,
            probe_budget: 20_000,
            probe_term_budget: 40_000_000,
            split_cap: DEFAULT_SPLIT_CAP,
            exact: false,
            exact_range: 1_000_000,
            exact_var_limit: 120,
            mode: BuildMode::Pruned,
            per_h_st: false,
            order: OrderChoice::GRevLex,
            presolve_terms: 64,
            parallel: true,
            record_timing: false,
        }
    }
}

impl DeciderConfig {
    pub fn build_options(&self) -> BuildOptions {
        BuildOptions { mode: self.mode, per_h_st: self.per_h_st }
    }

    fn probe_budgets(&self) -> (usize, u64) {
        (self.probe_budget, self.probe_term_budget)
    }

    fn gb_budgets(&self) -> (usize, u64) {
        (self.gb_budget, self.gb_term_budget)
    }

    fn validate(&self) -> Result<(), InputError> {
        if self.trials.is_multiple_of(2) {
            return Err(InputError::Malformed(format!("trial count {} must be odd", self.trials)));
        }
        Ok(())
    }
}

/// `ℓ(u) + ℓ(v) + ℓ(w) = C(n,2) + 2 Σ d̂_i`.
pub fn dimension_check(inst: &CompleteInstance) -> bool {
    let n = inst.n;
    let lhs: usize = inst.perms().iter().map(|p| p.length()).sum();
    let rhs = n * (n - 1) / 2 + 2 * inst.dhat.iter().map(|&d| d as usize).sum::<usize>();
    lhs == rhs
}

/// Seed of trial `trial` on split `split`, a fixed function of the run seed.
pub fn trial_seed(seed: u64, split: usize, trial: usize) -> u64 {
    let mut z = seed ^ (split as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (trial as u64).wrapping_mul(0xd1b5_4a32_d192_ed03);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Settled {
    outcome: Outcome,
    reductions: usize,
    via: &'static str,
}

fn run_gb<F: Field>(sys: &PolySystem<F>, presolve_terms: usize, budget: (usize, u64)) -> Result<(bool, usize), usize> {
    let (pre, _) = sys.presolve(presolve_terms);
    let cfg = GbConfig { max_reductions: budget.0, max_term_ops: budget.1, interreduce: false, ..GbConfig::default() };
    match pre.contains_one(&cfg) {
        Ok((one, stats)) => Ok((one, stats.reductions)),
        Err(AlgebraError::BudgetExhausted { reductions }) => Err(reductions),
        Err(e) => panic!("specialized system is malformed: {e}"),
    }
}

/// Subsystems keeping the full-rank equations and the rank equations on the
/// columns in `mask`, smallest first. The full column set is excluded.
/// The first pass over the column subsystems gets this fraction of the
/// probe budget; subsystems it leaves open are retried with the full one.
const PROBE_ROUND_SPLIT: usize = 16;

fn column_masks(n: usize) -> Vec<u32> {
    let full = (1u32 << n) - 1;
    let mut masks: Vec<u32> = (1..full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// The full-rank equations together with the rank equations on the columns
/// in `mask`.
fn column_subsystem(bundle: &SystemBundle, mask: u32) -> PolySystem<Rationals> {
    let polys = bundle
        .system
        .polys
        .iter()
        .zip(&bundle.tags)
        .filter(|(_, t)| t.column.is_none_or(|j| mask & (1 << (j - 1)) != 0))
        .map(|(p, _)| p.clone())
        .collect();
    PolySystem::new(bundle.system.ring.clone(), polys)
}

/// Chart equations for every factored witness `X Y`: `L X = I` when `X` has
/// at most as many rows as `Y` has columns, `Y L = I` otherwise. The entries
/// of each `L` come from `draw`.
fn chart_eqs<F: Field>(
    sys: &PolySystem<F>,
    inst: &CompleteInstance,
    mode: BuildMode,
    mut draw: impl FnMut() -> F::Elem,
) -> Vec<Polynomial<F>> {
    let ring = &sys.ring;
    let mut out = Vec::new();
    for (s, i, j, r) in factored_blocks(inst, mode) {
        let len = i.min(j);
        let l: Vec<Vec<F::Elem>> = (0..r).map(|_| (0..len).map(|_| draw()).collect()).collect();
        for q in 1..=r {
            for k in 1..=r {
                let mut terms: Vec<Term<F>> = (1..=len)
                    .map(|p| {
                        let name = if i <= j { factor_var("x", s, i, j, p, k) } else { factor_var("y", s, i, j, k, p) };
                        (Monomial::var(ring.var(&name)), l[q - 1][p - 1].clone())
                    })
                    .collect();
                if q == k {
                    terms.push((Monomial::one(), ring.field.from_i64(-1)));
                }
                out.push(Polynomial::from_terms(ring, terms));
            }
        }
    }
    out
}

/// Random chart on the rows of each `M_h`. Rows sharing a degree `d_{h,i}`
/// have the same shape, and an invertible change of such rows, undone on
/// the columns of `M_{h-1}`, maps solutions to solutions. Their
/// coefficient matrix `A` is put in the chart `A·Λ = I`.
fn m_chart_eqs<F: Field>(sys: &PolySystem<F>, degrees: &DegreeSplit, mut draw: impl FnMut() -> F::Elem) -> Vec<Polynomial<F>> {
    let ring = &sys.ring;
    let n = degrees.n();
    let mut out = Vec::new();
    for h in 1..n {
        let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for i in 1..=h {
            groups.entry(degrees.get(h, i)).or_default().push(i);
        }
        for (d, rows) in groups {
            let coeffs: Vec<(usize, i64)> = (1..=h + 1)
                .flat_map(|j| (0..=d as i64 - degrees.get(h + 1, j) as i64).map(move |m| (j, m)))
                .collect();
            if coeffs.len() < rows.len() {
                continue;
            }
            let lambda: Vec<Vec<F::Elem>> =
                (0..rows.len()).map(|_| coeffs.iter().map(|_| draw()).collect()).collect();
            for (q, &i) in rows.iter().enumerate() {
                for (k, col) in lambda.iter().enumerate() {
                    let mut terms: Vec<Term<F>> = coeffs
                        .iter()
                        .zip(col)
                        .map(|(&(j, m), c)| (Monomial::var(ring.var(&format!("a_{h}_{i}_{j}_{m}"))), c.clone()))
                        .collect();
                    if q == k {
                        terms.push((Monomial::one(), ring.field.from_i64(-1)));
                    }
                    out.push(Polynomial::from_terms(ring, terms));
                }
            }
        }
    }
    out
}

/// Gauge for the full-rank witnesses. `B_h = I` and a zero last column of
/// `C_h` lose no solutions. The remaining columns of `C_h` form a right
/// inverse of `M_h`, fixed up to the kernel by `ℓ·C_h = 0` for a random `ℓ`.
fn fullrank_gauge<F: Field>(sys: &PolySystem<F>, ells: &[Vec<F::Elem>]) -> PolySystem<F> {
    let ring = &sys.ring;
    let var = |name: String| Monomial::var(ring.var(&name));
    let mut out = sys.polys.clone();
    for (h, l) in (1..).zip(ells) {
        for p in 1..=h {
            for q in 1..=h {
                let mut terms = vec![(var(format!("b_{h}_{p}_{q}")), ring.field.one())];
                if p == q {
                    terms.push((Monomial::one(), ring.field.from_i64(-1)));
                }
                out.push(Polynomial::from_terms(ring, terms));
            }
        }
        for p in 1..=h + 1 {
            out.push(Polynomial::from_terms(ring, vec![(var(format!("c_{h}_{p}_{}", h + 1)), ring.field.one())]));
        }
        for q in 1..=h {
            let terms = (1..=h + 1).map(|p| (var(format!("c_{h}_{p}_{q}")), l[p - 1].clone())).collect();
            out.push(Polynomial::from_terms(ring, terms));
        }
    }
    PolySystem::new(ring.clone(), out)
}

/// Decides one system, `spec` specializing any subsystem of the bundle.
/// Every system is gauged, then restricted to a random chart on the rows of
/// each `M_h` and on the factored witnesses. A consistent chart is a
/// solution of the system. An inconsistent one means no solution, except
/// when a random chart hits a degenerate locus, which happens with
/// probability at most `n/|F|` per block. If the chart stays open, the
/// literal build tries column subsystems: an inconsistent subsystem proves
/// the system inconsistent. The last resort is the unrestricted run.
fn settle<F: Field>(
    bundle: &SystemBundle,
    inst: &CompleteInstance,
    degrees: &DegreeSplit,
    cfg: &DeciderConfig,
    spec: impl Fn(&PolySystem<Rationals>) -> PolySystem<F>,
    mut draw: impl FnMut() -> F::Elem,
) -> Settled {
    let mut spent = 0;
    let ells: Vec<Vec<F::Elem>> = (1..inst.n).map(|h| (0..=h).map(|_| draw()).collect()).collect();
    let spec = |sys: &PolySystem<Rationals>| fullrank_gauge(&spec(sys), &ells);
    let full = &bundle.system;
    let sys = spec(full);
    let mut chart = m_chart_eqs(&sys, degrees, &mut draw);
    chart.extend(chart_eqs(&sys, inst, bundle.mode, &mut draw));
    if !chart.is_empty() {
        let mut polys = sys.polys.clone();
        polys.extend(chart);
        match run_gb(&PolySystem::new(sys.ring.clone(), polys), cfg.presolve_terms, cfg.gb_budgets()) {
            Ok((false, r)) => return Settled { outcome: Outcome::Satisfiable, reductions: r, via: "chart" },
            Ok((true, r)) => return Settled { outcome: Outcome::Unsatisfiable, reductions: r, via: "chart" },
            Err(r) => spent += r,
        }
    }
    if bundle.mode == BuildMode::Unpruned {
        let (reds, ops) = cfg.probe_budgets();
        let mut pending = column_masks(inst.n);
        for budget in [(reds / PROBE_ROUND_SPLIT, ops / PROBE_ROUND_SPLIT as u64), (reds, ops)] {
            let mut exhausted = Vec::new();
            for mask in pending {
                match run_gb(&spec(&column_subsystem(bundle, mask)), cfg.presolve_terms, budget) {
                    Ok((true, r)) => {
                        return Settled {
                            outcome: Outcome::Unsatisfiable,
                            reductions: spent + r,
                            via: "column-subsystem",
                        }
                    }
                    Ok((false, r)) => spent += r,
                    Err(r) => {
                        spent += r;
                        exhausted.push(mask);
                    }
                }
            }
            pending = exhausted;
        }
    }
    match run_gb(&sys, cfg.presolve_terms, cfg.gb_budgets()) {
        Ok((true, r)) => Settled { outcome: Outcome::Unsatisfiable, reductions: spent + r, via: "groebner" },
        Ok((false, r)) => Settled { outcome: Outcome::Satisfiable, reductions: spent + r, via: "groebner" },
        Err(r) => Settled { outcome: Outcome::BudgetExhausted, reductions: spent + r, via: "groebner" },
    }
}

fn prime_trial(
    bundle: &SystemBundle,
    inst: &CompleteInstance,
    degrees: &DegreeSplit,
    cfg: &DeciderConfig,
    split: usize,
    seed: u64,
) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_prime(&mut rng, cfg.prime_range.0, cfg.prime_range.1);
    let gf = PrimeField::new(p);
    let values: HashMap<VarId, u64> =
        bundle.system.parameters().into_iter().map(|v| (v, gf.random_elem(&mut rng))).collect();
    let s = settle(
        bundle,
        inst,
        degrees,
        cfg,
        |sys| sys.specialize(gf, &values, &cfg.order, |c| gf.from_rational(c)).expect("every parameter is assigned"),
        || gf.random_elem(&mut rng),
    );
    TrialRecord { split, prime: Some(p), seed, outcome: s.outcome, reductions: s.reductions, via: s.via.to_string() }
}

fn exact_trial(
    bundle: &SystemBundle,
    inst: &CompleteInstance,
    degrees: &DegreeSplit,
    cfg: &DeciderConfig,
    split: usize,
    seed: u64,
) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = cfg.exact_range;
    let values: HashMap<VarId, BigRational> = bundle
        .system
        .parameters()
        .into_iter()
        .map(|v| (v, BigRational::from_integer(BigInt::from(rng.gen_range(-r..=r)))))
        .collect();
    let s = settle(
        bundle,
        inst,
        degrees,
        cfg,
        |sys| sys.specialize(Rationals, &values, &cfg.order, |c| Some(c.clone())).expect("every parameter is assigned"),
        || BigRational::from_integer(BigInt::from(rng.gen_range(-r..=r))),
    );
    TrialRecord { split, prime: None, seed, outcome: s.outcome, reductions: s.reductions, via: s.via.to_string() }
}

/// Majority outcome over a split's trials, `None` without a strict majority.
pub fn majority(trials: &[TrialRecord]) -> Option<Outcome> {
    let count = |o: Outcome| trials.iter().filter(|t| t.outcome == o).count();
    [Outcome::Satisfiable, Outcome::Unsatisfiable].into_iter().find(|&o| 2 * count(o) > trials.len())
}

/// Runs every trial on one split; `index` keys the trial seeds.
pub fn decide_split(inst: &CompleteInstance, split: &DegreeSplit, index: usize, cfg: &DeciderConfig) -> Vec<TrialRecord> {
    let bundle = assemble_system(inst, split, &cfg.build_options());
    let count = if cfg.exact { 1 } else { cfg.trials };
    let seeds: Vec<u64> = (0..count).map(|t| trial_seed(cfg.seed, index, t)).collect();
    if cfg.exact {
        return seeds.iter().map(|&s| exact_trial(&bundle, inst, split, cfg, index, s)).collect();
    }
    par_map(cfg.parallel, &seeds, |&s| prime_trial(&bundle, inst, split, cfg, index, s))
}

fn short_circuit(decision: Decision, dimension_ok: bool, dhat: Option<Vec<u32>>, note: String) -> Verdict {
    Verdict { decision, witness_split: None, dhat, dimension_ok, systems_built: 0, trials: Vec::new(), note, timing_ms: None }
}

/// Decides a complete-flag instance.
pub fn decide_complete(inst: &CompleteInstance, cfg: &DeciderConfig) -> Result<Verdict, InputError> {
    cfg.validate()?;
    if inst.n < 2 {
        return Err(InputError::TooSmall { n: inst.n });
    }
    let start = Instant::now();
    let mut verdict = decide_inner(inst, cfg);
    if cfg.record_timing {
        verdict.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(verdict)
}

fn decide_inner(inst: &CompleteInstance, cfg: &DeciderConfig) -> Verdict {
    let dhat = Some(inst.dhat.clone());
    if !dimension_check(inst) {
        return short_circuit(Decision::Vanishing, false, dhat, "dimension condition fails".into());
    }
    let splits = match enumerate_splits_capped(&inst.dhat, cfg.split_cap) {
        Ok(s) => s,
        Err(e) => return short_circuit(Decision::Inconclusive, true, dhat, e.to_string()),
    };
    if cfg.exact {
        let unknowns = assemble_system(inst, &splits[0], &cfg.build_options()).counts.unknowns();
        if unknowns > cfg.exact_var_limit {
            let note = format!("{unknowns} unknowns exceed the exact-mode limit of {}", cfg.exact_var_limit);
            return short_circuit(Decision::Inconclusive, true, dhat, note);
        }
    }
    let mut trials = Vec::new();
    let mut undecided = 0;
    for (k, split) in splits.iter().enumerate() {
        let rec = decide_split(inst, split, k, cfg);
        let vote = majority(&rec);
        trials.extend(rec);
        match vote {
            Some(Outcome::Satisfiable) => {
                return Verdict {
                    decision: Decision::Nonvanishing,
                    witness_split: Some(split.clone()),
                    dhat,
                    dimension_ok: true,
                    systems_built: k + 1,
                    trials,
                    note: format!("split {k} is satisfiable in a majority of trials"),
                    timing_ms: None,
                };
            }
            Some(_) => {}
            None => undecided += 1,
        }
    }
    let (decision, note) = if undecided == 0 {
        (Decision::Vanishing, format!("all {} splits are unsatisfiable in a majority of trials", splits.len()))
    } else {
        (Decision::Inconclusive, format!("{undecided} of {} splits have no majority outcome", splits.len()))
    };
    Verdict { decision, witness_split: None, dhat, dimension_ok: true, systems_built: splits.len(), trials, note, timing_ms: None }
}

/// Decides an instance on any flag variety. Trials run over random primes,
/// or over the rationals when `cfg.exact` is set.
pub fn decide(inst: &GwInstance, cfg: &DeciderConfig) -> Result<Verdict, InputError> {
    let complete = reduce_to_complete(inst)?;
    decide_complete(&complete, cfg)
}

/// One trial over `QQ` with random integer parameters in
/// `[-exact_range, exact_range]`. A specific integer evaluation may be
/// non-generic with small probability.
pub fn decide_exact(inst: &GwInstance, cfg: &DeciderConfig) -> Result<Verdict, InputError> {
    decide(inst, &DeciderConfig { exact: true, ..cfg.clone() })
}

/// Re-runs the trials of a witness split under a different seed and
/// reports whether the majority is still satisfiable.
pub fn recheck_witness(inst: &CompleteInstance, split: &DegreeSplit, cfg: &DeciderConfig, seed: u64) -> bool {
    let cfg = DeciderConfig { seed, ..cfg.clone() };
    majority(&decide_split(inst, split, 0, &cfg)) == Some(Outcome::Satisfiable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn complete(d: Vec<u32>, u: &[usize], v: &[usize], w: &[usize]) -> CompleteInstance {
        CompleteInstance { n: u.len(), dhat: d, u: p(u), v: p(v), w: p(w) }
    }

    #[test]
    fn dimension_examples() {
        assert!(dimension_check(&complete(vec![1], &[2, 1], &[2, 1], &[2, 1])));
        assert!(!dimension_check(&complete(vec![2], &[2, 1], &[2, 1], &[2, 1])));
        assert!(dimension_check(&complete(vec![0, 0], &[2, 1, 3], &[2, 1, 3], &[2, 1, 3])));
    }

    #[test]
    fn seeds_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..20 {
            for t in 0..5 {
                assert!(seen.insert(trial_seed(7, s, t)));
            }
        }
        assert_eq!(trial_seed(7, 3, 2), trial_seed(7, 3, 2));
    }

    #[test]
    fn p1_and_fl3_examples() {
        let cfg = DeciderConfig::default();
        let v = decide_complete(&complete(vec![1], &[2, 1], &[2, 1], &[2, 1]), &cfg).unwrap();
        assert_eq!(v.decision, Decision::Nonvanishing);
        assert!(v.witness_split.is_some());
        let v = decide_complete(&complete(vec![0, 0], &[2, 1, 3], &[2, 1, 3], &[2, 1, 3]), &cfg).unwrap();
        assert_eq!(v.decision, Decision::Vanishing);
        assert_eq!(v.trials.len(), 5);
        let v = decide_complete(&complete(vec![2], &[2, 1], &[2, 1], &[2, 1]), &cfg).unwrap();
        assert_eq!(v.decision, Decision::Vanishing);
        assert_eq!(v.systems_built, 0);
    }

    #[test]
    fn exact_mode_agrees() {
        let cfg = DeciderConfig::default();
        let p1 = GwInstance::complete(vec![1], p(&[2, 1]), p(&[2, 1]), p(&[2, 1])).unwrap();
        let v = decide_exact(&p1, &cfg).unwrap();
        assert_eq!(v.decision, Decision::Nonvanishing);
        assert_eq!(v.trials[0].prime, None);
        let fl3 = GwInstance::complete(vec![0, 0], p(&[2, 1, 3]), p(&[2, 1, 3]), p(&[2, 1, 3])).unwrap();
        assert_eq!(decide_exact(&fl3, &cfg).unwrap().decision, Decision::Vanishing);
    }

    #[test]
    fn even_trial_count_is_rejected() {
        let cfg = DeciderConfig { trials: 4, ..DeciderConfig::default() };
        assert!(decide_complete(&complete(vec![1], &[2, 1], &[2, 1], &[2, 1]), &cfg).is_err());
    }

    #[test]
    fn verdicts_are_deterministic() {
        let cfg = DeciderConfig::default();
        let i = complete(vec![0, 0], &[2, 1, 3], &[1, 3, 2], &[2, 1, 3]);
        let a = decide_complete(&i, &cfg).unwrap();
        let b = decide_complete(&i, &DeciderConfig { parallel: false, ..cfg }).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.decision, Decision::Nonvanishing);
    }

    #[test]
    fn literal_build_settles_small_cases() {
        let cfg = DeciderConfig { mode: BuildMode::Unpruned, trials: 1, ..DeciderConfig::default() };
        let sat = decide_complete(&complete(vec![0, 0], &[2, 1, 3], &[1, 3, 2], &[2, 1, 3]), &cfg).unwrap();
        assert_eq!(sat.decision, Decision::Nonvanishing);
        let unsat = decide_complete(&complete(vec![0, 0], &[2, 1, 3], &[2, 1, 3], &[2, 1, 3]), &cfg).unwrap();
        assert_eq!(unsat.decision, Decision::Vanishing);
        assert_eq!(unsat.trials[0].via, "chart");
    }

    #[test]
    fn charts_settle_degree_zero_on_four_strands() {
        let cfg = DeciderConfig { trials: 1, parallel: false, ..DeciderConfig::default() };
        let point = decide_complete(&complete(vec![0, 0, 0], &[1, 2, 3, 4], &[1, 2, 3, 4], &[4, 3, 2, 1]), &cfg).unwrap();
        assert_eq!(point.decision, Decision::Nonvanishing);
        assert_eq!(point.trials[0].via, "chart");
        let zero = decide_complete(&complete(vec![0, 0, 0], &[1, 2, 3, 4], &[1, 4, 3, 2], &[1, 4, 3, 2]), &cfg).unwrap();
        assert_eq!(zero.decision, Decision::Vanishing);
    }

    #[test]
    fn m_chart_groups_rows_by_degree() {
        let i = complete(vec![1, 0], &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]);
        let split = DegreeSplit::new(vec![vec![0], vec![0, 1]]);
        let bundle = assemble_system(&i, &split, &BuildOptions::default());
        let gf = PrimeField::new(1_000_003);
        let values: HashMap<VarId, u64> = bundle.system.parameters().into_iter().map(|v| (v, 1)).collect();
        let sys = bundle.system.specialize(gf, &values, &OrderChoice::GRevLex, |c| gf.from_rational(c)).unwrap();
        // one row in each group: 1 + 1 + 1 equations
        assert_eq!(m_chart_eqs(&sys, &split, || 2).len(), 3);
    }

    #[test]
    fn column_subsystem_refutes_triple_transposition() {
        let i = complete(vec![0, 0], &[2, 1, 3], &[2, 1, 3], &[2, 1, 3]);
        let opts = BuildOptions { mode: BuildMode::Unpruned, per_h_st: false };
        let bundle = assemble_system(&i, &DegreeSplit::zero(3), &opts);
        let gf = PrimeField::new(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let values: HashMap<VarId, u64> =
            bundle.system.parameters().into_iter().map(|v| (v, gf.random_elem(&mut rng))).collect();
        let refuted = column_masks(3).into_iter().any(|mask| {
            let sub = column_subsystem(&bundle, mask);
            assert!(sub.polys.len() < bundle.system.polys.len());
            let sys = sub.specialize(gf, &values, &OrderChoice::GRevLex, |c| gf.from_rational(c)).unwrap();
            matches!(run_gb(&sys, 64, (20_000, 40_000_000)), Ok((true, _)))
        });
        assert!(refuted);
    }
}
