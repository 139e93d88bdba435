//! Construction of the polynomial system attached to a complete-flag
//! instance and a degree split, and export of the exponent-templated form.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    export_system, Field, Monomial, MonomialOrder, PolyRing, PolySystem, Polynomial, Rationals, Registry, VarClass,
    VarId,
};
use crate::error::Result;
use crate::perm::{Permutation, RankTable};
use crate::splits::{DegreeSplit, SplitSystem};
use crate::woodward::{reduce_to_complete, CompleteInstance, GwInstance};

pub type QPoly = Polynomial<Rationals>;

/// Which of the equivalent encodings of the rank conditions to emit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildMode {
    /// Vacuous rank bounds carry unconstrained witness matrices and the
    /// bottom row is the parameter matrix itself.
    #[default]
    Pruned,
    /// Every `(σ, i, j)` gets a factorization `X·Y`.
    Unpruned,
    /// Chain products are written out explicitly and only binding rank
    /// bounds get factorizations.
    ChainElim,
}

impl BuildMode {
    pub const ALL: [BuildMode; 3] = [BuildMode::Pruned, BuildMode::Unpruned, BuildMode::ChainElim];

    pub fn name(self) -> &'static str {
        match self {
            BuildMode::Pruned => "pruned",
            BuildMode::Unpruned => "unpruned",
            BuildMode::ChainElim => "chain-elim",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    pub mode: BuildMode,
    /// One `(s_h, t_h)` pair per full-rank block instead of a shared pair.
    pub per_h_st: bool,
}

/// The three evaluation points and their permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sigma {
    U,
    V,
    W,
}

impl Sigma {
    pub const ALL: [Sigma; 3] = [Sigma::U, Sigma::V, Sigma::W];

    pub fn name(self) -> &'static str {
        match self {
            Sigma::U => "u",
            Sigma::V => "v",
            Sigma::W => "w",
        }
    }

    /// `(s, t)` at which `M_h` is evaluated.
    pub fn point(self) -> (i64, i64) {
        match self {
            Sigma::U => (0, 1),
            Sigma::V => (1, 1),
            Sigma::W => (1, 0),
        }
    }

    pub fn param_family(self) -> &'static str {
        match self {
            Sigma::U => "alpha",
            Sigma::V => "beta",
            Sigma::W => "gamma",
        }
    }

    fn perm(self, inst: &CompleteInstance) -> &Permutation {
        match self {
            Sigma::U => &inst.u,
            Sigma::V => &inst.v,
            Sigma::W => &inst.w,
        }
    }
}

/// Origin of an equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `B_h · M_h(s,t) · C_h = [Id | 0]`.
    FullRank,
    /// `R_{n,j}(σ) = P_j`.
    Anchor(Sigma),
    /// `R_{i-1,j}(σ) = M_{i-1}(pt_σ) · R_{i,j}(σ)`.
    Chain(Sigma),
}

/// A dense matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<QPoly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<PolyRing<Rationals>>, rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Polynomial::zero(ring); rows * cols] }
    }

    /// Builds from a 1-indexed entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> QPoly) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries }
    }

    /// Matrix of registered variables `{prefix}_{i}_{j}`.
    pub fn of_vars(ring: &Arc<PolyRing<Rationals>>, prefix: &str, rows: usize, cols: usize) -> Self {
        PolyMatrix::from_fn(rows, cols, |i, j| Polynomial::var(ring, ring.var(&format!("{prefix}_{i}_{j}"))))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`, 1-indexed.
    pub fn get(&self, i: usize, j: usize) -> &QPoly {
        &self.entries[(i - 1) * self.cols + (j - 1)]
    }

    pub fn entries(&self) -> &[QPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero(self.get(1, 1).ring());
            for k in 1..=self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b).expect("same ring")).expect("same ring");
                }
            }
            acc
        })
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b).expect("same ring")).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// The leading `k` columns.
    pub fn first_cols(&self, k: usize) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows, k, |i, j| self.get(i, j).clone())
    }

    pub fn substitute(&self, values: &HashMap<VarId, <Rationals as Field>::Elem>) -> PolyMatrix {
        let entries = self.entries.iter().map(|p| p.substitute(values)).collect();
        PolyMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

/// How the rank witness `R_{i,j}(σ)` is represented.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Params,
    Free,
    Product,
    Zero,
    Factored(usize),
}

fn slot(mode: BuildMode, rt: &RankTable, i: usize, j: usize) -> Slot {
    let n = rt.n();
    let r = rt.get(i, j);
    match mode {
        BuildMode::Unpruned if r == 0 => Slot::Zero,
        BuildMode::Unpruned => Slot::Factored(r),
        _ if i == n => Slot::Params,
        BuildMode::Pruned if rt.is_vacuous(i, j) => Slot::Free,
        BuildMode::ChainElim if rt.is_vacuous(i, j) => Slot::Product,
        _ if r == 0 => Slot::Zero,
        _ => Slot::Factored(r),
    }
}

fn witness_prefix(kind: &str, s: Sigma, i: usize, j: usize) -> String {
    format!("{kind}_{}_{i}_{j}", s.name())
}

fn entry_len(split: &DegreeSplit, h: usize, i: usize, j: usize) -> i64 {
    split.get(h, i) as i64 - split.get(h + 1, j) as i64
}

fn st_names(h: usize, per_h: bool) -> (String, String) {
    if per_h {
        (format!("s_{h}"), format!("t_{h}"))
    } else {
        ("s".to_string(), "t".to_string())
    }
}

/// Registers every variable the system needs, in block order: rank
/// witnesses, full-rank witnesses, matrix coefficients, `s, t`, parameters.
fn plan_registry(inst: &CompleteInstance, split: &DegreeSplit, opts: &BuildOptions) -> Registry {
    let n = inst.n;
    let mut reg = Registry::new();
    register_witnesses(&mut reg, inst, opts.mode);
    register_fullrank(&mut reg, n);
    for h in 1..n {
        for i in 1..=h {
            for j in 1..=h + 1 {
                let l = entry_len(split, h, i, j);
                for m in 0..=l.max(-1) {
                    reg.add(format!("a_{h}_{i}_{j}_{m}"), VarClass::Unknown, "a");
                }
            }
        }
    }
    if opts.per_h_st {
        for h in 1..n {
            let (s, t) = st_names(h, true);
            reg.add(s, VarClass::Unknown, "st");
            reg.add(t, VarClass::Unknown, "st");
        }
    } else {
        reg.add("s", VarClass::Unknown, "st");
        reg.add("t", VarClass::Unknown, "st");
    }
    register_params(&mut reg, n);
    reg
}

fn register_witnesses(reg: &mut Registry, inst: &CompleteInstance, mode: BuildMode) {
    let n = inst.n;
    for s in Sigma::ALL {
        let rt = s.perm(inst).rank_table();
        for i in 1..=n {
            for j in 1..=n {
                match slot(mode, &rt, i, j) {
                    Slot::Factored(r) => {
                        for (kind, rows, cols) in [("x", i, r), ("y", r, j)] {
                            let prefix = witness_prefix(kind, s, i, j);
                            for p in 1..=rows {
                                for q in 1..=cols {
                                    reg.add(format!("{prefix}_{p}_{q}"), VarClass::Unknown, kind);
                                }
                            }
                        }
                    }
                    Slot::Free => {
                        let prefix = witness_prefix("r", s, i, j);
                        for p in 1..=i {
                            for q in 1..=j {
                                reg.add(format!("{prefix}_{p}_{q}"), VarClass::Unknown, "r");
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
}

/// Every factored witness `X Y` of the build as `(σ, i, j, r)`, with `X`
/// of size `i × r` and `Y` of size `r × j`.
///
/// A rank-`r` product can be rewritten with `L X = I` (or `Y L = I`)
/// whenever `L X` (or `Y L`) is invertible, which holds for generic `L`.
/// Adding these equations therefore restricts the system to a chart: a
/// solution of the charted system solves the original one.
pub fn factored_blocks(inst: &CompleteInstance, mode: BuildMode) -> Vec<(Sigma, usize, usize, usize)> {
    let n = inst.n;
    let mut out = Vec::new();
    for s in Sigma::ALL {
        let rt = s.perm(inst).rank_table();
        for i in 1..=n {
            for j in 1..=n {
                if let Slot::Factored(r) = slot(mode, &rt, i, j) {
                    out.push((s, i, j, r));
                }
            }
        }
    }
    out
}

/// Name of entry `(p, q)` of the factor `kind` (`"x"` or `"y"`) of a
/// factored witness.
pub fn factor_var(kind: &str, s: Sigma, i: usize, j: usize, p: usize, q: usize) -> String {
    format!("{}_{p}_{q}", witness_prefix(kind, s, i, j))
}

fn register_fullrank(reg: &mut Registry, n: usize) {
    for h in 1..n {
        for (kind, size) in [("b", h), ("c", h + 1)] {
            for p in 1..=size {
                for q in 1..=size {
                    reg.add(format!("{kind}_{h}_{p}_{q}"), VarClass::Unknown, kind);
                }
            }
        }
    }
}

fn register_params(reg: &mut Registry, n: usize) {
    for s in Sigma::ALL {
        let fam = s.param_family();
        for i in 1..=n {
            for j in 1..=n {
                reg.add(format!("{fam}_{i}_{j}"), VarClass::Parameter, fam);
            }
        }
    }
}

/// `M_h(s,t)`: entry `(i,j)` is `Σ_m a_{h,i,j,m} s^m t^{L-m}` with
/// `L = d_{h,i} - d_{h+1,j}`, or zero when `L < 0`.
pub fn build_m(ring: &Arc<PolyRing<Rationals>>, h: usize, split: &DegreeSplit, s: VarId, t: VarId) -> PolyMatrix {
    let one = Rationals.one();
    PolyMatrix::from_fn(h, h + 1, |i, j| {
        let l = entry_len(split, h, i, j);
        let terms = (0..=l.max(-1))
            .map(|m| {
                let a = ring.var(&format!("a_{h}_{i}_{j}_{m}"));
                let mono = Monomial::from_pairs(&[(a, 1), (s, m as u32), (t, (l - m) as u32)]);
                (mono, one.clone())
            })
            .collect();
        Polynomial::from_terms(ring, terms)
    })
}

/// `M_h` evaluated at a point of `P^1`.
pub fn evaluate_m(m: &PolyMatrix, s: VarId, t: VarId, point: (i64, i64)) -> PolyMatrix {
    let values = HashMap::from([(s, Rationals.from_i64(point.0)), (t, Rationals.from_i64(point.1))]);
    m.substitute(&values)
}

/// Origin of an equation: its family and, for rank equations, the column
/// count `j` of the witness it constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EqTag {
    pub family: Family,
    pub column: Option<usize>,
}

fn push_matrix_eqs(out: &mut Vec<(EqTag, QPoly)>, family: Family, column: Option<usize>, m: &PolyMatrix) {
    for p in m.entries() {
        if !p.is_zero() {
            out.push((EqTag { family, column }, p.clone()));
        }
    }
}

/// `B_h · M_h(s,t) · C_h - [Id_h | 0]` for every `h`, entrywise.
pub fn build_fullrank_eqs(ring: &Arc<PolyRing<Rationals>>, m_sym: &[PolyMatrix]) -> Vec<(EqTag, QPoly)> {
    let mut out = Vec::new();
    for (idx, m) in m_sym.iter().enumerate() {
        let h = idx + 1;
        let b = PolyMatrix::of_vars(ring, &format!("b_{h}"), h, h);
        let c = PolyMatrix::of_vars(ring, &format!("c_{h}"), h + 1, h + 1);
        let target = PolyMatrix::from_fn(h, h + 1, |i, j| {
            if i == j {
                Polynomial::one(ring)
            } else {
                Polynomial::zero(ring)
            }
        });
        push_matrix_eqs(&mut out, Family::FullRank, None, &b.mul(m).mul(&c).sub(&target));
    }
    out
}

/// The anchoring and chain equations for `σ ∈ {u, v, w}`. `m_at[σ][h-1]`
/// is `M_h(pt_σ)`.
pub fn build_rank_eqs(
    ring: &Arc<PolyRing<Rationals>>,
    inst: &CompleteInstance,
    m_at: &HashMap<Sigma, Vec<PolyMatrix>>,
    mode: BuildMode,
) -> Vec<(EqTag, QPoly)> {
    let n = inst.n;
    let mut out = Vec::new();
    for s in Sigma::ALL {
        let rt = s.perm(inst).rank_table();
        let params = PolyMatrix::of_vars(ring, s.param_family(), n, n);
        let ms = &m_at[&s];
        let factored = |i: usize, j: usize, r: usize| {
            let x = PolyMatrix::of_vars(ring, &witness_prefix("x", s, i, j), i, r);
            let y = PolyMatrix::of_vars(ring, &witness_prefix("y", s, i, j), r, j);
            x.mul(&y)
        };
        match mode {
            BuildMode::Pruned | BuildMode::Unpruned => {
                let witness = |i: usize, j: usize| match slot(mode, &rt, i, j) {
                    Slot::Params => params.first_cols(j),
                    Slot::Free => PolyMatrix::of_vars(ring, &witness_prefix("r", s, i, j), i, j),
                    Slot::Zero => PolyMatrix::zeros(ring, i, j),
                    Slot::Factored(r) => factored(i, j, r),
                    Slot::Product => unreachable!("product slots only occur in chain elimination"),
                };
                for j in 1..=n {
                    if slot(mode, &rt, n, j) != Slot::Params {
                        push_matrix_eqs(&mut out, Family::Anchor(s), Some(j), &witness(n, j).sub(&params.first_cols(j)));
                    }
                }
                for i in 2..=n {
                    for j in 1..=n {
                        let rhs = ms[i - 2].mul(&witness(i, j));
                        push_matrix_eqs(&mut out, Family::Chain(s), Some(j), &witness(i - 1, j).sub(&rhs));
                    }
                }
            }
            BuildMode::ChainElim => {
                let mut prod = params.clone();
                for i in (1..n).rev() {
                    prod = ms[i - 1].mul(&prod);
                    for j in 1..=n {
                        match slot(mode, &rt, i, j) {
                            Slot::Zero => push_matrix_eqs(&mut out, Family::Chain(s), Some(j), &prod.first_cols(j)),
                            Slot::Factored(r) => {
                                push_matrix_eqs(&mut out, Family::Chain(s), Some(j), &factored(i, j, r).sub(&prod.first_cols(j)))
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    out
}

/// Number of variables of each family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub x: usize,
    pub y: usize,
    pub r: usize,
    pub st: usize,
    pub params: usize,
}

impl VarCounts {
    fn of(reg: &Registry) -> Self {
        VarCounts {
            a: reg.count_family("a"),
            b: reg.count_family("b"),
            c: reg.count_family("c"),
            x: reg.count_family("x"),
            y: reg.count_family("y"),
            r: reg.count_family("r"),
            st: reg.count_family("st"),
            params: reg.parameters().len(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.a + self.b + self.c + self.x + self.y + self.r + self.st
    }
}

/// A built system with its variable accounting and equation provenance.
#[derive(Clone, Debug)]
pub struct SystemBundle {
    pub system: PolySystem<Rationals>,
    /// Origin of each polynomial, parallel to `system.polys`.
    pub tags: Vec<EqTag>,
    pub counts: VarCounts,
    pub mode: BuildMode,
}

#[derive(Serialize)]
struct SidecarEntry<'a> {
    name: &'a str,
    class: VarClass,
    family: &'a str,
}

impl SystemBundle {
    pub fn ring(&self) -> &Arc<PolyRing<Rationals>> {
        &self.system.ring
    }

    /// Total size: one symbol per coefficient plus one per variable
    /// occurrence (with multiplicity).
    pub fn symbol_count(&self) -> usize {
        self.system.polys.iter().flat_map(|p| p.terms()).map(|(m, _)| 1 + m.degree() as usize).sum()
    }

    pub fn family_sizes(&self) -> Vec<(Family, usize)> {
        let mut counts: Vec<(Family, usize)> = Vec::new();
        for f in self.tags.iter().map(|t| &t.family) {
            match counts.iter_mut().find(|(g, _)| g == f) {
                Some(e) => e.1 += 1,
                None => counts.push((*f, 1)),
            }
        }
        counts.sort();
        counts
    }

    /// Largest total degree in unknowns other than `s, t`, and the largest
    /// total degree in all unknowns.
    pub fn degree_audit(&self) -> (u32, u32) {
        let reg = &self.ring().registry;
        let unknown = |v: VarId| reg.info(v).class == VarClass::Unknown;
        let mut core = 0;
        let mut all = 0;
        for p in &self.system.polys {
            core = core.max(p.degree_in(|v| unknown(v) && reg.info(v).family != "st"));
            all = all.max(p.degree_in(unknown));
        }
        (core, all)
    }

    pub fn to_text(&self) -> String {
        export_system(&self.system)
    }

    /// JSON list of `{name, class, family}` in registry order.
    pub fn sidecar_json(&self) -> String {
        let entries: Vec<SidecarEntry> = self
            .ring()
            .registry
            .iter()
            .map(|(_, v)| SidecarEntry { name: &v.name, class: v.class, family: &v.family })
            .collect();
        serde_json::to_string_pretty(&entries).expect("serializable")
    }
}

/// Builds the full system for `inst` at `split`.
pub fn assemble_system(inst: &CompleteInstance, split: &DegreeSplit, opts: &BuildOptions) -> SystemBundle {
    let n = inst.n;
    assert_eq!(split.n(), n, "split and instance disagree on n");
    let reg = plan_registry(inst, split, opts);
    let counts = VarCounts::of(&reg);
    let ring = PolyRing::new(Rationals, reg, MonomialOrder::GRevLex);

    let mut m_sym = Vec::new();
    let mut m_at: HashMap<Sigma, Vec<PolyMatrix>> = HashMap::new();
    for h in 1..n {
        let (s, t) = st_names(h, opts.per_h_st);
        let (s, t) = (ring.var(&s), ring.var(&t));
        let m = build_m(&ring, h, split, s, t);
        for sigma in Sigma::ALL {
            m_at.entry(sigma).or_default().push(evaluate_m(&m, s, t, sigma.point()));
        }
        m_sym.push(m);
    }
    let mut eqs = build_fullrank_eqs(&ring, &m_sym);
    eqs.extend(build_rank_eqs(&ring, inst, &m_at, opts.mode));
    let (tags, polys) = eqs.into_iter().unzip();
    SystemBundle { system: PolySystem::new(ring, polys), tags, counts, mode: opts.mode }
}

/// Closed-form variable counts for the literal (unpruned) encoding.
pub fn expected_counts(inst: &CompleteInstance, split: &DegreeSplit) -> VarCounts {
    let n = inst.n;
    let mut c = VarCounts::default();
    for h in 1..n {
        c.b += h * h;
        c.c += (h + 1) * (h + 1);
        for i in 1..=h {
            for j in 1..=h + 1 {
                c.a += (entry_len(split, h, i, j) + 1).max(0) as usize;
            }
        }
    }
    for s in Sigma::ALL {
        let rt = s.perm(inst).rank_table();
        for i in 1..=n {
            for j in 1..=n {
                c.x += i * rt.get(i, j);
                c.y += rt.get(i, j) * j;
            }
        }
    }
    c.st = 2;
    c.params = 3 * n * n;
    c
}

/// A parametric instance with integer exponent variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnpeInstance {
    pub polys: Vec<String>,
    pub exponent_vars: Vec<String>,
    pub linear_constraints: Vec<HnpeConstraint>,
    #[serde(rename = "M")]
    pub m: i64,
    pub parameters: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnpeConstraint {
    pub a: Vec<i64>,
    pub b: i64,
}

/// Exports the literal system of an instance with the degree split
/// left symbolic. Entries of `M_h` become templates
/// `sum(m=0..L: a_h_i_j_{m}*s^m*t^(L-m))` with `L` an affine expression
/// in the exponent variables; the sum is empty when `L < 0`. Evaluations
/// at points of `P^1` substitute `0`/`1` for `s, t` with `0^0 = 1`. When
/// the total degree is zero the polynomials are written out concretely.
pub fn export_hnpe(inst: &GwInstance) -> Result<HnpeInstance> {
    let complete = reduce_to_complete(inst)?;
    let n = complete.n;
    let total: u32 = inst.degree.iter().sum();
    let param_names = |reg: &Registry| -> Vec<String> {
        reg.parameters().into_iter().map(|v| reg.name(v).to_string()).collect()
    };
    if total == 0 {
        let opts = BuildOptions { mode: BuildMode::Unpruned, per_h_st: false };
        let bundle = assemble_system(&complete, &DegreeSplit::zero(n), &opts);
        return Ok(HnpeInstance {
            polys: bundle.system.polys.iter().map(|p| p.to_text()).collect(),
            exponent_vars: Vec::new(),
            linear_constraints: Vec::new(),
            m: 0,
            parameters: param_names(&bundle.ring().registry),
        });
    }

    let lin = SplitSystem::build(&inst.shape, &inst.degree);
    let mut reg = Registry::new();
    register_witnesses(&mut reg, &complete, BuildMode::Unpruned);
    register_fullrank(&mut reg, n);
    // placeholders for the entries of M_h and of its three evaluations
    let tags = ["st", "u", "v", "w"];
    for h in 1..n {
        for i in 1..=h {
            for j in 1..=h + 1 {
                for tag in tags {
                    reg.add(format!("P{h}_{i}_{j}_{tag}"), VarClass::Unknown, "template");
                }
            }
        }
    }
    register_params(&mut reg, n);
    let ring = PolyRing::new(Rationals, reg, MonomialOrder::GRevLex);

    let placeholder = |h: usize, tag: &str| {
        PolyMatrix::from_fn(h, h + 1, |i, j| Polynomial::var(&ring, ring.var(&format!("P{h}_{i}_{j}_{tag}"))))
    };
    let m_sym: Vec<PolyMatrix> = (1..n).map(|h| placeholder(h, "st")).collect();
    let mut m_at: HashMap<Sigma, Vec<PolyMatrix>> = HashMap::new();
    for s in Sigma::ALL {
        m_at.insert(s, (1..n).map(|h| placeholder(h, s.name())).collect());
    }
    let mut eqs = build_fullrank_eqs(&ring, &m_sym);
    eqs.extend(build_rank_eqs(&ring, &complete, &m_at, BuildMode::Unpruned));

    let exp_name = |h: usize, i: usize| if h == n { None } else { Some(format!("d_{h}_{i}")) };
    let template = |name: &str| -> Option<String> {
        let rest = name.strip_prefix('P')?;
        let parts: Vec<&str> = rest.split('_').collect();
        let (h, i, j): (usize, usize, usize) = (parts[0].parse().ok()?, parts[1].parse().ok()?, parts[2].parse().ok()?);
        let l = match exp_name(h + 1, j) {
            Some(lower) => format!("{}-{lower}", exp_name(h, i)?),
            None => exp_name(h, i)?,
        };
        let (s, t) = match parts[3] {
            "st" => ("s", "t"),
            "u" => ("0", "1"),
            "v" => ("1", "1"),
            _ => ("1", "0"),
        };
        Some(format!("sum(m=0..{l}: a_{h}_{i}_{j}_{{m}}*{s}^m*{t}^({l}-m))"))
    };
    let polys = eqs
        .iter()
        .map(|(_, p)| {
            p.to_text_with(|v| {
                let name = ring.registry.name(v);
                template(name).map(|t| format!("({t})")).unwrap_or_else(|| name.to_string())
            })
        })
        .collect();
    Ok(HnpeInstance {
        polys,
        exponent_vars: lin.names.clone(),
        linear_constraints: lin.rows.iter().map(|r| HnpeConstraint { a: r.a.clone(), b: r.b }).collect(),
        m: lin.bound as i64,
        parameters: param_names(&ring.registry),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;
    use crate::algebra::{GbConfig, OrderChoice};
    use crate::perm::Permutation;
    use rand::SeedableRng;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn inst(dhat: Vec<u32>, u: &[usize], v: &[usize], w: &[usize]) -> CompleteInstance {
        CompleteInstance { n: u.len(), dhat, u: p(u), v: p(v), w: p(w) }
    }

    #[test]
    fn m_matrix_shapes() {
        let i = inst(vec![0], &[2, 1], &[2, 1], &[2, 1]);
        let b = assemble_system(&i, &DegreeSplit::zero(2), &BuildOptions::default());
        assert_eq!(b.counts.a, 2);
        let i1 = inst(vec![1], &[2, 1], &[2, 1], &[2, 1]);
        let split = DegreeSplit::new(vec![vec![1]]);
        let b = assemble_system(&i1, &split, &BuildOptions::default());
        assert_eq!(b.counts.a, 4);
        assert_eq!((b.counts.b, b.counts.c), (1, 4));
        let ring = b.ring().clone();
        let m = build_m(&ring, 1, &split, ring.var("s"), ring.var("t"));
        assert_eq!(m.get(1, 1).to_text(), "1*a_1_1_1_1*s + 1*a_1_1_1_0*t");
        let at = evaluate_m(&m, ring.var("s"), ring.var("t"), (1, 0));
        assert_eq!(at.get(1, 2).to_text(), "1*a_1_1_2_1");
        // a negative entry length gives the zero polynomial
        let split = DegreeSplit::new(vec![vec![0], vec![0, 1]]);
        let i3 = inst(vec![0, 1], &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]);
        let b = assemble_system(&i3, &split, &BuildOptions::default());
        let ring = b.ring().clone();
        let m1 = build_m(&ring, 1, &split, ring.var("s"), ring.var("t"));
        assert!(m1.get(1, 2).is_zero());
        assert!(!m1.get(1, 1).is_zero());
    }

    #[test]
    fn fullrank_equation_count() {
        let i = inst(vec![0, 0], &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]);
        let b = assemble_system(&i, &DegreeSplit::zero(3), &BuildOptions::default());
        // identity permutations impose nothing
        assert!(b.tags.iter().all(|t| t.family == Family::FullRank || matches!(t.family, Family::Chain(_))));
        let full = b.tags.iter().filter(|t| t.family == Family::FullRank).count();
        assert_eq!(full, 2 + 2 * 3);
        let unpruned = assemble_system(&i, &DegreeSplit::zero(3), &BuildOptions { mode: BuildMode::Unpruned, per_h_st: false });
        assert_eq!(unpruned.counts, expected_counts(&i, &DegreeSplit::zero(3)));
        let chain = assemble_system(&i, &DegreeSplit::zero(3), &BuildOptions { mode: BuildMode::ChainElim, per_h_st: false });
        assert!(chain.tags.iter().all(|t| t.family == Family::FullRank));
    }

    #[test]
    fn p1_rank_constraints() {
        let i = inst(vec![1], &[2, 1], &[2, 1], &[2, 1]);
        let split = DegreeSplit::new(vec![vec![1]]);
        let b = assemble_system(&i, &split, &BuildOptions::default());
        let chain_u: Vec<String> = b
            .system
            .polys
            .iter()
            .zip(&b.tags)
            .filter(|(_, t)| t.family == Family::Chain(Sigma::U))
            .map(|(p, _)| p.to_text())
            .collect();
        // R_{1,1}(u) = 0 forces M_1(0,1) U_1 = 0
        assert!(chain_u.contains(&"-1*a_1_1_1_0*alpha_1_1 + -1*a_1_1_2_0*alpha_2_1".to_string()), "{chain_u:?}");
    }

    fn residuals(bundle: &SystemBundle, point: &[(&str, i64)], params: &[(&str, i64)]) -> Vec<String> {
        let ring = bundle.ring();
        let values: HashMap<VarId, _> = params.iter().map(|(n, v)| (ring.var(n), rat(*v))).collect();
        let sys = bundle.system.specialize(Rationals, &values, &OrderChoice::GRevLex, |c| Some(c.clone())).unwrap();
        let mut pt = vec![rat(0); sys.ring.registry.len()];
        for (name, v) in point {
            if let Some(id) = sys.ring.registry.get(name) {
                pt[id as usize] = rat(*v);
            }
        }
        sys.polys.iter().map(|p| p.evaluate(&pt)).filter(|v| *v != rat(0)).map(|v| v.to_string()).collect()
    }

    #[test]
    fn hand_built_solution_on_p1() {
        let i = inst(vec![1], &[2, 1], &[2, 1], &[2, 1]);
        let split = DegreeSplit::new(vec![vec![1]]);
        // U = Id, V columns (1,1), W columns e2 first
        let params = [
            ("alpha_1_1", 1), ("alpha_2_1", 0), ("alpha_1_2", 0), ("alpha_2_2", 1),
            ("beta_1_1", 1), ("beta_2_1", 1), ("beta_1_2", 0), ("beta_2_2", 1),
            ("gamma_1_1", 0), ("gamma_2_1", 1), ("gamma_1_2", 1), ("gamma_2_2", 0),
        ];
        // M_1 = [s, -t], evaluated at s=1, t=0 for the full-rank block
        let mut point = vec![
            ("a_1_1_1_1", 1), ("a_1_1_2_0", -1), ("s", 1), ("t", 0),
            ("b_1_1_1", 1), ("c_1_1_1", 1), ("c_1_2_2", 1),
        ];
        // free witnesses R_{1,2} = M_1(pt) P_2
        point.extend([
            ("r_u_1_2_1_1", 0), ("r_u_1_2_1_2", -1),
            ("r_v_1_2_1_1", 0), ("r_v_1_2_1_2", -1),
            ("r_w_1_2_1_1", 0), ("r_w_1_2_1_2", 1),
        ]);
        let b = assemble_system(&i, &split, &BuildOptions::default());
        assert_eq!(residuals(&b, &point, &params), Vec::<String>::new());
        let (core, _) = b.degree_audit();
        assert!(core <= 3);
        // the same system without the a-coefficients is inconsistent
        let mut bad = point.clone();
        bad.retain(|(n, _)| !n.starts_with("a_"));
        assert!(!residuals(&b, &bad, &params).is_empty());
    }

    #[test]
    fn d0_fl3_vanishing_system_is_inconsistent() {
        let i = inst(vec![0, 0], &[2, 1, 3], &[2, 1, 3], &[2, 1, 3]);
        let gf = crate::algebra::PrimeField::new(1_000_000_007);
        for mode in [BuildMode::Pruned, BuildMode::ChainElim] {
            let b = assemble_system(&i, &DegreeSplit::zero(3), &BuildOptions { mode, per_h_st: false });
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
            let vals: HashMap<VarId, u64> =
                b.system.parameters().into_iter().map(|v| (v, gf.random_elem(&mut rng))).collect();
            let sys = b.system.specialize(gf, &vals, &OrderChoice::GRevLex, |c| gf.from_rational(c)).unwrap();
            let (pre, _) = sys.presolve(64);
            assert!(pre.contains_one(&GbConfig::default()).unwrap().0, "{mode:?}");
        }
    }

    #[test]
    fn factored_blocks_match_registered_factors() {
        let i = inst(vec![0, 0], &[2, 1, 3], &[1, 3, 2], &[2, 1, 3]);
        let b = assemble_system(&i, &DegreeSplit::zero(3), &BuildOptions { mode: BuildMode::Unpruned, per_h_st: false });
        let blocks = factored_blocks(&i, BuildMode::Unpruned);
        let reg = &b.ring().registry;
        let xs: usize = blocks.iter().map(|(_, i, _, r)| i * r).sum();
        let ys: usize = blocks.iter().map(|(_, _, j, r)| r * j).sum();
        assert_eq!(xs, reg.count_family("x"));
        assert_eq!(ys, reg.count_family("y"));
        for &(s, i, j, r) in &blocks {
            assert!(reg.get(&factor_var("x", s, i, j, i, r)).is_some());
            assert!(reg.get(&factor_var("y", s, i, j, r, j)).is_some());
        }
        assert!(blocks.contains(&(Sigma::U, 3, 3, 3)));
        assert!(factored_blocks(&i, BuildMode::Pruned).len() < blocks.len());
    }

    #[test]
    fn sidecar_and_text_are_deterministic() {
        let i = inst(vec![1], &[2, 1], &[2, 1], &[2, 1]);
        let split = DegreeSplit::new(vec![vec![1]]);
        let a = assemble_system(&i, &split, &BuildOptions::default());
        let b = assemble_system(&i, &split, &BuildOptions::default());
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.sidecar_json(), b.sidecar_json());
        assert!(a.sidecar_json().contains("\"class\": \"parameter\""));
    }

    #[test]
    fn hnpe_export_shapes() {
        let zero = GwInstance::complete(vec![0, 0], p(&[2, 1, 3]), p(&[2, 1, 3]), p(&[2, 1, 3])).unwrap();
        let h = export_hnpe(&zero).unwrap();
        assert!(h.exponent_vars.is_empty());
        assert_eq!(h.m, 0);
        assert!(h.polys.iter().all(|p| !p.contains("sum(")));

        let gr = GwInstance::new(
            crate::perm::FlagShape::new(3, vec![1]).unwrap(),
            vec![1],
            p(&[2, 1, 3]),
            p(&[2, 1, 3]),
            p(&[2, 1, 3]),
        )
        .unwrap();
        let h = export_hnpe(&gr).unwrap();
        assert_eq!(h.m, 1);
        assert_eq!(h.parameters.len(), 27);
        assert!(h.polys.iter().any(|p| p.contains("sum(m=0..d_1_1-d_2_1: a_1_1_1_{m}*s^m*t^(d_1_1-d_2_1-m))")));
        let json = serde_json::to_value(&h).unwrap();
        assert!(json.get("M").is_some() && json.get("linear_constraints").is_some());
    }
}
