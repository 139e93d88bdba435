//! Buchberger's algorithm with the Gebauer–Möller criteria and sugar
//! selection.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{sub_scaled_owned, PolyRing, Polynomial, Term};
use crate::error::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbConfig {
    /// Maximum number of S-polynomial reductions before giving up.
    pub max_reductions: usize,
    /// Stop as soon as a nonzero constant appears.
    pub stop_on_unit: bool,
    /// Interreduce the final basis.
    pub interreduce: bool,
    /// Maximum number of term operations across all reductions. Unlike a
    /// wall-clock limit this keeps outcomes independent of machine speed.
    pub max_term_ops: u64,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig { max_reductions: 200_000, stop_on_unit: true, interreduce: true, max_term_ops: u64::MAX }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GbStats {
    pub reductions: usize,
    pub zero_reductions: usize,
    pub pairs_created: usize,
    pub max_basis: usize,
    pub term_ops: u64,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    pub basis: Vec<Polynomial<F>>,
    pub stats: GbStats,
}

impl<F: Field> GroebnerBasis<F> {
    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| p.is_unit())
    }
}

struct Entry<F: Field> {
    terms: Vec<Term<F>>,
    sugar: u32,
}

impl<F: Field> Entry<F> {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }
}

struct Engine<'a, F: Field> {
    f: &'a F,
    ord: &'a MonomialOrder,
    polys: Vec<Entry<F>>,
    active: Vec<usize>,
    /// `(sugar, lcm degree, j, i)` with `i < j`, mapped to the lcm.
    pairs: BTreeMap<(u32, u32, usize, usize), Monomial>,
    stats: GbStats,
    max_term_ops: u64,
}

impl<'a, F: Field> Engine<'a, F> {
    fn find_reducer(&self, m: &Monomial) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &k in &self.active {
            if m.divisible_by(self.polys[k].lm()) {
                match best {
                    Some(b) if self.polys[b].terms.len() <= self.polys[k].terms.len() => {}
                    _ => best = Some(k),
                }
            }
        }
        best
    }

    /// Reduces `p` by the active basis; with `full` the tail is reduced too.
    /// Returns the result and its sugar, or `None` once the term budget runs
    /// out.
    fn reduce(&mut self, mut p: Vec<Term<F>>, mut sugar: u32, full: bool) -> Option<(Vec<Term<F>>, u32)> {
        let mut out: Vec<Term<F>> = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let (lm, lc) = (&p[start].0, &p[start].1);
            match self.find_reducer(lm) {
                Some(k) => {
                    let g = &self.polys[k];
                    let m = lm.div(g.lm());
                    let c = self.f.div(lc, &g.terms[0].1);
                    sugar = sugar.max(m.degree() + g.sugar);
                    self.stats.term_ops += (p.len() - start + g.terms.len()) as u64;
                    if self.stats.term_ops > self.max_term_ops {
                        return None;
                    }
                    let len = p.len() - start;
                    p = sub_scaled_owned(self.f, self.ord, p.drain(start..), len, &c, &m, &g.terms);
                    start = 0;
                }
                None => {
                    if !full {
                        out.extend_from_slice(&p[start..]);
                        return Some((out, sugar));
                    }
                    out.push(p[start].clone());
                    start += 1;
                }
            }
        }
        Some((out, sugar))
    }

    fn normalize(&self, terms: Vec<Term<F>>) -> Vec<Term<F>> {
        if terms.is_empty() || self.f.is_one(&terms[0].1) {
            return terms;
        }
        let inv = self.f.inv(&terms[0].1);
        terms.into_iter().map(|(m, c)| (m, self.f.mul(&c, &inv))).collect()
    }

    fn spoly(&self, i: usize, j: usize) -> (Vec<Term<F>>, u32) {
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let l = a.lm().lcm(b.lm());
        let ma = l.div(a.lm());
        let mb = l.div(b.lm());
        let sugar = (ma.degree() + a.sugar).max(mb.degree() + b.sugar);
        // both inputs are monic
        let lhs: Vec<Term<F>> = a.terms[1..].iter().map(|(m, c)| (m.mul(&ma), c.clone())).collect();
        let one = self.f.one();
        let len = lhs.len();
        (sub_scaled_owned(self.f, self.ord, lhs.into_iter(), len, &one, &mb, &b.terms[1..]), sugar)
    }

    fn pair_key(&self, i: usize, j: usize) -> (u32, u32, usize, usize) {
        let (a, b) = (&self.polys[i], &self.polys[j]);
        let l = a.lm().lcm(b.lm());
        let sugar = (l.degree() - a.lm().degree() + a.sugar).max(l.degree() - b.lm().degree() + b.sugar);
        (sugar, l.degree(), j.max(i), j.min(i))
    }

    /// Adds a monic, reduced polynomial and updates the pair set.
    fn insert(&mut self, terms: Vec<Term<F>>, sugar: u32) {
        let h = self.polys.len();
        self.polys.push(Entry { terms, sugar });
        let lm_h = self.polys[h].lm().clone();

        // candidate pairs (g, h)
        let cand: Vec<(usize, Monomial)> = self.active.iter().map(|&g| (g, self.polys[g].lm().lcm(&lm_h))).collect();

        // chain criterion among the new pairs
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for (idx, (g, l)) in cand.iter().enumerate() {
            let coprime = self.polys[*g].lm().is_coprime(&lm_h);
            let dominated = !coprime
                && cand.iter().enumerate().any(|(k, (_, l2))| {
                    k != idx && l.divisible_by(l2) && (l != l2 || k < idx)
                });
            if !dominated {
                kept.push((*g, l.clone(), coprime));
            }
        }

        self.stats.term_ops += (self.pairs.len() / 8 + cand.len() * cand.len() / 32) as u64;

        // old pairs whose lcm is divisible by lm(h) strictly
        let polys = &self.polys;
        self.pairs.retain(|&(_, _, j, i), l| {
            !l.divisible_by(&lm_h) || polys[i].lm().lcm(&lm_h) == *l || polys[j].lm().lcm(&lm_h) == *l
        });

        // product criterion
        for (g, l, coprime) in kept {
            if !coprime {
                self.pairs.insert(self.pair_key(g, h), l);
                self.stats.pairs_created += 1;
            }
        }

        self.active.retain(|&g| !self.polys[g].lm().divisible_by(&lm_h));
        self.active.push(h);
        self.stats.max_basis = self.stats.max_basis.max(self.active.len());
    }
}

fn unit_basis<F: Field>(ring: &Arc<PolyRing<F>>, stats: GbStats) -> GroebnerBasis<F> {
    GroebnerBasis { basis: vec![Polynomial::one(ring)], stats }
}

/// Computes a Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis<F: Field>(
    ring: &Arc<PolyRing<F>>,
    gens: &[Polynomial<F>],
    cfg: &GbConfig,
) -> Result<GroebnerBasis<F>, AlgebraError> {
    for g in gens {
        if !super::poly::same_ring(g.ring(), ring) {
            return Err(AlgebraError::RingMismatch);
        }
    }
    let f = &ring.field;
    let ord = &ring.order;
    let mut eng = Engine {
        f,
        ord,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: BTreeMap::new(),
        stats: GbStats::default(),
        max_term_ops: cfg.max_term_ops,
    };
    let exhausted = |eng: &Engine<F>| AlgebraError::BudgetExhausted { reductions: eng.stats.reductions };

    let mut inputs: Vec<&Polynomial<F>> = gens.iter().filter(|p| !p.is_zero()).collect();
    if cfg.stop_on_unit && inputs.iter().any(|p| p.is_unit()) {
        return Ok(unit_basis(ring, eng.stats));
    }
    // short, low-degree generators first
    inputs.sort_by_key(|p| (p.total_degree(), p.len()));
    for p in inputs {
        let sugar = p.total_degree();
        let Some((r, s)) = eng.reduce(p.terms().to_vec(), sugar, true) else { return Err(exhausted(&eng)) };
        if r.is_empty() {
            continue;
        }
        if cfg.stop_on_unit && r[0].0.is_one() {
            return Ok(unit_basis(ring, eng.stats));
        }
        let r = eng.normalize(r);
        eng.insert(r, s);
    }

    while let Some(key) = eng.pairs.pop_first() {
        if eng.stats.reductions >= cfg.max_reductions {
            return Err(exhausted(&eng));
        }
        let (_, _, j, i) = key.0;
        let (sp, sugar) = eng.spoly(i, j);
        eng.stats.reductions += 1;
        let Some((r, s)) = eng.reduce(sp, sugar, true) else { return Err(exhausted(&eng)) };
        if r.is_empty() {
            eng.stats.zero_reductions += 1;
            continue;
        }
        if cfg.stop_on_unit && r[0].0.is_one() {
            return Ok(unit_basis(ring, eng.stats));
        }
        let r = eng.normalize(r);
        eng.insert(r, s);
    }

    let mut basis_idx = eng.active.clone();
    basis_idx.sort_by(|&a, &b| ord.cmp(eng.polys[b].lm(), eng.polys[a].lm()));
    eng.max_term_ops = u64::MAX;
    let basis: Vec<Polynomial<F>> = if cfg.interreduce {
        let mut out = Vec::with_capacity(basis_idx.len());
        for &k in &basis_idx {
            let terms = eng.polys[k].terms.clone();
            let lead = terms[0].clone();
            let saved = std::mem::take(&mut eng.active);
            eng.active = saved.iter().copied().filter(|&g| g != k).collect();
            let (tail, _) = eng.reduce(terms[1..].to_vec(), 0, true).expect("unbounded");
            eng.active = saved;
            let mut t = vec![lead];
            t.extend(tail);
            out.push(Polynomial::from_sorted_terms(ring, eng.normalize(t)));
        }
        out
    } else {
        basis_idx.iter().map(|&k| Polynomial::from_sorted_terms(ring, eng.polys[k].terms.clone())).collect()
    };
    Ok(GroebnerBasis { basis, stats: eng.stats })
}

/// Remainder of `p` on division by `basis`.
pub fn normal_form<F: Field>(p: &Polynomial<F>, basis: &[Polynomial<F>]) -> Polynomial<F> {
    let ring = p.ring();
    let entries: Vec<Entry<F>> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| Entry { terms: b.terms().to_vec(), sugar: b.total_degree() })
        .collect();
    let mut eng = Engine {
        f: &ring.field,
        ord: &ring.order,
        active: (0..entries.len()).collect(),
        polys: entries,
        pairs: BTreeMap::new(),
        stats: GbStats::default(),
        max_term_ops: u64::MAX,
    };
    let (r, _) = eng.reduce(p.terms().to_vec(), 0, true).expect("unbounded");
    Polynomial::from_sorted_terms(ring, r)
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis<F: Field>(basis: &[Polynomial<F>]) -> bool {
    let nonzero: Vec<&Polynomial<F>> = basis.iter().filter(|b| !b.is_zero()).collect();
    for (a_idx, a) in nonzero.iter().enumerate() {
        for b in &nonzero[a_idx + 1..] {
            let la = a.leading_monomial().unwrap();
            let lb = b.leading_monomial().unwrap();
            let l = la.lcm(lb);
            let f = a.field();
            let sa = a.mul_monomial(&l.div(la)).scale(&f.inv(a.leading_coeff().unwrap()));
            let sb = b.mul_monomial(&l.div(lb)).scale(&f.inv(b.leading_coeff().unwrap()));
            let s = sa.sub(&sb).expect("same ring");
            if !normal_form(&s, basis).is_zero() {
                return false;
            }
        }
    }
    true
}
