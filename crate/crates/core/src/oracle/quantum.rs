use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::perm::Permutation;

/// `Σ c · q^d σ_w`, keyed by `(w, d)` with `d` of length `n - 1`; a
/// classical expansion has every `d` zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchubertExpansion {
    pub n: usize,
    pub terms: BTreeMap<(Permutation, Vec<u32>), i64>,
}

impl SchubertExpansion {
    pub fn coeff(&self, w: &Permutation, d: &[u32]) -> i64 {
        self.terms.get(&(w.clone(), d.to_vec())).copied().unwrap_or(0)
    }

    /// Terms in key order, for serialization.
    pub fn entries(&self) -> Vec<ExpansionTerm> {
        self.terms.iter().map(|((w, d), c)| ExpansionTerm { w: w.clone(), q: d.clone(), coeff: *c }).collect()
    }

    /// The classical part, `q = 0`.
    pub fn classical(&self) -> BTreeMap<Permutation, i64> {
        self.terms.iter().filter(|((_, d), _)| d.iter().all(|&x| x == 0)).map(|((w, _), c)| (w.clone(), *c)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub w: Permutation,
    pub q: Vec<u32>,
    pub coeff: i64,
}

/// Quantum Monk rule: `σ_{s_r} * σ_w`.
pub fn quantum_monk(r: usize, w: &Permutation) -> SchubertExpansion {
    let n = w.n();
    assert!(1 <= r && r < n, "r must lie in [1, n-1]");
    let l = w.length() as i64;
    let mut out = SchubertExpansion { n, terms: BTreeMap::new() };
    for a in 1..=r {
        for b in r + 1..=n {
            let wt = w.swap_positions(a, b);
            let lt = wt.length() as i64;
            if lt == l + 1 {
                *out.terms.entry((wt, vec![0; n - 1])).or_insert(0) += 1;
            } else if lt == l + 1 - 2 * (b - a) as i64 {
                let mut d = vec![0; n - 1];
                for q in &mut d[a - 1..b - 1] {
                    *q = 1;
                }
                *out.terms.entry((wt, d)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// `<u, s_r, w>_d`: the coefficient of `q^d σ_{w0 w}` in `σ_{s_r} * σ_u`.
pub fn gw_divisor(u: &Permutation, r: usize, w: &Permutation, d: &[u32]) -> i64 {
    assert_eq!(d.len(), u.n() - 1, "degree vector must have length n - 1");
    quantum_monk(r, u).coeff(&w.poincare_dual(), d)
}

/// A cohomology class on `P^1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum P1Class {
    One,
    Pt,
}

/// Three-point invariants of `P^1`: `<pt,pt,pt>_1 = 1` and
/// `<1,1,pt>_0 = 1` up to order; every other value is zero.
pub fn p1_gw(a: P1Class, b: P1Class, c: P1Class, d: u32) -> i64 {
    let pts = [a, b, c].iter().filter(|&&x| x == P1Class::Pt).count();
    match (pts, d) {
        (3, 1) | (1, 0) => 1,
        _ => 0,
    }
}
