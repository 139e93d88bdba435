//! Degree splittings `d_{h,i}` of a lifted degree vector, and the linear
//! constraint system they solve.

use serde::{Deserialize, Serialize};

use crate::error::SplitError;
use crate::perm::FlagShape;

/// Default cap on the number of splits an instance may produce.
pub const DEFAULT_SPLIT_CAP: usize = 10_000;

/// Rows `d_{h,1} <= ... <= d_{h,h}` for `h = 1, ..., n-1`; row `n` is
/// implicitly zero. Serializes as nested arrays, row-major by `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeSplit {
    rows: Vec<Vec<u32>>,
}

impl DegreeSplit {
    pub fn new(rows: Vec<Vec<u32>>) -> Self {
        for (h, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), h + 1, "row {} must have {} entries", h + 1, h + 1);
        }
        DegreeSplit { rows }
    }

    pub fn zero(n: usize) -> Self {
        DegreeSplit { rows: (1..n).map(|h| vec![0; h]).collect() }
    }

    /// Ambient `n` (the split has `n - 1` explicit rows).
    pub fn n(&self) -> usize {
        self.rows.len() + 1
    }

    /// `d_{h,i}` for `1 <= i <= h <= n`; row `n` is zero.
    pub fn get(&self, h: usize, i: usize) -> u32 {
        if h == self.n() {
            0
        } else {
            self.rows[h - 1][i - 1]
        }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn row_sums(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn max_entry(&self) -> u32 {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Weakly increasing sequences of length `parts` summing to `total`, in
/// lexicographic order.
fn increasing_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if slots == 1 {
            if remaining >= min {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let mut x = min;
        // the remaining slots all hold at least x
        while x as u64 * slots as u64 <= remaining as u64 {
            cur.push(x);
            rec(remaining - x, slots - 1, x, cur, out);
            cur.pop();
            x += 1;
        }
    }
    let mut out = Vec::new();
    rec(total, parts, 0, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Partitions of `m` into at most `k` parts.
fn partitions_at_most(m: u32, k: usize) -> u128 {
    // p[j][x]: partitions of x into parts of size <= j (conjugate count)
    let m = m as usize;
    let mut p = vec![0u128; m + 1];
    p[0] = 1;
    for part in 1..=k {
        for x in part..=m {
            p[x] += p[x - part];
        }
    }
    p[m]
}

/// `∏_h p_{<=h}(d̂_h)`.
pub fn count_splits(dhat: &[u32]) -> u128 {
    dhat.iter()
        .enumerate()
        .map(|(idx, &d)| partitions_at_most(d, idx + 1))
        .product()
}

/// All splits of `dhat` in lexicographic order (row 1 most significant),
/// or an error when there are more than `cap`.
pub fn enumerate_splits_capped(dhat: &[u32], cap: usize) -> Result<Vec<DegreeSplit>, SplitError> {
    let count = count_splits(dhat);
    if count > cap as u128 {
        return Err(SplitError::TooManySplits { count, cap });
    }
    let per_row: Vec<Vec<Vec<u32>>> = dhat
        .iter()
        .enumerate()
        .map(|(idx, &d)| increasing_compositions(d, idx + 1))
        .collect();
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; per_row.len()];
    loop {
        out.push(DegreeSplit { rows: idx.iter().zip(&per_row).map(|(&i, r)| r[i].clone()).collect() });
        let mut pos = per_row.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < per_row[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

pub fn enumerate_splits(dhat: &[u32]) -> Result<Vec<DegreeSplit>, SplitError> {
    enumerate_splits_capped(dhat, DEFAULT_SPLIT_CAP)
}

/// One row `a · z <= b` of a linear system over the exponent variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub a: Vec<i64>,
    pub b: i64,
}

/// The integer system for `(d̂, d_{h,i})`. Variables are laid out as
/// `d̂_1, ..., d̂_{n-1}` followed by `d_{1,1}, d_{2,1}, d_{2,2}, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSystem {
    pub n: usize,
    pub names: Vec<String>,
    pub rows: Vec<LinearConstraint>,
    pub bound: u32,
}

impl SplitSystem {
    pub fn build(shape: &FlagShape, d: &[u32]) -> SplitSystem {
        let n = shape.n();
        let m = n - 1;
        let nvars = m + m * (m + 1) / 2;
        let dhat_var = |i: usize| i - 1;
        let split_var = |h: usize, i: usize| m + (h - 1) * h / 2 + (i - 1);
        let mut names: Vec<String> = (1..=m).map(|i| format!("dhat_{i}")).collect();
        for h in 1..=m {
            for i in 1..=h {
                names.push(format!("d_{h}_{i}"));
            }
        }
        let mut rows = Vec::new();
        let mut push = |coeffs: &[(usize, i64)], b: i64| {
            let mut a = vec![0; nvars];
            for &(v, c) in coeffs {
                a[v] += c;
            }
            rows.push(LinearConstraint { a, b });
        };
        // d̂_{a_h} = d_h
        for (&a, &dh) in shape.a().iter().zip(d) {
            push(&[(dhat_var(a), 1)], dh as i64);
            push(&[(dhat_var(a), -1)], -(dh as i64));
        }
        // -1 <= -d̂_{i-1} + d̂_i + d̂_j - d̂_{j+1} <= 0
        for (i, j) in shape.interior_windows() {
            let mut terms = Vec::new();
            if i > 1 {
                terms.push((dhat_var(i - 1), -1));
            }
            terms.push((dhat_var(i), 1));
            terms.push((dhat_var(j), 1));
            if j + 1 < n {
                terms.push((dhat_var(j + 1), -1));
            }
            push(&terms, 0);
            let neg: Vec<(usize, i64)> = terms.iter().map(|&(v, c)| (v, -c)).collect();
            push(&neg, 1);
        }
        // Σ_j d_{i,j} - d̂_i = 0
        for h in 1..=m {
            let mut terms: Vec<(usize, i64)> = (1..=h).map(|i| (split_var(h, i), 1)).collect();
            terms.push((dhat_var(h), -1));
            push(&terms, 0);
            let neg: Vec<(usize, i64)> = terms.iter().map(|&(v, c)| (v, -c)).collect();
            push(&neg, 0);
        }
        for h in 1..=m {
            push(&[(dhat_var(h), -1)], 0);
        }
        for h in 1..=m {
            for i in 1..=h {
                push(&[(split_var(h, i), -1)], 0);
            }
        }
        for h in 1..=m {
            for i in 1..h {
                push(&[(split_var(h, i), 1), (split_var(h, i + 1), -1)], 0);
            }
        }
        SplitSystem { n, names, rows, bound: d.iter().sum() }
    }

    /// Packs a lift and a split into the variable layout.
    pub fn point(dhat: &[u32], split: &DegreeSplit) -> Vec<i64> {
        let mut z: Vec<i64> = dhat.iter().map(|&x| x as i64).collect();
        for row in split.rows() {
            z.extend(row.iter().map(|&x| x as i64));
        }
        z
    }

    pub fn satisfied_by(&self, z: &[i64]) -> bool {
        z.len() == self.names.len()
            && z.iter().all(|&x| x >= 0 && x <= self.bound as i64)
            && self
                .rows
                .iter()
                .all(|r| r.a.iter().zip(z).map(|(a, x)| a * x).sum::<i64>() <= r.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::woodward::lift_degrees;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = enumerate_splits(&[0, 0, 0]).unwrap();
        assert_eq!(s, vec![DegreeSplit::zero(4)]);
        let s = enumerate_splits(&[1, 0]).unwrap();
        assert_eq!(s, vec![DegreeSplit::new(vec![vec![1], vec![0, 0]])]);
        let s = enumerate_splits(&[0, 2]).unwrap();
        assert_eq!(
            s,
            vec![DegreeSplit::new(vec![vec![0], vec![0, 2]]), DegreeSplit::new(vec![vec![0], vec![1, 1]])]
        );
        assert_eq!(count_splits(&[0, 0]), 1);
        assert_eq!(count_splits(&[0, 2]), 2);
        assert_eq!(count_splits(&[1, 1, 1]), 1);
        assert_eq!(count_splits(&[0, 0, 6]), 7);
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_splits_capped(&[0, 0, 6], 6).unwrap_err();
        assert_eq!(err, SplitError::TooManySplits { count: 7, cap: 6 });
        assert_eq!(enumerate_splits_capped(&[0, 0, 6], 7).unwrap().len(), 7);
    }

    #[test]
    fn json_layout() {
        let s = DegreeSplit::new(vec![vec![1], vec![0, 2]]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[1],[0,2]]");
        assert_eq!(s.get(3, 2), 0);
    }

    #[test]
    fn splits_satisfy_linear_system() {
        for n in 2..=5usize {
            for mask in 1u32..(1 << (n - 1)) {
                let a: Vec<usize> = (1..n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
                let shape = FlagShape::new(n, a.clone()).unwrap();
                for seed in 0..4u32 {
                    let d: Vec<u32> = (0..a.len()).map(|k| (seed + k as u32) % 3).collect();
                    let dhat = lift_degrees(&shape, &d).unwrap();
                    let sys = SplitSystem::build(&shape, &d);
                    let splits = enumerate_splits(&dhat).unwrap();
                    for s in &splits {
                        assert!(sys.satisfied_by(&SplitSystem::point(&dhat, s)), "{s:?}");
                    }
                    // brute force: every z in [0, D] solving the system is one of ours
                    let nv = sys.names.len();
                    let bound = sys.bound as i64;
                    if (bound + 1).pow(nv as u32) <= 200_000 {
                        let mut z = vec![0i64; nv];
                        let mut hits = 0;
                        'outer: loop {
                            if sys.satisfied_by(&z) {
                                hits += 1;
                                let dz: Vec<u32> = z[..n - 1].iter().map(|&x| x as u32).collect();
                                assert_eq!(dz, dhat);
                            }
                            for k in 0..nv {
                                if z[k] < bound {
                                    z[k] += 1;
                                    continue 'outer;
                                }
                                z[k] = 0;
                            }
                            break;
                        }
                        assert_eq!(hits, splits.len());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn count_matches_enumeration(dhat in prop::collection::vec(0u32..=4, 1..=5)) {
            let splits = enumerate_splits(&dhat).unwrap();
            prop_assert_eq!(count_splits(&dhat), splits.len() as u128);
            for s in &splits {
                prop_assert_eq!(s.row_sums(), dhat.clone());
                for r in s.rows() {
                    prop_assert!(r.windows(2).all(|w| w[0] <= w[1]));
                }
            }
            let mut sorted = splits.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &splits);
            prop_assert_eq!(enumerate_splits(&dhat).unwrap(), splits);
        }
    }
}
