//! Permutations of `[n]` in one-line notation, rank functions, parabolic
//! cosets and longest elements of transposition-generated subgroups.
//!
//! Everything here is 1-indexed: `Permutation::entries()[i - 1]` is `w(i)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::InputError;

/// A permutation `w` of `[n]`, stored as `(w(1), ..., w(n))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(entries: Vec<usize>) -> Result<Self, InputError> {
        let n = entries.len();
        if n == 0 {
            return Err(InputError::EmptyPermutation);
        }
        let mut seen = vec![false; n + 1];
        for &e in &entries {
            if e == 0 || e > n || seen[e] {
                return Err(InputError::NotABijection { entries });
            }
            seen[e] = true;
        }
        Ok(Permutation(entries))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// The longest element `w0 = (n, n-1, ..., 1)`.
    pub fn longest(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    /// The adjacent transposition `s_r` swapping `r` and `r + 1`.
    pub fn simple_transposition(n: usize, r: usize) -> Self {
        assert!(r >= 1 && r < n, "s_{r} is not defined in S_{n}");
        let mut e: Vec<usize> = (1..=n).collect();
        e.swap(r - 1, r);
        Permutation(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// `w(i)` for `1 <= i <= n`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e == i + 1)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let e = &self.0;
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if e[i] > e[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&i| self.0[i - 1]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &e) in self.0.iter().enumerate() {
            inv[e - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `w0 ∘ w`, the index of the Poincaré dual Schubert class.
    pub fn poincare_dual(&self) -> Permutation {
        let n = self.n();
        Permutation(self.0.iter().map(|&e| n + 1 - e).collect())
    }

    /// `w · t_{ab}`: swaps the entries in positions `a` and `b`.
    pub fn swap_positions(&self, a: usize, b: usize) -> Permutation {
        let mut e = self.0.clone();
        e.swap(a - 1, b - 1);
        Permutation(e)
    }

    /// Embeds `w` into `S_m` (`m >= n`) by fixing `n+1..=m`.
    pub fn embed(&self, m: usize) -> Permutation {
        assert!(m >= self.n());
        let mut e = self.0.clone();
        e.extend(self.n() + 1..=m);
        Permutation(e)
    }

    /// Lehmer code: `c_i = #{j > i : w(j) < w(i)}`.
    pub fn code(&self) -> Vec<usize> {
        let e = &self.0;
        (0..e.len())
            .map(|i| e[i + 1..].iter().filter(|&&x| x < e[i]).count())
            .collect()
    }

    /// Inverse of [`Permutation::code`]; the result lives in the smallest
    /// `S_m` that can hold the code.
    pub fn from_code(code: &[usize]) -> Permutation {
        let mut m = code.len();
        for (i, &c) in code.iter().enumerate() {
            m = m.max(i + c + 1);
        }
        let m = m.max(1);
        let mut avail: Vec<usize> = (1..=m).collect();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let c = code.get(i).copied().unwrap_or(0);
            out.push(avail.remove(c));
        }
        Permutation(out)
    }

    /// Drops trailing fixed points (but keeps at least one entry).
    pub fn trimmed(&self) -> Permutation {
        let mut e = self.0.clone();
        while e.len() > 1 && *e.last().unwrap() == e.len() {
            e.pop();
        }
        Permutation(e)
    }

    /// All permutations of `[n]` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    pub fn rank_table(&self) -> RankTable {
        RankTable::of(self)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = InputError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// `r_w(i, j) = |{h <= i : w(h) <= j}|` for `i, j` in `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    n: usize,
    r: Vec<usize>,
}

impl RankTable {
    pub fn of(w: &Permutation) -> Self {
        let n = w.n();
        let mut r = vec![0; n * n];
        for i in 1..=n {
            for j in 1..=n {
                let prev = if i > 1 { r[(i - 2) * n + (j - 1)] } else { 0 };
                r[(i - 1) * n + (j - 1)] = prev + usize::from(w.at(i) <= j);
            }
        }
        RankTable { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.r[(i - 1) * self.n + (j - 1)]
    }

    /// True when the bound `rank <= r(i, j)` is implied by the shape of an
    /// `i × j` matrix.
    pub fn is_vacuous(&self, i: usize, j: usize) -> bool {
        self.get(i, j) >= i.min(j)
    }
}

/// The parabolic shape `0 < a_1 < ... < a_k < n` of a partial flag variety.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagShape {
    n: usize,
    a: Vec<usize>,
}

impl FlagShape {
    pub fn new(n: usize, a: Vec<usize>) -> Result<Self, InputError> {
        if n < 2 {
            return Err(InputError::TooSmall { n });
        }
        if a.is_empty() {
            return Err(InputError::EmptyShape);
        }
        let mut prev = 0;
        for &x in &a {
            if x <= prev || x >= n {
                return Err(InputError::BadShape { n, a });
            }
            prev = x;
        }
        Ok(FlagShape { n, a })
    }

    pub fn complete(n: usize) -> Self {
        assert!(n >= 2);
        FlagShape { n, a: (1..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.a.len()
    }

    pub fn is_complete(&self) -> bool {
        self.a.len() == self.n - 1
    }

    /// `a_0 = 0, a_1, ..., a_k, a_{k+1} = n`.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut b = Vec::with_capacity(self.a.len() + 2);
        b.push(0);
        b.extend_from_slice(&self.a);
        b.push(self.n);
        b
    }

    /// Position blocks `(a_h, a_{h+1}]` as inclusive 1-indexed ranges.
    pub fn blocks(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        self.boundaries().windows(2).map(|w| (w[0] + 1)..=w[1]).collect()
    }

    /// Every pair `(i, j)` with `a_h < i <= j < a_{h+1}` for some `0 <= h <= k`.
    pub fn interior_windows(&self) -> Vec<(usize, usize)> {
        let b = self.boundaries();
        let mut out = Vec::new();
        for w in b.windows(2) {
            for i in w[0] + 1..w[1] {
                for j in i..w[1] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// The representative of `w·S_a` whose values increase inside every block.
pub fn min_coset_rep(w: &Permutation, shape: &FlagShape) -> Permutation {
    assert_eq!(w.n(), shape.n(), "shape and permutation disagree on n");
    let mut e = w.0.clone();
    for block in shape.blocks() {
        e[block.start() - 1..*block.end()].sort_unstable();
    }
    Permutation(e)
}

/// Maximal-length element of the subgroup generated by the given
/// transpositions: on each connected component of the transposition graph
/// the `m`-th smallest point is sent to the `m`-th largest.
pub fn longest_in_transposition_subgroup(n: usize, gens: &[(usize, usize)]) -> Permutation {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for &(i, j) in gens {
        assert!(i >= 1 && i <= n && j >= 1 && j <= n && i != j, "({i},{j}) is not a transposition of [{n}]");
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
        }
    }
    let mut components: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for x in 1..=n {
        let r = find(&mut parent, x);
        components[r].push(x);
    }
    let mut e: Vec<usize> = (1..=n).collect();
    for comp in components.iter().filter(|c| c.len() > 1) {
        // comp is already sorted ascending
        for (m, &p) in comp.iter().enumerate() {
            e[p - 1] = comp[comp.len() - 1 - m];
        }
    }
    Permutation(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn brute_length(w: &Permutation) -> usize {
        let e = w.entries();
        let mut c = 0;
        for i in 0..e.len() {
            for j in 0..e.len() {
                if i < j && e[i] > e[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Closure of the generators under composition.
    fn brute_subgroup(n: usize, gens: &[(usize, usize)]) -> BTreeSet<Permutation> {
        let gens: Vec<Permutation> = gens
            .iter()
            .map(|&(i, j)| Permutation::identity(n).swap_positions(i, j))
            .collect();
        let mut seen = BTreeSet::new();
        let mut frontier = vec![Permutation::identity(n)];
        seen.insert(Permutation::identity(n));
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x.compose(g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(3).length(), 0);
        assert_eq!(p(&[3, 2, 1]).length(), 3);
        assert_eq!(p(&[2, 1, 3]).length(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    #[test]
    fn rank_tables() {
        let id = Permutation::identity(3).rank_table();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(id.get(i, j), i.min(j));
            }
        }
        let r = p(&[2, 1, 3]).rank_table();
        assert_eq!((r.get(1, 1), r.get(1, 2), r.get(2, 1), r.get(2, 2)), (0, 1, 1, 2));
    }

    #[test]
    fn rank_table_invariants_exhaustive() {
        for n in 1..=6 {
            for w in Permutation::all(n) {
                let r = w.rank_table();
                for i in 1..=n {
                    for j in 1..=n {
                        let v = r.get(i, j);
                        let direct = (1..=i).filter(|&h| w.at(h) <= j).count();
                        assert_eq!(v, direct);
                        assert!(v <= i.min(j));
                        if i > 1 {
                            assert!(v - r.get(i - 1, j) <= 1);
                        }
                        if j > 1 {
                            assert!(v - r.get(i, j - 1) <= 1);
                        }
                    }
                    assert_eq!(r.get(n, i), i);
                    assert_eq!(r.get(i, n), i);
                }
            }
        }
    }

    #[test]
    fn composition_and_inverse() {
        let id = Permutation::identity(3);
        let v = p(&[1, 3, 2]);
        assert_eq!(id.compose(&v), v);
        assert_eq!(p(&[2, 1, 3]).compose(&v), p(&[2, 3, 1]));
        for w in Permutation::all(4) {
            assert_eq!(w.compose(&w.inverse()), Permutation::identity(4));
        }
    }

    #[test]
    fn duals() {
        assert_eq!(Permutation::identity(3).poincare_dual(), p(&[3, 2, 1]));
        assert_eq!(p(&[3, 2, 1]).poincare_dual(), Permutation::identity(3));
        assert_eq!(p(&[1, 3, 2]).poincare_dual(), p(&[3, 1, 2]));
        for n in 1..=5 {
            for w in Permutation::all(n) {
                assert_eq!(w.length(), brute_length(&w));
                assert_eq!(w.length() + w.poincare_dual().length(), n * (n - 1) / 2);
            }
        }
    }

    #[test]
    fn codes_round_trip() {
        for n in 1..=5 {
            for w in Permutation::all(n) {
                assert_eq!(Permutation::from_code(&w.code()).embed(n.max(1)).trimmed(), w.trimmed());
            }
        }
    }

    #[test]
    fn coset_representatives() {
        let shape = FlagShape::new(3, vec![1]).unwrap();
        assert_eq!(min_coset_rep(&p(&[2, 3, 1]), &shape), p(&[2, 1, 3]));
        let full = FlagShape::complete(4);
        for w in Permutation::all(4) {
            assert_eq!(min_coset_rep(&w, &full), w);
        }
        assert_eq!(min_coset_rep(&Permutation::identity(3), &shape), Permutation::identity(3));
    }

    fn all_shapes(n: usize) -> Vec<FlagShape> {
        (1u32..(1 << (n - 1)))
            .map(|mask| {
                let a = (1..n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
                FlagShape::new(n, a).unwrap()
            })
            .collect()
    }

    #[test]
    fn coset_rep_is_minimal_and_idempotent() {
        for n in 2..=5 {
            for shape in all_shapes(n) {
                // S_a generated by adjacent transpositions inside blocks
                let gens: Vec<(usize, usize)> = shape
                    .blocks()
                    .into_iter()
                    .flat_map(|b| (*b.start()..*b.end()).map(|i| (i, i + 1)))
                    .collect();
                let young = brute_subgroup(n, &gens);
                for w in Permutation::all(n) {
                    let rep = min_coset_rep(&w, &shape);
                    assert_eq!(min_coset_rep(&rep, &shape), rep);
                    let coset: Vec<Permutation> = young.iter().map(|g| w.compose(g)).collect();
                    assert!(coset.contains(&rep));
                    assert!(coset.iter().all(|x| rep.length() <= x.length()));
                }
            }
        }
    }

    #[test]
    fn longest_elements() {
        assert_eq!(longest_in_transposition_subgroup(3, &[]), Permutation::identity(3));
        assert_eq!(longest_in_transposition_subgroup(3, &[(2, 3)]), p(&[1, 3, 2]));
        assert_eq!(longest_in_transposition_subgroup(4, &[(1, 2), (2, 3)]), p(&[3, 2, 1, 4]));
    }

    #[test]
    fn longest_matches_brute_force() {
        for n in 2..=5 {
            let transpositions: Vec<(usize, usize)> =
                (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let t = transpositions.len();
            for a in 0..t {
                for b in a..t {
                    for c in b..t {
                        let mut gens = vec![transpositions[a], transpositions[b], transpositions[c]];
                        gens.dedup();
                        for size in 0..=gens.len() {
                            let g = &gens[..size];
                            let group = brute_subgroup(n, g);
                            let max_len = group.iter().map(|x| x.length()).max().unwrap();
                            let longest: Vec<_> = group.iter().filter(|x| x.length() == max_len).collect();
                            assert_eq!(longest.len(), 1);
                            assert_eq!(&longest_in_transposition_subgroup(n, g), longest[0]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shape_validation() {
        assert!(FlagShape::new(3, vec![2, 1]).is_err());
        assert!(FlagShape::new(3, vec![3]).is_err());
        assert!(FlagShape::new(3, vec![0]).is_err());
        assert!(FlagShape::new(1, vec![]).is_err());
        let s = FlagShape::new(5, vec![2, 4]).unwrap();
        assert_eq!(s.blocks(), vec![1..=2, 3..=4, 5..=5]);
        assert_eq!(s.interior_windows(), vec![(1, 1), (3, 3)]);
    }
}
