use std::collections::{BTreeMap, HashMap};

use crate::perm::Permutation;

/// Integer polynomial in `x_1, x_2, ...`; keys are exponent vectors
/// without trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly(BTreeMap<Vec<u32>, i64>);

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl IntPoly {
    pub fn one() -> Self {
        IntPoly(BTreeMap::from([(Vec::new(), 1)]))
    }

    pub fn monomial(exps: Vec<u32>, c: i64) -> Self {
        let mut p = IntPoly::default();
        p.add_term(exps, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i64)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> i64 {
        self.0.get(&trim(exps.to_vec())).copied().unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: i64) {
        if c == 0 {
            return;
        }
        let key = trim(exps);
        let e = self.0.entry(key.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &IntPoly, c: i64) {
        for (e, k) in &other.0 {
            self.add_term(e.clone(), c * k);
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::default();
        for (a, ca) in &self.0 {
            for (b, cb) in &other.0 {
                let len = a.len().max(b.len());
                let e = (0..len).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `(f - s_i f) / (x_i - x_{i+1})`, with `i` 1-indexed.
    pub fn divided_difference(&self, i: usize) -> IntPoly {
        let mut out = IntPoly::default();
        for (e, &c) in &self.0 {
            let mut e = e.clone();
            if e.len() < i + 1 {
                e.resize(i + 1, 0);
            }
            let (p, q) = (e[i - 1], e[i]);
            let (hi, lo, sign) = if p >= q { (p, q, 1) } else { (q, p, -1) };
            for k in lo..hi {
                let mut f = e.clone();
                f[i - 1] = k;
                f[i] = hi + lo - 1 - k;
                out.add_term(f, sign * c);
            }
        }
        out
    }

    /// The leading monomial in reverse lexicographic order, the last
    /// variable being most significant.
    pub fn revlex_leading(&self) -> Option<(Vec<u32>, i64)> {
        self.0.iter().max_by(|a, b| revlex(a.0, b.0)).map(|(e, c)| (e.clone(), *c))
    }
}

fn revlex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let len = a.len().max(b.len());
    (0..len).rev().map(|i| a.get(i).unwrap_or(&0).cmp(b.get(i).unwrap_or(&0))).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// Memo table of Schubert polynomials in a fixed ambient `S_m`.
#[derive(Debug)]
pub struct SchubertCache {
    m: usize,
    table: HashMap<Permutation, IntPoly>,
}

impl SchubertCache {
    pub fn new(m: usize) -> Self {
        SchubertCache { m, table: HashMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Schubert polynomial of `w` (embedded into `S_m`).
    pub fn get(&mut self, w: &Permutation) -> IntPoly {
        let w = w.embed(self.m);
        self.compute(&w)
    }

    fn compute(&mut self, w: &Permutation) -> IntPoly {
        if let Some(p) = self.table.get(w) {
            return p.clone();
        }
        let m = self.m;
        let p = match (1..m).find(|&i| w.at(i) < w.at(i + 1)) {
            // w0: staircase x_1^{m-1} x_2^{m-2} ... x_{m-1}
            None => IntPoly::monomial((1..m).rev().map(|e| e as u32).collect(), 1),
            Some(i) => self.compute(&w.swap_positions(i, i + 1)).divided_difference(i),
        };
        self.table.insert(w.clone(), p.clone());
        p
    }

    /// Expansion of `f` in Schubert polynomials by repeatedly removing the
    /// leading monomial, whose exponent vector is a Lehmer code.
    pub fn expand(&mut self, f: &IntPoly) -> BTreeMap<Permutation, i64> {
        let mut rest = f.clone();
        let mut out = BTreeMap::new();
        while let Some((e, c)) = rest.revlex_leading() {
            let code: Vec<usize> = e.iter().map(|&x| x as usize).collect();
            let w = Permutation::from_code(&code);
            assert!(w.n() <= self.m, "expansion leaves S_{}", self.m);
            let s = self.compute(&w.embed(self.m));
            rest.add_scaled(&s, -c);
            out.insert(w.embed(self.m), c);
        }
        out
    }
}

/// The Schubert polynomial of `w` in `x_1, ..., x_{m-1}`.
pub fn schubert_poly(w: &Permutation, m: usize) -> IntPoly {
    SchubertCache::new(m).get(w)
}

/// `c_{u,v}^w`: the coefficient of `S_w` in `S_u · S_v`, computed in
/// `S_{2n}` so that the product expands without truncation.
pub fn struct_const(u: &Permutation, v: &Permutation, w: &Permutation) -> i64 {
    let mut cache = SchubertCache::new(2 * u.n());
    struct_const_in(&mut cache, u, v, w)
}

pub(crate) fn struct_const_in(cache: &mut SchubertCache, u: &Permutation, v: &Permutation, w: &Permutation) -> i64 {
    let prod = cache.get(u).mul(&cache.get(v));
    let m = cache.m();
    cache.expand(&prod).get(&w.embed(m)).copied().unwrap_or(0)
}

/// `<u, v, w>_0 = c_{u,v}^{w0 w}` on the complete flag variety of `C^n`.
pub fn gw_classical(u: &Permutation, v: &Permutation, w: &Permutation) -> i64 {
    struct_const(u, v, &w.poincare_dual())
}
