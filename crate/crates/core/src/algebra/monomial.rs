//! Sparse monomials and monomial orders. Variable `0` is the largest
//! variable in every order.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

pub type VarId = u32;

type Exps = SmallVec<[(VarId, u32); 6]>;

/// A power product stored as `(variable, exponent)` pairs sorted by
/// variable, with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Exps,
    deg: u32,
    mask: u64,
}

#[inline]
fn bit(v: VarId) -> u64 {
    1u64 << (v % 64)
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: VarId) -> Self {
        Monomial::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: u32) -> Self {
        if e == 0 {
            return Monomial::one();
        }
        let mut exps = SmallVec::new();
        exps.push((v, e));
        Monomial { exps, deg: e, mask: bit(v) }
    }

    /// Builds from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs(pairs: &[(VarId, u32)]) -> Self {
        let mut v: Vec<(VarId, u32)> = pairs.iter().copied().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable();
        let mut exps: Exps = SmallVec::new();
        for (var, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => exps.push((var, e)),
            }
        }
        Monomial::from_sorted(exps)
    }

    fn from_sorted(exps: Exps) -> Self {
        let deg = exps.iter().map(|&(_, e)| e).sum();
        let mask = exps.iter().fold(0, |m, &(v, _)| m | bit(v));
        Monomial { exps, deg, mask }
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.exps.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out: Exps = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out, deg: self.deg + other.deg, mask: self.mask | other.mask }
    }

    /// True when `other` divides `self`.
    #[inline]
    pub fn divisible_by(&self, other: &Monomial) -> bool {
        if other.deg > self.deg || other.mask & !self.mask != 0 {
            return false;
        }
        let a = &self.exps;
        let mut i = 0;
        for &(v, e) in other.exps.iter() {
            while i < a.len() && a[i].0 < v {
                i += 1;
            }
            if i == a.len() || a[i].0 != v || a[i].1 < e {
                return false;
            }
            i += 1;
        }
        true
    }

    /// `self / other`, assuming divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out: Exps = SmallVec::new();
        let b = &other.exps;
        let mut j = 0;
        for &(v, e) in self.exps.iter() {
            if j < b.len() && b[j].0 == v {
                let r = e - b[j].1;
                if r > 0 {
                    out.push((v, r));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        debug_assert_eq!(j, b.len(), "monomial division with remainder");
        Monomial::from_sorted(out)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out: Exps = SmallVec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1.max(b[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial::from_sorted(out)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        if self.mask & other.mask == 0 {
            return true;
        }
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Drops variable `v` and returns its exponent.
    pub fn without(&self, v: VarId) -> (Monomial, u32) {
        match self.exps.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => {
                let mut exps = self.exps.clone();
                let (_, e) = exps.remove(i);
                (Monomial::from_sorted(exps), e)
            }
            Err(_) => (self.clone(), 0),
        }
    }

    /// Renames variables through `map` (which must be injective on the
    /// support); `None` entries are dropped from the support.
    pub fn remap(&self, map: &[Option<VarId>]) -> Monomial {
        let pairs: Vec<(VarId, u32)> =
            self.exps.iter().filter_map(|&(v, e)| map[v as usize].map(|w| (w, e))).collect();
        Monomial::from_pairs(&pairs)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Total orders on monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum MonomialOrder {
    Lex,
    GrLex,
    #[default]
    GRevLex,
    /// Product of graded reverse lexicographic orders on consecutive blocks
    /// of variables; `starts` lists the first variable of every block after
    /// the first, increasing.
    BlockGRevLex { starts: Vec<VarId> },
}


fn lex(a: &[(VarId, u32)], b: &[(VarId, u32)]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x.0 != y.0 {
            // the monomial containing the smaller-index variable is larger
            return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
        }
        if x.1 != y.1 {
            return x.1.cmp(&y.1);
        }
    }
    a.len().cmp(&b.len())
}

/// Reverse lexicographic tie-break for equal degrees.
fn revlex(a: &[(VarId, u32)], b: &[(VarId, u32)]) -> Ordering {
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 && j > 0 {
        let (x, y) = (a[i - 1], b[j - 1]);
        if x.0 != y.0 {
            // the one holding the later variable is smaller
            return if x.0 > y.0 { Ordering::Less } else { Ordering::Greater };
        }
        if x.1 != y.1 {
            return y.1.cmp(&x.1);
        }
        i -= 1;
        j -= 1;
    }
    // equal degrees make both exhausted here
    j.cmp(&i)
}

fn grevlex(a: &[(VarId, u32)], da: u32, b: &[(VarId, u32)], db: u32) -> Ordering {
    da.cmp(&db).then_with(|| revlex(a, b))
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(&a.exps, &b.exps),
            MonomialOrder::GrLex => a.deg.cmp(&b.deg).then_with(|| lex(&a.exps, &b.exps)),
            MonomialOrder::GRevLex => grevlex(&a.exps, a.deg, &b.exps, b.deg),
            MonomialOrder::BlockGRevLex { starts } => {
                let (mut lo_a, mut lo_b) = (0, 0);
                for k in 0..=starts.len() {
                    let (hi_a, hi_b) = match starts.get(k) {
                        Some(&s) => (
                            a.exps.partition_point(|&(v, _)| v < s),
                            b.exps.partition_point(|&(v, _)| v < s),
                        ),
                        None => (a.exps.len(), b.exps.len()),
                    };
                    let (sa, sb) = (&a.exps[lo_a..hi_a], &b.exps[lo_b..hi_b]);
                    let da: u32 = sa.iter().map(|p| p.1).sum();
                    let db: u32 = sb.iter().map(|p| p.1).sum();
                    let c = grevlex(sa, da, sb, db);
                    if c != Ordering::Equal {
                        return c;
                    }
                    lo_a = hi_a;
                    lo_b = hi_b;
                }
                Ordering::Equal
            }
        }
    }

    /// True for orders that compare total degree first.
    pub fn is_graded(&self) -> bool {
        matches!(self, MonomialOrder::GrLex | MonomialOrder::GRevLex)
            || matches!(self, MonomialOrder::BlockGRevLex { starts } if starts.is_empty())
    }
}
