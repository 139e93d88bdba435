//! Reduction of a partial-flag instance to a complete-flag instance: the
//! unique degree lift, the correction element `w'`, and the transformed
//! triple of coset representatives.

use serde::{Deserialize, Serialize};

use crate::error::InputError;
use crate::perm::{longest_in_transposition_subgroup, min_coset_rep, FlagShape, Permutation};

/// A three-point invariant `<[Y_u], [Y_v], [Y_w]>_d` on `F(a, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct GwInstance {
    pub shape: FlagShape,
    pub degree: Vec<u32>,
    pub u: Permutation,
    pub v: Permutation,
    pub w: Permutation,
}

/// Wire form: `{"n": int, "a": [int], "d": [int], "u": [int], "v": [int], "w": [int]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    a: Vec<usize>,
    d: Vec<u32>,
    u: Vec<usize>,
    v: Vec<usize>,
    w: Vec<usize>,
}

impl TryFrom<RawInstance> for GwInstance {
    type Error = InputError;
    fn try_from(raw: RawInstance) -> Result<Self, InputError> {
        let shape = FlagShape::new(raw.n, raw.a)?;
        let check = |field: &'static str, e: Vec<usize>| -> Result<Permutation, InputError> {
            if e.len() != raw.n {
                return Err(InputError::SizeMismatch { field, expected: raw.n, got: e.len() });
            }
            Permutation::new(e)
        };
        let u = check("u", raw.u)?;
        let v = check("v", raw.v)?;
        let w = check("w", raw.w)?;
        GwInstance::new(shape, raw.d, u, v, w)
    }
}

impl From<GwInstance> for RawInstance {
    fn from(g: GwInstance) -> Self {
        RawInstance {
            n: g.shape.n(),
            a: g.shape.a().to_vec(),
            d: g.degree,
            u: g.u.into(),
            v: g.v.into(),
            w: g.w.into(),
        }
    }
}

impl GwInstance {
    pub fn new(
        shape: FlagShape,
        degree: Vec<u32>,
        u: Permutation,
        v: Permutation,
        w: Permutation,
    ) -> Result<Self, InputError> {
        if degree.len() != shape.k() {
            return Err(InputError::DegreeLength { expected: shape.k(), got: degree.len() });
        }
        let n = shape.n();
        for (field, p) in [("u", &u), ("v", &v), ("w", &w)] {
            if p.n() != n {
                return Err(InputError::SizeMismatch { field, expected: n, got: p.n() });
            }
        }
        Ok(GwInstance { shape, degree, u, v, w })
    }

    /// Instance on the complete flag variety `F(n)`.
    pub fn complete(degree: Vec<u32>, u: Permutation, v: Permutation, w: Permutation) -> Result<Self, InputError> {
        let n = u.n();
        if n < 2 {
            return Err(InputError::TooSmall { n });
        }
        GwInstance::new(FlagShape::complete(n), degree, u, v, w)
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    /// `D = Σ d_i`.
    pub fn total_degree(&self) -> u32 {
        self.degree.iter().sum()
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }
}

/// An instance on `F(n)` after reduction; `dhat` has length `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompleteInstance {
    pub n: usize,
    pub dhat: Vec<u32>,
    pub u: Permutation,
    pub v: Permutation,
    pub w: Permutation,
}

impl CompleteInstance {
    /// `d̂_i` with the boundary convention `d̂_0 = d̂_n = 0`.
    pub fn dhat_at(&self, i: usize) -> u32 {
        if i == 0 || i >= self.n {
            0
        } else {
            self.dhat[i - 1]
        }
    }

    pub fn perms(&self) -> [&Permutation; 3] {
        [&self.u, &self.v, &self.w]
    }

    pub fn to_gw_instance(&self) -> GwInstance {
        GwInstance::complete(self.dhat.clone(), self.u.clone(), self.v.clone(), self.w.clone())
            .expect("complete instances are valid")
    }
}

fn window_value(dhat: &[u32], i: usize, j: usize) -> i64 {
    let at = |k: usize| -> i64 {
        if k == 0 || k > dhat.len() {
            0
        } else {
            dhat[k - 1] as i64
        }
    };
    -at(i - 1) + at(i) + at(j) - at(j + 1)
}

/// `-d̂_{i-1} + d̂_i + d̂_j - d̂_{j+1}` for every interior window `(i, j)`.
pub fn window_values(shape: &FlagShape, dhat: &[u32]) -> Vec<((usize, usize), i64)> {
    shape
        .interior_windows()
        .into_iter()
        .map(|(i, j)| ((i, j), window_value(dhat, i, j)))
        .collect()
}

/// True when `dhat` extends `d` and every window value lies in `{0, -1}`.
pub fn is_valid_lift(shape: &FlagShape, d: &[u32], dhat: &[u32]) -> bool {
    dhat.len() + 1 == shape.n()
        && shape.a().iter().zip(d).all(|(&a, &di)| dhat[a - 1] == di)
        && window_values(shape, dhat).iter().all(|(_, v)| *v == 0 || *v == -1)
}

/// Every lift of `d` with entries in `[0, bound]`, by exhaustive search.
pub fn lifts_within(shape: &FlagShape, d: &[u32], bound: u32) -> Vec<Vec<u32>> {
    let n = shape.n();
    let mut dhat = vec![0u32; n - 1];
    let mut free = Vec::new();
    let mut fixed = vec![false; n - 1];
    for (&a, &di) in shape.a().iter().zip(d) {
        dhat[a - 1] = di;
        fixed[a - 1] = true;
    }
    for (k, f) in fixed.iter().enumerate() {
        if !f {
            free.push(k);
        }
    }
    let mut out = Vec::new();
    loop {
        if is_valid_lift(shape, d, &dhat) {
            out.push(dhat.clone());
        }
        // odometer over the free coordinates
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return out;
            }
            let k = free[pos];
            if dhat[k] < bound {
                dhat[k] += 1;
                break;
            }
            dhat[k] = 0;
            pos += 1;
        }
    }
}

/// The unique `d̂` with `d̂_{a_i} = d_i` and all window values in `{0, -1}`.
pub fn lift_degrees(shape: &FlagShape, d: &[u32]) -> Result<Vec<u32>, InputError> {
    if d.len() != shape.k() {
        return Err(InputError::DegreeLength { expected: shape.k(), got: d.len() });
    }
    let tight = d.iter().copied().max().unwrap_or(0);
    let mut found = lifts_within(shape, d, tight);
    if found.is_empty() {
        let total: u32 = d.iter().sum();
        if total > tight {
            found = lifts_within(shape, d, total);
        }
    }
    if found.len() == 1 {
        Ok(found.pop().unwrap())
    } else {
        Err(InputError::LiftNotUnique { a: shape.a().to_vec(), d: d.to_vec(), solutions: found.len() })
    }
}

/// Generators `(i, j + 1)` of the subgroup whose longest element is `w'`.
pub fn correction_generators(shape: &FlagShape, dhat: &[u32]) -> Vec<(usize, usize)> {
    let blocks = shape.blocks();
    window_values(shape, dhat)
        .into_iter()
        .filter(|(_, v)| *v == 0)
        .map(|((i, j), _)| {
            assert!(
                blocks.iter().any(|b| b.contains(&i) && b.contains(&(j + 1))),
                "generator ({i},{}) leaves its block",
                j + 1
            );
            (i, j + 1)
        })
        .collect()
}

/// `w'`: the longest element of the subgroup of `S_a` generated by the
/// transpositions `(i, j + 1)` whose window value is zero.
pub fn correction_element(shape: &FlagShape, dhat: &[u32]) -> Permutation {
    longest_in_transposition_subgroup(shape.n(), &correction_generators(shape, dhat))
}

pub fn reduce_to_complete(inst: &GwInstance) -> Result<CompleteInstance, InputError> {
    let shape = &inst.shape;
    let dhat = lift_degrees(shape, &inst.degree)?;
    let w_prime = correction_element(shape, &dhat);
    Ok(CompleteInstance {
        n: shape.n(),
        u: min_coset_rep(&inst.u, shape),
        v: min_coset_rep(&inst.v, shape),
        w: min_coset_rep(&inst.w, shape).compose(&w_prime),
        dhat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn complete_shape_lift_is_identity() {
        let s = FlagShape::complete(4);
        assert_eq!(lift_degrees(&s, &[2, 0, 1]).unwrap(), vec![2, 0, 1]);
        assert_eq!(correction_element(&s, &[2, 0, 1]), Permutation::identity(4));
    }

    #[test]
    fn small_lifts() {
        let s = FlagShape::new(3, vec![1]).unwrap();
        assert_eq!(lift_degrees(&s, &[1]).unwrap(), vec![1, 0]);
        let s2 = FlagShape::new(3, vec![2]).unwrap();
        assert_eq!(lift_degrees(&s2, &[1]).unwrap(), vec![0, 1]);
        assert!(lift_degrees(&s, &[1, 1]).is_err());
    }

    #[test]
    fn correction_elements() {
        let s = FlagShape::new(3, vec![1]).unwrap();
        assert_eq!(correction_element(&s, &[1, 0]), Permutation::identity(3));
        assert_eq!(correction_element(&s, &[0, 0]), p(&[1, 3, 2]));
    }

    #[test]
    fn reductions() {
        let s = FlagShape::new(3, vec![1]).unwrap();
        let t = p(&[2, 1, 3]);
        let inst = GwInstance::new(s.clone(), vec![1], t.clone(), t.clone(), t.clone()).unwrap();
        let c = reduce_to_complete(&inst).unwrap();
        assert_eq!(c.dhat, vec![1, 0]);
        assert_eq!((c.u.clone(), c.v.clone(), c.w.clone()), (t.clone(), t.clone(), t.clone()));

        let inst0 = GwInstance::new(s, vec![0], t.clone(), t.clone(), t.clone()).unwrap();
        assert_eq!(reduce_to_complete(&inst0).unwrap().w, p(&[2, 3, 1]));

        let full = GwInstance::complete(vec![1, 0], p(&[3, 1, 2]), t.clone(), p(&[3, 1, 2])).unwrap();
        let c = reduce_to_complete(&full).unwrap();
        assert_eq!(c.to_gw_instance(), full);
    }

    #[test]
    fn zero_degree_gives_longest_of_young_subgroup() {
        for n in 2..=5usize {
            for mask in 1u32..(1 << (n - 1)) {
                let a: Vec<usize> = (1..n).filter(|&i| mask & (1 << (i - 1)) != 0).collect();
                let s = FlagShape::new(n, a.clone()).unwrap();
                let dhat = lift_degrees(&s, &vec![0; a.len()]).unwrap();
                assert!(dhat.iter().all(|&x| x == 0));
                // longest element of S_a by brute force: max length among
                // permutations preserving every block
                let blocks = s.blocks();
                let longest = Permutation::all(n)
                    .into_iter()
                    .filter(|x| blocks.iter().all(|b| (b.clone()).all(|i| b.contains(&x.at(i)))))
                    .max_by_key(|x| x.length())
                    .unwrap();
                assert_eq!(correction_element(&s, &dhat), longest);
            }
        }
    }

    #[test]
    fn json_schema() {
        let inst = GwInstance::from_json(r#"{"n":2,"a":[1],"d":[1],"u":[2,1],"v":[2,1],"w":[2,1]}"#).unwrap();
        assert_eq!(inst.total_degree(), 1);
        assert_eq!(GwInstance::from_json(&inst.to_json()).unwrap(), inst);
        let err = GwInstance::from_json(r#"{"n":3,"a":[1],"d":[1,0],"u":[1,2,3],"v":[1,2,3],"w":[1,2,3]}"#);
        assert!(matches!(err, Err(InputError::Malformed(m)) if m.contains("length 2") && m.contains("length 1")));
        let err = GwInstance::from_json(r#"{"n":2,"a":[1],"d":[1],"u":[1,1],"v":[2,1],"w":[2,1]}"#);
        assert!(matches!(err, Err(InputError::Malformed(m)) if m.contains("bijection")));
        assert!(GwInstance::from_json(r#"{"n":1,"a":[],"d":[],"u":[1],"v":[1],"w":[1]}"#).is_err());
        assert!(GwInstance::from_json("{nope").is_err());
    }
}
