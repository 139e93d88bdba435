//! Variable registries, polynomial rings and sparse polynomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder, VarId};
use crate::error::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarClass {
    Unknown,
    Parameter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub class: VarClass,
    /// Free-form family tag (`"a"`, `"x"`, ...), used for block orders and
    /// the export sidecar.
    pub family: String,
}

/// Names and classes of the variables of a ring, indexed by [`VarId`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    vars: Vec<VarInfo>,
    by_name: HashMap<String, VarId>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registers a fresh variable. Panics on a duplicate name.
    pub fn add(&mut self, name: impl Into<String>, class: VarClass, family: impl Into<String>) -> VarId {
        let name = name.into();
        let id = self.vars.len() as VarId;
        let prev = self.by_name.insert(name.clone(), id);
        assert!(prev.is_none(), "variable `{name}` registered twice");
        self.vars.push(VarInfo { name, class, family: family.into() });
        id
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, v: VarId) -> &VarInfo {
        &self.vars[v as usize]
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.vars[v as usize].name
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarInfo)> {
        self.vars.iter().enumerate().map(|(i, v)| (i as VarId, v))
    }

    pub fn parameters(&self) -> Vec<VarId> {
        self.iter().filter(|(_, v)| v.class == VarClass::Parameter).map(|(i, _)| i).collect()
    }

    pub fn count_family(&self, family: &str) -> usize {
        self.vars.iter().filter(|v| v.family == family).count()
    }
}

/// A coefficient field, a variable registry and a monomial order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub registry: Registry,
    pub order: MonomialOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, registry: Registry, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { field, registry, order })
    }

    /// Ring over `field` with variables named `names`, all unknowns.
    pub fn with_vars(field: F, names: &[&str], order: MonomialOrder) -> Arc<Self> {
        let mut reg = Registry::new();
        for n in names {
            reg.add(*n, VarClass::Unknown, "");
        }
        PolyRing::new(field, reg, order)
    }

    /// Looks up a variable by name. Panics when absent.
    pub fn var(&self, name: &str) -> VarId {
        self.registry.get(name).unwrap_or_else(|| panic!("unknown variable `{name}`"))
    }
}

pub(crate) fn same_ring<F: Field>(a: &Arc<PolyRing<F>>, b: &Arc<PolyRing<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub type Term<F> = (Monomial, <F as Field>::Elem);

/// A sparse polynomial with terms strictly decreasing in the ring's order.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> std::hash::Hash for Polynomial<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state)
    }
}

/// `a + b` for term lists sorted decreasingly.
pub(crate) fn merge_add<F: Field>(f: &F, ord: &MonomialOrder, a: &[Term<F>], b: &[Term<F>]) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match ord.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = f.add(&a[i].1, &b[j].1);
                if !f.is_zero(&c) {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `a - c·m·b` for term lists sorted decreasingly.
pub(crate) fn sub_scaled<F: Field>(
    f: &F,
    ord: &MonomialOrder,
    a: &[Term<F>],
    c: &F::Elem,
    m: &Monomial,
    b: &[Term<F>],
) -> Vec<Term<F>> {
    sub_scaled_owned(f, ord, a.iter().cloned(), a.len(), c, m, b)
}

/// [`sub_scaled`] consuming the terms of `a`.
pub(crate) fn sub_scaled_owned<F: Field>(
    f: &F,
    ord: &MonomialOrder,
    a: impl Iterator<Item = Term<F>>,
    a_len: usize,
    c: &F::Elem,
    m: &Monomial,
    b: &[Term<F>],
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a_len + b.len());
    let mut a = a.peekable();
    for (bm, bc) in b {
        let pm = bm.mul(m);
        let mut pc = f.neg(&f.mul(c, bc));
        loop {
            let Some(head) = a.peek() else {
                out.push((pm, pc));
                break;
            };
            match ord.cmp(&head.0, &pm) {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => {
                    out.push((pm, pc));
                    break;
                }
                Ordering::Equal => {
                    let (am, ac) = a.next().unwrap();
                    pc = f.add(&ac, &pc);
                    if !f.is_zero(&pc) {
                        out.push((am, pc));
                    }
                    break;
                }
            }
        }
    }
    out.extend(a);
    out
}

/// Sorts, combines like terms and drops zeros.
pub(crate) fn canonicalize<F: Field>(f: &F, ord: &MonomialOrder, mut terms: Vec<Term<F>>) -> Vec<Term<F>> {
    terms.sort_by(|x, y| ord.cmp(&y.0, &x.0));
    let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 = f.add(&last.1, &c),
            _ => {
                if let Some(last) = out.last() {
                    if f.is_zero(&last.1) {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some(last) = out.last() {
        if f.is_zero(&last.1) {
            out.pop();
        }
    }
    out
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        let terms = if ring.field.is_zero(&c) { Vec::new() } else { vec![(Monomial::one(), c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn one(ring: &Arc<PolyRing<F>>) -> Self {
        Polynomial::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<PolyRing<F>>, v: VarId) -> Self {
        assert!((v as usize) < ring.registry.len(), "variable {v} not in registry");
        Polynomial { ring: ring.clone(), terms: vec![(Monomial::var(v), ring.field.one())] }
    }

    pub fn from_terms(ring: &Arc<PolyRing<F>>, terms: Vec<Term<F>>) -> Self {
        let terms = canonicalize(&ring.field, &ring.order, terms);
        Polynomial { ring: ring.clone(), terms }
    }

    /// Wraps an already canonical term list.
    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing<F>>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms.windows(2).all(|w| ring.order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || self.is_unit()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    /// Degree counting only variables for which `keep` holds.
    pub fn degree_in(&self, keep: impl Fn(VarId) -> bool) -> u32 {
        self.terms
            .iter()
            .map(|t| t.0.pairs().iter().filter(|(v, _)| keep(*v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut v: Vec<VarId> = self.terms.iter().flat_map(|t| t.0.vars()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let terms = merge_add(&self.ring.field, &self.ring.order, &self.terms, &other.terms);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let one = self.ring.field.one();
        let terms = sub_scaled(&self.ring.field, &self.ring.order, &self.terms, &one, &Monomial::one(), &other.terms);
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let f = &self.ring.field;
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: Vec<Term<F>> = Vec::new();
        for (m, c) in &small.terms {
            let prod: Vec<Term<F>> = big.terms.iter().map(|(bm, bc)| (bm.mul(m), f.mul(c, bc))).collect();
            acc = merge_add(f, &self.ring.order, &acc, &prod);
        }
        Ok(Polynomial { ring: self.ring.clone(), terms: acc })
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Polynomial::zero(&self.ring);
        }
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, d)| (m.clone(), f.mul(c, d))).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial { ring: self.ring.clone(), terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&self.ring.field.inv(lc)),
        }
    }

    /// Scales to an integral primitive polynomial over the rationals; the
    /// identity over prime fields.
    pub fn primitive(&self) -> Self {
        let coeffs: Vec<&F::Elem> = self.terms.iter().map(|t| &t.1).collect();
        match self.ring.field.content_normalizer(&coeffs) {
            Some(m) => self.scale(&m),
            None => self.clone(),
        }
    }

    /// Substitutes constants for some variables.
    pub fn substitute(&self, values: &HashMap<VarId, F::Elem>) -> Self {
        let f = &self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.pairs() {
                match values.get(&v) {
                    Some(val) => {
                        for _ in 0..e {
                            coeff = f.mul(&coeff, val);
                        }
                    }
                    None => rest.push((v, e)),
                }
            }
            if !f.is_zero(&coeff) {
                out.push((Monomial::from_pairs(&rest), coeff));
            }
        }
        Polynomial::from_terms(&self.ring, out)
    }

    /// Replaces variable `v` by the polynomial `value`.
    pub fn substitute_poly(&self, v: VarId, value: &Polynomial<F>) -> Self {
        let f = &self.ring.field;
        let mut powers: Vec<Polynomial<F>> = vec![Polynomial::one(&self.ring)];
        let mut acc: Vec<Term<F>> = Vec::new();
        let mut untouched: Vec<Term<F>> = Vec::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == 0 {
                untouched.push((m.clone(), c.clone()));
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul(value).expect("same ring");
                powers.push(next);
            }
            let prod: Vec<Term<F>> =
                powers[e as usize].terms.iter().map(|(pm, pc)| (pm.mul(&rest), f.mul(c, pc))).collect();
            let prod = canonicalize(f, &self.ring.order, prod);
            acc = merge_add(f, &self.ring.order, &acc, &prod);
        }
        let untouched = canonicalize(f, &self.ring.order, untouched);
        Polynomial { ring: self.ring.clone(), terms: merge_add(f, &self.ring.order, &acc, &untouched) }
    }

    /// Evaluates at a full point.
    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        let f = &self.ring.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                for _ in 0..e {
                    t = f.mul(&t, &point[v as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Moves the polynomial into `target`, renaming variables via `map` and
    /// converting coefficients with `conv`.
    pub fn transport<G: Field>(
        &self,
        target: &Arc<PolyRing<G>>,
        map: &[Option<VarId>],
        conv: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Result<Polynomial<G>, AlgebraError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            for v in m.vars() {
                if map[v as usize].is_none() {
                    return Err(AlgebraError::UnassignedParameter(self.ring.registry.name(v).to_string()));
                }
            }
            let c = conv(c).ok_or_else(|| AlgebraError::BadCoefficient(self.ring.field.format_elem(c)))?;
            terms.push((m.remap(map), c));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Text in the export grammar: `c*v1^e1*...*vk^ek` terms joined by `" + "`.
    pub fn to_text(&self) -> String {
        let reg = &self.ring.registry;
        self.to_text_with(|v| reg.name(v).to_string())
    }

    /// Like [`Polynomial::to_text`] with a custom spelling for variables.
    pub fn to_text_with(&self, name: impl Fn(VarId) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut s = self.ring.field.format_elem(c);
                for &(v, e) in m.pairs() {
                    s.push('*');
                    s.push_str(&name(v));
                    if e > 1 {
                        s.push('^');
                        s.push_str(&e.to_string());
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
