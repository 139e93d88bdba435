//! Polynomial systems: specialization of parameters, linear presolve and
//! consistency tests.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::groebner::{groebner_basis, GbConfig, GbStats};
use super::monomial::{Monomial, MonomialOrder, VarId};
use super::poly::{PolyRing, Polynomial, Registry, VarClass};
use crate::error::AlgebraError;

/// How to order the unknowns of a specialized ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderChoice {
    Lex,
    GrLex,
    GRevLex,
    /// Graded reverse lexicographic blocks by variable family; earlier
    /// groups are larger. Families not listed form a final block.
    BlockByFamily(Vec<Vec<String>>),
}

impl OrderChoice {
    fn group_of(&self, family: &str) -> usize {
        match self {
            OrderChoice::BlockByFamily(groups) => {
                groups.iter().position(|g| g.iter().any(|f| f == family)).unwrap_or(groups.len())
            }
            _ => 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PolySystem<F: Field> {
    pub ring: Arc<PolyRing<F>>,
    pub polys: Vec<Polynomial<F>>,
}

impl<F: Field> PolySystem<F> {
    pub fn new(ring: Arc<PolyRing<F>>, polys: Vec<Polynomial<F>>) -> Self {
        PolySystem { ring, polys }
    }

    pub fn parameters(&self) -> Vec<VarId> {
        self.ring.registry.parameters()
    }

    pub fn num_unknowns(&self) -> usize {
        self.ring.registry.iter().filter(|(_, v)| v.class == VarClass::Unknown).count()
    }

    /// Number of monomial terms across all equations.
    pub fn num_terms(&self) -> usize {
        self.polys.iter().map(|p| p.len()).sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().map(|p| p.total_degree()).max().unwrap_or(0)
    }

    /// Substitutes every parameter and moves the system into a ring over
    /// `field` holding only the unknowns. `conv` maps coefficients.
    pub fn specialize<G: Field>(
        &self,
        field: G,
        values: &HashMap<VarId, G::Elem>,
        order: &OrderChoice,
        conv: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Result<PolySystem<G>, AlgebraError> {
        let reg = &self.ring.registry;
        for p in reg.parameters() {
            if !values.contains_key(&p) {
                return Err(AlgebraError::UnassignedParameter(reg.name(p).to_string()));
            }
        }
        let mut unknowns: Vec<VarId> =
            reg.iter().filter(|(_, v)| v.class == VarClass::Unknown).map(|(i, _)| i).collect();
        unknowns.sort_by_key(|&v| order.group_of(&reg.info(v).family));

        let mut new_reg = Registry::new();
        let mut map: Vec<Option<VarId>> = vec![None; reg.len()];
        let mut starts = Vec::new();
        let mut last_group = None;
        for &v in &unknowns {
            let info = reg.info(v);
            let g = order.group_of(&info.family);
            let id = new_reg.add(info.name.clone(), VarClass::Unknown, info.family.clone());
            if last_group.is_some() && last_group != Some(g) {
                starts.push(id);
            }
            last_group = Some(g);
            map[v as usize] = Some(id);
        }
        let mono_order = match order {
            OrderChoice::Lex => MonomialOrder::Lex,
            OrderChoice::GrLex => MonomialOrder::GrLex,
            OrderChoice::GRevLex => MonomialOrder::GRevLex,
            OrderChoice::BlockByFamily(_) => MonomialOrder::BlockGRevLex { starts },
        };
        let ring = PolyRing::new(field, new_reg, mono_order);
        let f = &ring.field;

        let mut polys = Vec::with_capacity(self.polys.len());
        for p in &self.polys {
            let mut terms = Vec::with_capacity(p.len());
            for (m, c) in p.terms() {
                let mut coeff =
                    conv(c).ok_or_else(|| AlgebraError::BadCoefficient(self.ring.field.format_elem(c)))?;
                let mut rest = Vec::new();
                for &(v, e) in m.pairs() {
                    match map[v as usize] {
                        Some(w) => rest.push((w, e)),
                        None => {
                            let val = &values[&v];
                            for _ in 0..e {
                                coeff = f.mul(&coeff, val);
                            }
                        }
                    }
                }
                if !f.is_zero(&coeff) {
                    terms.push((Monomial::from_pairs(&rest), coeff));
                }
            }
            let q = Polynomial::from_terms(&ring, terms);
            if !q.is_zero() {
                polys.push(q);
            }
        }
        Ok(PolySystem { ring, polys })
    }

    /// Eliminates variables that occur in some equation only in a single
    /// linear term with constant coefficient, and variables forced to zero
    /// by a pure power. The result generates the same ideal after the
    /// substitutions, so it is consistent exactly when the input is.
    pub fn presolve(&self, max_terms: usize) -> (PolySystem<F>, PresolveStats) {
        let f = &self.ring.field;
        let mut polys: Vec<Polynomial<F>> = self.polys.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
        let mut stats = PresolveStats::default();
        loop {
            if polys.iter().any(|p| p.is_unit()) {
                break;
            }
            let mut occurrences: HashMap<VarId, usize> = HashMap::new();
            for p in &polys {
                for v in p.vars() {
                    *occurrences.entry(v).or_default() += 1;
                }
            }
            // (cost, equation, variable, value)
            let mut best: Option<(usize, usize, VarId)> = None;
            for (k, p) in polys.iter().enumerate() {
                if p.len() == 1 {
                    let m = &p.terms()[0].0;
                    if m.pairs().len() == 1 {
                        let v = m.pairs()[0].0;
                        let cost = 0;
                        if best.is_none_or(|b| cost < b.0) {
                            best = Some((cost, k, v));
                        }
                    }
                    continue;
                }
                if p.len() > max_terms {
                    continue;
                }
                for (m, _) in p.terms() {
                    if m.degree() != 1 {
                        continue;
                    }
                    let v = m.pairs()[0].0;
                    let lone = p.terms().iter().filter(|(t, _)| t.exponent(v) > 0).count() == 1;
                    if !lone {
                        continue;
                    }
                    let cost = (p.len() - 1) * occurrences[&v];
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, k, v));
                    }
                }
            }
            let Some((_, k, v)) = best else { break };
            let p = polys.swap_remove(k);
            let value = if p.len() == 1 {
                Polynomial::zero(&self.ring)
            } else {
                let c = p.terms().iter().find(|(m, _)| m.exponent(v) > 0).unwrap().1.clone();
                let lin = Polynomial::from_terms(&self.ring, vec![(Monomial::var(v), c.clone())]);
                p.sub(&lin).expect("same ring").scale(&f.neg(&f.inv(&c)))
            };
            stats.eliminated.push(self.ring.registry.name(v).to_string());
            polys = polys
                .into_iter()
                .map(|q| if q.vars().contains(&v) { q.substitute_poly(v, &value) } else { q })
                .filter(|q| !q.is_zero())
                .map(|q| q.monic())
                .collect();
            polys.sort_by_key(|a| a.terms().len());
            polys.dedup();
        }
        (PolySystem { ring: self.ring.clone(), polys }, stats)
    }

    /// Decides whether `1` lies in the ideal.
    pub fn contains_one(&self, cfg: &GbConfig) -> Result<(bool, GbStats), AlgebraError> {
        if self.polys.iter().any(|p| p.is_unit()) {
            return Ok((true, GbStats::default()));
        }
        if self.polys.is_empty() {
            return Ok((false, GbStats::default()));
        }
        let gb = groebner_basis(&self.ring, &self.polys, cfg)?;
        Ok((gb.is_unit(), gb.stats))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresolveStats {
    pub eliminated: Vec<String>,
}
