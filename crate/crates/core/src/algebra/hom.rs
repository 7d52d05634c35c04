use std::sync::Arc;

use crate::error::{Error, Result};

use super::{for_each_tuple, min_generators, Congruence, FiniteAlgebra};

/// A verified homomorphism between two finite algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    dom: Arc<FiniteAlgebra>,
    cod: Arc<FiniteAlgebra>,
    map: Vec<usize>,
}

/// First operation/argument tuple at which `map` fails to commute, if any.
fn first_violation(dom: &FiniteAlgebra, cod: &FiniteAlgebra, map: &[usize]) -> Option<(usize, Vec<usize>)> {
    let mut bad = None;
    for (op, sym) in dom.sig().ops().iter().enumerate() {
        let mut image = vec![0; sym.arity];
        for_each_tuple(dom.size(), sym.arity, |args| {
            if bad.is_some() {
                return;
            }
            for (slot, &a) in image.iter_mut().zip(args) {
                *slot = map[a];
            }
            if map[dom.apply(op, args)] != cod.apply(op, &image) {
                bad = Some((op, args.to_vec()));
            }
        });
        if bad.is_some() {
            break;
        }
    }
    bad
}

impl Homomorphism {
    pub fn new(dom: Arc<FiniteAlgebra>, cod: Arc<FiniteAlgebra>, map: Vec<usize>) -> Result<Self> {
        if dom.sig() != cod.sig() {
            return Err(Error::SignatureMismatch(format!(
                "`{}` and `{}` have different signatures",
                dom.name(),
                cod.name()
            )));
        }
        if map.len() != dom.size() || map.iter().any(|&v| v >= cod.size()) {
            return Err(Error::Verification(format!(
                "map is not a function from `{}` to `{}`",
                dom.name(),
                cod.name()
            )));
        }
        if let Some((op, args)) = first_violation(&dom, &cod, &map) {
            let args: Vec<&str> = args.iter().map(|&a| dom.label(a)).collect();
            return Err(Error::Verification(format!(
                "map does not commute with `{}` at ({})",
                dom.sig().op(op).name,
                args.join(", ")
            )));
        }
        Ok(Homomorphism { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: Arc<FiniteAlgebra>, cod: Arc<FiniteAlgebra>, map: Vec<usize>) -> Self {
        debug_assert!(first_violation(&dom, &cod, &map).is_none());
        Homomorphism { dom, cod, map }
    }

    pub fn dom(&self) -> &Arc<FiniteAlgebra> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteAlgebra> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, e: usize) -> usize {
        self.map[e]
    }

    pub fn kernel(&self) -> Congruence {
        Congruence::from_key(self.dom.size(), |e| self.map[e])
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().for_each(|&v| seen[v] = true);
        seen.into_iter().all(|s| s)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Homomorphism) -> Result<Homomorphism> {
        if first.cod.as_ref() != self.dom.as_ref() {
            return Err(Error::SignatureMismatch(format!(
                "cannot compose: codomain `{}` is not domain `{}`",
                first.cod.name(),
                self.dom.name()
            )));
        }
        let map = first.map.iter().map(|&e| self.map[e]).collect();
        Ok(Homomorphism::new_unchecked(first.dom.clone(), self.cod.clone(), map))
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.map.iter().enumerate().all(|(i, &v)| i == v)
    }
}

/// One step of a fixed derivation of every element from the generators.
#[derive(Debug, Clone)]
struct Step {
    target: usize,
    op: usize,
    args: Vec<usize>,
}

fn derivation(a: &FiniteAlgebra, gens: &[usize]) -> Vec<Step> {
    let mut known = vec![false; a.size()];
    let mut order: Vec<usize> = Vec::new();
    for &g in gens {
        known[g] = true;
        order.push(g);
    }
    let mut steps = Vec::new();
    loop {
        let before = order.len();
        for (op, sym) in a.sig().ops().iter().enumerate() {
            let current = order.clone();
            for_each_tuple(current.len(), sym.arity, |pos| {
                let args: Vec<usize> = pos.iter().map(|&p| current[p]).collect();
                let v = a.apply(op, &args);
                if !known[v] {
                    known[v] = true;
                    order.push(v);
                    steps.push(Step { target: v, op, args });
                }
            });
        }
        if order.len() == before {
            return steps;
        }
    }
}

/// Lazily enumerates homomorphisms in lexicographic order of generator
/// images. Restartable: clone before iterating to replay.
#[derive(Debug, Clone)]
pub struct HomIter {
    dom: Arc<FiniteAlgebra>,
    cod: Arc<FiniteAlgebra>,
    gens: Vec<usize>,
    choices: Vec<Vec<usize>>,
    steps: Vec<Step>,
    pins: Vec<(usize, usize)>,
    counter: Option<Vec<usize>>,
}

impl HomIter {
    fn advance(&mut self) {
        let Some(counter) = self.counter.as_mut() else {
            return;
        };
        for pos in (0..counter.len()).rev() {
            counter[pos] += 1;
            if counter[pos] < self.choices[pos].len() {
                return;
            }
            counter[pos] = 0;
        }
        self.counter = None;
    }

    fn candidate(&self, counter: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.dom.size()];
        for (k, &g) in self.gens.iter().enumerate() {
            map[g] = self.choices[k][counter[k]];
        }
        for step in &self.steps {
            let image: Vec<usize> = step.args.iter().map(|&x| map[x]).collect();
            map[step.target] = self.cod.apply(step.op, &image);
        }
        if self.pins.iter().any(|&(x, y)| map[x] != y) {
            return None;
        }
        first_violation(&self.dom, &self.cod, &map).is_none().then_some(map)
    }
}

impl Iterator for HomIter {
    type Item = Homomorphism;

    fn next(&mut self) -> Option<Homomorphism> {
        while let Some(counter) = self.counter.clone() {
            self.advance();
            if let Some(map) = self.candidate(&counter) {
                return Some(Homomorphism::new_unchecked(self.dom.clone(), self.cod.clone(), map));
            }
        }
        None
    }
}

/// All homomorphisms `a -> b` sending each pinned `x` to `y`. Branches only on
/// the images of a minimum generating set of `a`.
pub fn enumerate_homs(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>, pins: &[(usize, usize)]) -> HomIter {
    let (_, gens) = min_generators(a);
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| match pins.iter().find(|(x, _)| x == g) {
            Some(&(_, y)) if y < b.size() => vec![y],
            Some(_) => Vec::new(),
            None => (0..b.size()).collect(),
        })
        .collect();
    let pins_valid = pins.iter().all(|&(x, y)| x < a.size() && y < b.size());
    homs_with_choices(a, b, gens, choices, pins, pins_valid)
}

fn homs_with_choices(
    a: &Arc<FiniteAlgebra>,
    b: &Arc<FiniteAlgebra>,
    gens: Vec<usize>,
    choices: Vec<Vec<usize>>,
    pins: &[(usize, usize)],
    valid: bool,
) -> HomIter {
    let viable = valid && a.sig() == b.sig() && choices.iter().all(|c| !c.is_empty());
    HomIter {
        dom: a.clone(),
        cod: b.clone(),
        steps: derivation(a, &gens),
        counter: viable.then(|| vec![0; gens.len()]),
        gens,
        choices,
        pins: pins.to_vec(),
    }
}

/// A homomorphism `i` with `surj ∘ i = id`, if one exists.
pub fn find_section(surj: &Homomorphism) -> Option<Homomorphism> {
    let p = surj.cod().clone();
    let f = surj.dom().clone();
    let (_, gens) = min_generators(&p);
    let choices: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| (0..f.size()).filter(|&e| surj.apply(e) == g).collect())
        .collect();
    homs_with_choices(&p, &f, gens, choices, &[], true)
        .find(|i| i.map().iter().enumerate().all(|(x, &e)| surj.apply(e) == x))
}

pub fn find_isomorphism(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> Option<Homomorphism> {
    if a.size() != b.size() {
        return None;
    }
    enumerate_homs(a, b, &[]).find(|h| h.is_injective())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{quotient, subalgebra_generated};
    use super::*;

    #[test]
    fn boolean_endomorphisms() {
        let b = boolean2();
        let homs: Vec<_> = enumerate_homs(&b, &b, &[]).collect();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].is_identity());
    }

    #[test]
    fn no_embedding_of_k3_into_2() {
        let k3 = kleene_chain(&["0", "a", "1"]);
        assert_eq!(enumerate_homs(&k3, &boolean2(), &[]).filter(|h| h.is_injective()).count(), 0);
        assert_eq!(enumerate_homs(&k3, &boolean2(), &[]).count(), 0);
    }

    #[test]
    fn n3_onto_s_has_no_section() {
        let n3 = n3();
        let (s, _) = subalgebra_generated(&n3, &[2]).unwrap();
        // S = {0,2,3}; index 1 of S is the element 2
        let onto: Vec<_> = enumerate_homs(&n3, &s, &[(1, 1)])
            .filter(|h| h.is_surjective())
            .collect();
        assert!(!onto.is_empty());
        for j in &onto {
            let sections = enumerate_homs(&s, &n3, &[])
                .filter(|i| j.compose(i).unwrap().is_identity())
                .count();
            assert_eq!(sections, 0);
        }
    }

    #[test]
    fn kernel_and_first_isomorphism() {
        let k3 = kleene_chain(&["0", "a", "1"]);
        let p = super::super::direct_product(&[k3.clone(), k3.clone()]).unwrap();
        for h in enumerate_homs(&p.algebra, &k3, &[]).filter(|h| h.is_surjective()) {
            let (q, _) = quotient(&p.algebra, &h.kernel()).unwrap();
            assert!(find_isomorphism(&q, &k3).is_some());
        }
        let id = enumerate_homs(&k3, &k3, &[]).next().unwrap();
        assert!(id.kernel().is_delta());
    }

    #[test]
    fn rejects_non_homomorphism() {
        let k3 = kleene_chain(&["0", "a", "1"]);
        assert!(matches!(
            Homomorphism::new(k3.clone(), k3, vec![0, 0, 0]),
            Err(Error::Verification(_))
        ));
    }
}
