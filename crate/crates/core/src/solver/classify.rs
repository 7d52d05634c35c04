use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{congruence_lattice, for_each_tuple, quotient, Congruence, CongruenceLattice};
use crate::error::Result;
use crate::term::Term;
use crate::variety::{TermAlgebra, Variety};

/// `F(k)` with the elements realizing each kernel `ker(z ↦ t)`.
type Realizers = (Arc<TermAlgebra>, HashMap<Congruence, Vec<usize>>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `bound` is set when the answer relies on a search truncated there.
    Yes { bound: Option<usize> },
    No,
    Unknown { bound: usize },
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes { bound: None } => f.write_str("yes"),
            Verdict::Yes { bound: Some(k) } => write!(f, "yes (bound {k})"),
            Verdict::No => f.write_str("no"),
            Verdict::Unknown { bound } => write!(f, "unknown (bound {bound})"),
        }
    }
}

/// `Sg(term) ≤ F(k)` is isomorphic to the quotient, with `z/θ ↦ term`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWitness {
    pub k: usize,
    pub term: Term,
}

/// Retraction of the quotient out of `F(z)`: `i(z/θ) = section`, and `j` is
/// the natural map, so `j(i(z/θ)) = z/θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetractPair {
    pub section: Term,
}

/// A candidate section `t ≡θ z` rejected because `(u, v) ∈ θ` while
/// `u(t) ≠ v(t)`, so `z/θ ↦ t` is not well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionAttempt {
    pub candidate: Term,
    pub pair: (Term, Term),
}

/// An embedding `z/θ ↦ term` into `F(k)` that admits no retraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonRetractable {
    pub k: usize,
    pub term: Term,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub theta: Congruence,
    pub name: String,
    pub quotient_size: usize,
    pub exact: Verdict,
    pub exact_witness: Option<ExactWitness>,
    pub exact_refutation: Option<String>,
    pub projective: Verdict,
    pub retract: Option<RetractPair>,
    /// Every rejected candidate, in search order, when not projective.
    pub section_attempts: Vec<SectionAttempt>,
    pub strongly_projective: Verdict,
    pub non_retractable: Option<NonRetractable>,
}

/// Per-variety state shared by the solver: `F(z)`, its congruence lattice
/// and the classification of every congruence at a fixed search bound.
#[derive(Debug)]
pub struct Context<'v> {
    variety: &'v Variety,
    bound: usize,
    f1: Arc<TermAlgebra>,
    offsets: Vec<usize>,
    lattice: CongruenceLattice,
    classifications: Vec<Classification>,
}

impl<'v> Context<'v> {
    pub fn new(variety: &'v Variety, bound: usize) -> Result<Self> {
        let f1 = variety.free_algebra_over(&["z".to_string()])?;
        let mut offsets = Vec::new();
        let mut acc = 0;
        for a in variety.generators() {
            offsets.push(acc);
            acc += a.size();
        }
        let lattice = congruence_lattice(f1.algebra());
        let mut ctx = Context {
            variety,
            bound,
            f1,
            offsets,
            lattice,
            classifications: Vec::new(),
        };
        ctx.classifications = ctx.classify_all()?;
        Ok(ctx)
    }

    pub fn variety(&self) -> &'v Variety {
        self.variety
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The free algebra over the single variable `z`.
    pub fn f1(&self) -> &Arc<TermAlgebra> {
        &self.f1
    }

    pub fn z(&self) -> usize {
        self.f1.generators()[0]
    }

    pub fn lattice(&self) -> &CongruenceLattice {
        &self.lattice
    }

    pub fn classifications(&self) -> &[Classification] {
        &self.classifications
    }

    pub fn classification(&self, theta: &Congruence) -> Option<&Classification> {
        self.lattice.index_of(theta).map(|i| &self.classifications[i])
    }

    /// Display name of a congruence of `F(z)`.
    pub fn name_of(&self, theta: &Congruence) -> String {
        match self.lattice.index_of(theta) {
            Some(i) => self.lattice.names[i].clone(),
            None => theta.format_blocks(self.f1.algebra().labels()),
        }
    }

    /// Slots of `F(z)` (one per generator element) hit by the term function
    /// of `e`.
    pub fn slots_of(&self, ta: &TermAlgebra, e: usize) -> Vec<usize> {
        let asg = ta.assignments();
        let mut slots: Vec<usize> = ta
            .tuple(e)
            .iter()
            .enumerate()
            .map(|(s, &v)| self.offsets[asg.generator_of(s)] + v as usize)
            .collect();
        slots.sort_unstable();
        slots.dedup();
        slots
    }

    /// Partition of `F(z)` by the values of its elements at the given slots.
    pub fn kernel_of_slots(&self, slots: &[usize]) -> Congruence {
        Congruence::from_key(self.f1.size(), |u| {
            slots.iter().map(|&s| self.f1.tuple(u)[s]).collect::<Vec<u32>>()
        })
    }

    /// Kernel of the homomorphism `F(z) → ta` sending `z` to `e`.
    pub fn kernel_of_element(&self, ta: &TermAlgebra, e: usize) -> Congruence {
        self.kernel_of_slots(&self.slots_of(ta, e))
    }

    fn classify_all(&self) -> Result<Vec<Classification>> {
        // realizers[k - 1]: kernel of z ↦ t for every t in F(k)
        let mut realizers: Vec<Realizers> = Vec::new();
        for k in 1..=self.bound {
            let fk = if k == 1 {
                self.f1.clone()
            } else {
                self.variety.free_algebra(k)?
            };
            let mut by_slots: HashMap<Vec<usize>, Congruence> = HashMap::new();
            let mut kernels: HashMap<Congruence, Vec<usize>> = HashMap::new();
            for t in 0..fk.size() {
                let slots = self.slots_of(&fk, t);
                let ker = by_slots
                    .entry(slots)
                    .or_insert_with_key(|s| self.kernel_of_slots(s))
                    .clone();
                kernels.entry(ker).or_default().push(t);
            }
            realizers.push((fk, kernels));
        }
        self.lattice
            .members
            .iter()
            .enumerate()
            .map(|(i, theta)| self.classify(theta, &self.lattice.names[i], &realizers))
            .collect()
    }

    fn classify(
        &self,
        theta: &Congruence,
        name: &str,
        realizers: &[Realizers],
    ) -> Result<Classification> {
        let f1 = &self.f1;
        let bound = self.bound;

        let mut exact = Verdict::Unknown { bound };
        let mut exact_witness = None;
        let mut exact_refutation = None;
        for (k, (fk, kernels)) in realizers.iter().enumerate() {
            if let Some(ts) = kernels.get(theta) {
                exact = Verdict::Yes { bound: None };
                exact_witness = Some(ExactWitness {
                    k: k + 1,
                    term: fk.rep(ts[0]).clone(),
                });
                break;
            }
        }
        if exact_witness.is_none() {
            if let Some(reason) = self.refute_exact(theta) {
                exact = Verdict::No;
                exact_refutation = Some(reason);
            }
        }

        let (projective, retract, section_attempts) = self.projectivity(theta);

        let mut strongly_projective = Verdict::No;
        let mut non_retractable = None;
        if projective.is_yes() {
            strongly_projective = Verdict::Yes { bound: Some(bound) };
            let (q, nat) = quotient(f1.algebra(), theta)?;
            let zq = nat.apply(self.z());
            'search: for (k, (fk, kernels)) in realizers.iter().enumerate() {
                let Some(ts) = kernels.get(theta) else {
                    continue;
                };
                for &t in ts {
                    let rep = fk.rep(t);
                    let vars = fk.vars();
                    let mut found = false;
                    for_each_tuple(q.size(), vars.len(), |c| {
                        if found {
                            return;
                        }
                        let env = |v: &str| vars.iter().position(|x| x == v).map(|i| c[i]);
                        if q.eval(rep, &env).ok() == Some(zq) {
                            found = true;
                        }
                    });
                    if !found {
                        strongly_projective = Verdict::No;
                        non_retractable = Some(NonRetractable {
                            k: k + 1,
                            term: rep.clone(),
                        });
                        break 'search;
                    }
                }
            }
        }

        debug_assert!(!projective.is_yes() || exact.is_yes());
        Ok(Classification {
            theta: theta.clone(),
            name: name.to_string(),
            quotient_size: theta.num_blocks(),
            exact,
            exact_witness,
            exact_refutation,
            projective,
            retract,
            section_attempts,
            strongly_projective,
            non_retractable,
        })
    }

    /// Sound refutations of exactness. If `F(z)/θ` embeds in some `F(k)` via
    /// `z ↦ t`, the slots hit by `t` all respect θ and jointly separate it, and
    /// they include those of the diagonal `t(z,...,z)`.
    fn refute_exact(&self, theta: &Congruence) -> Option<String> {
        let total: usize = self.variety.generators().iter().map(|a| a.size()).sum();
        let compatible: Vec<usize> = (0..total)
            .filter(|&s| theta.is_subset_of(&self.kernel_of_slots(&[s])))
            .collect();
        if &self.kernel_of_slots(&compatible) != theta {
            return Some("the quotient is not a subdirect product of generating algebras".into());
        }
        let diagonal_fits = (0..self.f1.size()).any(|u| {
            self.slots_of(&self.f1, u)
                .iter()
                .all(|s| compatible.contains(s))
        });
        if !diagonal_fits {
            return Some("no unary term has all its values in the slots respecting θ".into());
        }
        self.refute_by_relation(theta, &compatible)
    }

    /// Term operations preserve subuniverses of products of generators. Stack
    /// the constant assignments (one per slot) on top of one assignment per
    /// value of `t`; the columns generate a subuniverse `R`, and applying `t`
    /// row-wise yields an element of `R` whose top part is the diagonal of `t`
    /// and whose bottom part lists the values. Refutes θ when, for every
    /// admissible value set, `R` has no such element. Gives up (returns
    /// `None`) when `R` would exceed the budget.
    fn refute_by_relation(&self, theta: &Congruence, compatible: &[usize]) -> Option<String> {
        const MAX_SLOTS: usize = 12;
        if compatible.len() > MAX_SLOTS {
            return None;
        }
        let gens = self.variety.generators();
        let slot_gen: Vec<usize> = (0..gens.len())
            .flat_map(|g| std::iter::repeat_n(g, gens[g].size()))
            .collect();
        let budget = self.variety.budget();
        for mask in 1u32..(1 << compatible.len()) {
            let values: Vec<usize> = (0..compatible.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| compatible[i])
                .collect();
            if &self.kernel_of_slots(&values) != theta {
                continue;
            }
            let coords: Vec<usize> = (0..slot_gen.len()).chain(values.iter().copied()).collect();
            let rel = self.subuniverse(&coords, &slot_gen, slot_gen.len(), budget)?;
            let top = slot_gen.len();
            let fits = rel.iter().any(|r| {
                values
                    .iter()
                    .enumerate()
                    .all(|(i, &h)| (self.offsets[slot_gen[h]] + r[top + i] as usize) == h)
                    && (0..top).all(|s| compatible.contains(&(self.offsets[slot_gen[s]] + r[s] as usize)))
            });
            if fits {
                return None;
            }
        }
        Some("term operations would have to leave a subuniverse generated by the diagonal".into())
    }

    /// Subuniverse of `∏ B_{g(c)}` (one factor per coordinate `c`, with
    /// `c` a slot) generated by the columns that are constant on the first
    /// `fixed` coordinates (there equal to the slot's element) and arbitrary on
    /// the rest.
    fn subuniverse(&self, coords: &[usize], slot_gen: &[usize], fixed: usize, budget: u128) -> Option<Vec<Vec<u32>>> {
        let gens = self.variety.generators();
        let alg = |c: usize| &gens[slot_gen[coords[c]]];
        let product: u128 = coords.iter().map(|&s| gens[slot_gen[s]].size() as u128).product();
        if product > budget {
            return None;
        }
        let base: Vec<u32> = (0..fixed)
            .map(|c| (coords[c] - self.offsets[slot_gen[coords[c]]]) as u32)
            .collect();
        let mut elems = vec![base];
        for c in fixed..coords.len() {
            elems = elems
                .into_iter()
                .flat_map(|col| {
                    (0..alg(c).size() as u32).map(move |x| {
                        let mut next = col.clone();
                        next.push(x);
                        next
                    })
                })
                .collect();
        }
        let mut seen: HashSet<Vec<u32>> = elems.iter().cloned().collect();
        let sig = self.variety.sig();
        let mut work: u128 = 0;
        loop {
            let before = elems.len();
            for (op, sym) in sig.ops().iter().enumerate() {
                work += (elems.len() as u128).saturating_pow(sym.arity as u32);
                if work > budget {
                    return None;
                }
                let current = elems.len();
                let mut args = vec![0usize; sym.arity];
                for_each_tuple(current, sym.arity, |pick| {
                    let v: Vec<u32> = (0..coords.len())
                        .map(|c| {
                            for (a, &p) in args.iter_mut().zip(pick) {
                                *a = elems[p][c] as usize;
                            }
                            alg(c).apply(op, &args) as u32
                        })
                        .collect();
                    if seen.insert(v.clone()) {
                        elems.push(v);
                    }
                });
            }
            if elems.len() == before {
                return Some(elems);
            }
        }
    }

    /// `F(z)/θ` is 1-generated, so it is projective iff the natural map
    /// splits, i.e. some `t ≡θ z` satisfies `θ ⊆ ker(z ↦ t)`.
    fn projectivity(&self, theta: &Congruence) -> (Verdict, Option<RetractPair>, Vec<SectionAttempt>) {
        let f1 = &self.f1;
        let z = self.z();
        let mut candidates: Vec<usize> = (0..f1.size()).filter(|&t| theta.related(t, z)).collect();
        candidates.sort_by_cached_key(|&t| (f1.rep(t).size(), f1.rep(t).to_string()));
        let mut attempts = Vec::new();
        for t in candidates {
            let ker = self.kernel_of_element(f1, t);
            if theta.is_subset_of(&ker) {
                return (
                    Verdict::Yes { bound: None },
                    Some(RetractPair {
                        section: f1.rep(t).clone(),
                    }),
                    Vec::new(),
                );
            }
            let (u, v) = (0..f1.size())
                .flat_map(|u| (0..f1.size()).map(move |v| (u, v)))
                .find(|&(u, v)| theta.related(u, v) && !ker.related(u, v))
                .expect("θ ⊄ ker leaves a separated pair");
            attempts.push(SectionAttempt {
                candidate: f1.rep(t).clone(),
                pair: (f1.rep(u).clone(), f1.rep(v).clone()),
            });
        }
        (Verdict::No, None, attempts)
    }

    /// Every 1-generated exact algebra is projective. Returns the index of a
    /// counterexample when the answer is no.
    pub fn one_ep(&self) -> (Verdict, Option<usize>) {
        let cs = &self.classifications;
        if let Some(i) = cs.iter().position(|c| c.exact.is_yes() && c.projective.is_no()) {
            return (Verdict::No, Some(i));
        }
        let bound = cs.iter().any(|c| c.exact.is_unknown()).then_some(self.bound);
        (Verdict::Yes { bound }, None)
    }

    /// Every 1-generated exact algebra is strongly projective.
    pub fn one_esp(&self) -> (Verdict, Option<usize>) {
        let cs = &self.classifications;
        if let Some(i) = cs
            .iter()
            .position(|c| c.exact.is_yes() && c.strongly_projective.is_no())
        {
            return (Verdict::No, Some(i));
        }
        (Verdict::Yes { bound: Some(self.bound) }, None)
    }

    /// All finite intersections of congruences classified exact.
    pub fn e_congruences(&self) -> Vec<Congruence> {
        let mut out: Vec<Congruence> = self
            .classifications
            .iter()
            .filter(|c| c.exact.is_yes())
            .map(|c| c.theta.clone())
            .collect();
        let mut i = 0;
        while i < out.len() {
            for j in 0..i {
                let m = out[i].meet(&out[j]);
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            i += 1;
        }
        out.sort_by_key(|c| self.lattice.index_of(c));
        out
    }
}
