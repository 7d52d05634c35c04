//! Varieties presented by finite generating algebras, and their finitely
//! generated free algebras.
//!
//! An n-ary term function is stored as the tuple of its values under every
//! assignment of the variables into every generating algebra. The free
//! algebra on n generators is the set of such tuples reachable from the
//! projections; the same machinery yields the subalgebra generated by any
//! list of terms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{table_cells, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::{Signature, Term};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug)]
pub struct Variety {
    name: String,
    sig: Arc<Signature>,
    generators: Arc<[Arc<FiniteAlgebra>]>,
    budget: u128,
    cache: Mutex<HashMap<String, Arc<TermAlgebra>>>,
}

impl Variety {
    pub fn new(name: impl Into<String>, generators: Vec<Arc<FiniteAlgebra>>) -> Result<Self> {
        let name = name.into();
        let first = generators
            .first()
            .ok_or_else(|| Error::Precondition(format!("variety `{name}` has no generating algebra")))?;
        let sig = first.sig().clone();
        for a in &generators {
            if a.sig() != &sig {
                return Err(Error::SignatureMismatch(format!(
                    "generator `{}` does not share the signature of `{}`",
                    a.name(),
                    first.name()
                )));
            }
            if a.size() == 0 {
                return Err(Error::InvalidAlgebra {
                    algebra: a.name().to_string(),
                    message: "empty universe".into(),
                });
            }
        }
        Ok(Variety {
            name,
            sig,
            generators: generators.into(),
            budget: DEFAULT_BUDGET,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Maximum number of table cells (or tuple entries) any single
    /// construction may allocate.
    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn generators(&self) -> &[Arc<FiniteAlgebra>] {
        &self.generators
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    fn over_budget(&self, what: impl Into<String>, needed: u128) -> Result<()> {
        if needed > self.budget {
            return Err(Error::Budget {
                what: what.into(),
                needed,
                limit: self.budget,
            });
        }
        Ok(())
    }

    pub fn assignments(&self, vars: &[String]) -> Result<Assignments> {
        let n = vars.len() as u32;
        let count = self
            .generators
            .iter()
            .map(|a| (a.size() as u128).saturating_pow(n))
            .fold(0u128, |x, y| x.saturating_add(y));
        self.over_budget(format!("enumerating assignments of {} variable(s)", vars.len()), count)?;
        let count = count as usize;
        let mut slot_gen = Vec::with_capacity(count);
        let mut columns = vec![Vec::with_capacity(count); vars.len()];
        for (g, a) in self.generators.iter().enumerate() {
            let size = a.size();
            let local = size.pow(n);
            for j in 0..local {
                slot_gen.push(g as u32);
                // digits of j in base |a|, most significant first
                let mut rest = j;
                for i in (0..vars.len()).rev() {
                    columns[i].push((rest % size) as u32);
                    rest /= size;
                }
            }
        }
        Ok(Assignments {
            vars: vars.to_vec(),
            generators: self.generators.clone(),
            slot_gen,
            columns,
        })
    }

    /// `x1, ..., xn`.
    pub fn standard_vars(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    pub fn free_algebra(&self, n: usize) -> Result<Arc<TermAlgebra>> {
        self.free_algebra_over(&Self::standard_vars(n))
    }

    pub fn free_algebra_over(&self, vars: &[String]) -> Result<Arc<TermAlgebra>> {
        let seeds: Vec<(String, Term)> = vars.iter().map(|v| (v.clone(), Term::var(v.clone()))).collect();
        self.generate(vars, &seeds)
    }

    /// Subalgebra of the free algebra over `vars` generated by the seed
    /// terms. Representatives are written over the seed names.
    pub fn generate(&self, vars: &[String], seeds: &[(String, Term)]) -> Result<Arc<TermAlgebra>> {
        let key = format!(
            "{}|{}",
            vars.join(","),
            seeds
                .iter()
                .map(|(n, t)| format!("{n}={t}"))
                .collect::<Vec<_>>()
                .join(";")
        );
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(self.build(vars, seeds)?);
        self.cache.lock().unwrap().insert(key, built.clone());
        Ok(built)
    }

    fn build(&self, vars: &[String], seeds: &[(String, Term)]) -> Result<TermAlgebra> {
        let asg = self.assignments(vars)?;
        let slots = asg.len() as u128;
        let what = if seeds.iter().all(|(n, t)| t == &Term::var(n.clone())) {
            format!("building the free algebra on {} generator(s)", vars.len())
        } else {
            "building a generated subalgebra".to_string()
        };

        let mut pool = Pool::default();
        let mut levels: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
        let check = |count: usize| self.over_budget(what.clone(), count as u128 * slots.max(1));

        let mut generators = Vec::with_capacity(seeds.len());
        let mut level1 = Vec::new();
        for (name, t) in seeds {
            self.sig.check(t)?;
            let tuple = asg.eval(t)?;
            generators.push(pool.insert(tuple, || Term::var(name.clone()), &mut level1, &check)?);
        }
        for op in self.sig.constants() {
            let tuple = asg.apply(op, &[]);
            let name = self.sig.op(op).name.clone();
            pool.insert(tuple, || Term::constant(name), &mut level1, &check)?;
        }
        levels[1] = level1;

        let max_arity = self.sig.max_arity();
        let mut s = 2;
        loop {
            let lmax = (1..levels.len()).rev().find(|&l| !levels[l].is_empty()).unwrap_or(0);
            if max_arity == 0 || s > max_arity * lmax + 1 {
                break;
            }
            let mut level = Vec::new();
            for (op, sym) in self.sig.ops().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                for comp in compositions(s - 1, sym.arity, lmax) {
                    if comp.iter().any(|&c| levels[c].is_empty()) {
                        continue;
                    }
                    let pools: Vec<Vec<usize>> = comp.iter().map(|&c| levels[c].clone()).collect();
                    let mut pick = vec![0usize; sym.arity];
                    'tuples: loop {
                        let args: Vec<usize> = pick.iter().zip(&pools).map(|(&p, from)| from[p]).collect();
                        let arg_tuples: Vec<&[u32]> = args.iter().map(|&a| pool.tuples[a].as_slice()).collect();
                        let tuple = asg.apply(op, &arg_tuples);
                        if !pool.index.contains_key(&tuple) {
                            let rep = Term::App(sym.name.clone(), args.iter().map(|&a| pool.reps[a].clone()).collect());
                            pool.insert(tuple, || rep, &mut level, &check)?;
                        }
                        for pos in (0..pick.len()).rev() {
                            pick[pos] += 1;
                            if pick[pos] < pools[pos].len() {
                                continue 'tuples;
                            }
                            pick[pos] = 0;
                        }
                        break;
                    }
                }
            }
            levels.push(level);
            s += 1;
        }

        let Pool { tuples, reps, index } = pool;
        let size = tuples.len();
        self.over_budget(format!("{what} (operation tables)"), table_cells(&self.sig, size))?;
        let labels = reps.iter().map(|t| t.to_string()).collect();
        let name = if vars.len() == seeds.len() && generators.len() == vars.len() {
            format!("F({})", vars.join(","))
        } else {
            format!(
                "Sg({})",
                seeds.iter().map(|(_, t)| t.to_string()).collect::<Vec<_>>().join(",")
            )
        };
        let algebra = FiniteAlgebra::from_fn(name, self.sig.clone(), labels, |op, args| {
            let arg_tuples: Vec<&[u32]> = args.iter().map(|&a| tuples[a].as_slice()).collect();
            index[&asg.apply(op, &arg_tuples)]
        })?;
        Ok(TermAlgebra {
            algebra: Arc::new(algebra),
            assignments: asg,
            vars: vars.to_vec(),
            seeds: seeds.to_vec(),
            generators,
            reps,
            tuples,
            index,
        })
    }

    /// Decides `V ⊨ s ≈ t` by comparing term functions on every assignment.
    pub fn holds_identity(&self, s: &Term, t: &Term) -> Result<bool> {
        let mut vars = s.vars();
        for v in t.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let asg = self.assignments(&vars)?;
        Ok(asg.eval(s)? == asg.eval(t)?)
    }
}

#[derive(Default)]
struct Pool {
    tuples: Vec<Vec<u32>>,
    reps: Vec<Term>,
    index: HashMap<Vec<u32>, usize>,
}

impl Pool {
    fn insert(
        &mut self,
        tuple: Vec<u32>,
        rep: impl FnOnce() -> Term,
        level: &mut Vec<usize>,
        check: &dyn Fn(usize) -> Result<()>,
    ) -> Result<usize> {
        if let Some(&e) = self.index.get(&tuple) {
            return Ok(e);
        }
        let e = self.tuples.len();
        check(e + 1)?;
        self.index.insert(tuple.clone(), e);
        self.tuples.push(tuple);
        self.reps.push(rep());
        level.push(e);
        Ok(e)
    }
}

/// Compositions of `total` into `parts` positive summands, each at most
/// `cap`, in lexicographic order.
fn compositions(total: usize, parts: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < parts {
            return;
        }
        for first in 1..=cap.min(total - (parts - 1)) {
            cur.push(first);
            rec(total - first, parts - 1, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, cap, &mut Vec::new(), &mut out);
    out
}

/// Every assignment of a fixed variable list into every generating algebra,
/// ordered by generator, then lexicographically by value tuple.
#[derive(Debug, Clone)]
pub struct Assignments {
    vars: Vec<String>,
    generators: Arc<[Arc<FiniteAlgebra>]>,
    slot_gen: Vec<u32>,
    columns: Vec<Vec<u32>>,
}

impl Assignments {
    pub fn len(&self) -> usize {
        self.slot_gen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slot_gen.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Index of the generating algebra an assignment slot belongs to.
    pub fn generator_of(&self, slot: usize) -> usize {
        self.slot_gen[slot] as usize
    }

    /// Componentwise application of an operation to term-function tuples.
    pub fn apply(&self, op: usize, args: &[&[u32]]) -> Vec<u32> {
        let mut buf = vec![0usize; args.len()];
        (0..self.len())
            .map(|s| {
                for (b, a) in buf.iter_mut().zip(args) {
                    *b = a[s] as usize;
                }
                self.generators[self.slot_gen[s] as usize].apply(op, &buf) as u32
            })
            .collect()
    }

    pub fn eval(&self, t: &Term) -> Result<Vec<u32>> {
        let sig = self.generators[0].sig().clone();
        t.fold(
            &mut |v| {
                self.vars
                    .iter()
                    .position(|x| x == v)
                    .map(|i| self.columns[i].clone())
                    .ok_or_else(|| Error::UnknownVariable(v.to_string()))
            },
            &mut |op, args| {
                let idx = sig.index_of(op).ok_or_else(|| Error::UnknownOperation {
                    name: op.to_string(),
                    offset: 0,
                })?;
                if sig.op(idx).arity != args.len() {
                    return Err(Error::ArityMismatch {
                        name: op.to_string(),
                        expected: sig.op(idx).arity,
                        found: args.len(),
                        offset: 0,
                    });
                }
                let refs: Vec<&[u32]> = args.iter().map(Vec::as_slice).collect();
                Ok(self.apply(idx, &refs))
            },
        )
    }
}

/// A finitely generated subalgebra of a free algebra, each element carrying
/// its term function and a least representative term. When the seeds are
/// the variables themselves this is the free algebra over them.
#[derive(Debug)]
pub struct TermAlgebra {
    algebra: Arc<FiniteAlgebra>,
    assignments: Assignments,
    vars: Vec<String>,
    seeds: Vec<(String, Term)>,
    generators: Vec<usize>,
    reps: Vec<Term>,
    tuples: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

pub type FreeAlgebra = TermAlgebra;

impl TermAlgebra {
    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn assignments(&self) -> &Assignments {
        &self.assignments
    }

    /// Variables the term functions range over.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn seeds(&self) -> &[(String, Term)] {
        &self.seeds
    }

    /// Element of each seed, in seed order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Representative over the seed names.
    pub fn rep(&self, e: usize) -> &Term {
        &self.reps[e]
    }

    pub fn reps(&self) -> &[Term] {
        &self.reps
    }

    pub fn tuple(&self, e: usize) -> &[u32] {
        &self.tuples[e]
    }

    pub fn lookup(&self, tuple: &[u32]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Evaluates a term over the seed names.
    pub fn eval(&self, t: &Term) -> Result<usize> {
        self.algebra.eval(t, &|v| {
            self.seeds
                .iter()
                .position(|(n, _)| n == v)
                .map(|i| self.generators[i])
        })
    }
}

pub fn eval_term(f: &TermAlgebra, t: &Term) -> Result<usize> {
    f.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn kleene_sig() -> Arc<Signature> {
        Arc::new(Signature::new([("and", 2), ("or", 2), ("not", 1), ("zero", 0), ("one", 0)]).unwrap())
    }

    fn chain(n: usize) -> Arc<FiniteAlgebra> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Arc::new(
            FiniteAlgebra::from_fn(format!("C{n}"), kleene_sig(), labels, |op, a| match op {
                0 => a[0].min(a[1]),
                1 => a[0].max(a[1]),
                2 => n - 1 - a[0],
                3 => 0,
                _ => n - 1,
            })
            .unwrap(),
        )
    }

    fn z() -> Vec<String> {
        vec!["z".to_string()]
    }

    #[test]
    fn boolean_free_algebras() {
        let v = Variety::new("BA", vec![chain(2)]).unwrap();
        let f = v.free_algebra_over(&z()).unwrap();
        assert_eq!(f.size(), 4);
        assert_eq!(f.algebra().labels(), ["z", "zero", "one", "not(z)"]);
        let t = parse_term("or(z,not(z))", v.sig()).unwrap();
        assert_eq!(eval_term(&f, &t).unwrap(), f.eval(&Term::constant("one")).unwrap());
        assert_eq!(v.free_algebra(2).unwrap().size(), 16);
        assert_eq!(v.free_algebra(0).unwrap().size(), 2);
    }

    #[test]
    fn kleene_free_algebras() {
        let v = Variety::new("KA", vec![chain(3)]).unwrap();
        assert_eq!(v.free_algebra(1).unwrap().size(), 6);
        assert_eq!(v.free_algebra(2).unwrap().size(), 84);
        let p = |s: &str| parse_term(s, v.sig()).unwrap();
        assert!(v.holds_identity(&p("(x∧¬x)∧(y∨¬y)"), &p("x∧¬x")).unwrap());
        assert!(!v.holds_identity(&p("x∨¬x"), &p("1")).unwrap());
    }

    #[test]
    fn representatives_evaluate_back() {
        let v = Variety::new("KA", vec![chain(3)]).unwrap();
        let f = v.free_algebra(2).unwrap();
        for e in 0..f.size() {
            assert_eq!(f.eval(f.rep(e)).unwrap(), e);
        }
        assert_eq!(f.generators(), [0, 1]);
    }

    #[test]
    fn budget_is_reported() {
        let v = Variety::new("KA", vec![chain(3)]).unwrap().with_budget(50);
        assert!(v.free_algebra(2).unwrap_err().is_budget());
        assert!(v.free_algebra(5).unwrap_err().is_budget());
    }

    #[test]
    fn composition_order() {
        assert_eq!(compositions(3, 2, 5), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(3, 2, 1), Vec::<Vec<usize>>::new());
    }
}
