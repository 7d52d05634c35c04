use std::sync::Arc;

use crate::algebra::Congruence;
use crate::error::{Error, Result};
use crate::term::{parse_term, Signature, Term};
use crate::variety::{TermAlgebra, Variety};

use super::Context;

/// A finite multiset of terms to generalize. Duplicates are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicProblem {
    pub terms: Vec<Term>,
    /// Variables of all terms, in first-occurrence order.
    pub vars: Vec<String>,
}

impl SymbolicProblem {
    pub fn new(sig: &Signature, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Precondition("a problem needs at least one term".into()));
        }
        let mut vars: Vec<String> = Vec::new();
        for t in &terms {
            sig.check(t)?;
            for v in t.vars() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
        Ok(SymbolicProblem { terms, vars })
    }

    pub fn parse(sig: &Signature, srcs: &[&str]) -> Result<Self> {
        let terms = srcs
            .iter()
            .map(|s| parse_term(s, sig))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, terms)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `h: F(z) → ∏ E_k` with `h(z) = (t_1, ..., t_m)`, each factor `E_k` the
/// subalgebra of `F(X)` generated by `t_k`.
#[derive(Debug, Clone)]
pub struct AlgebraicProblem {
    pub problem: SymbolicProblem,
    /// Representatives inside each factor are written over `z`, standing
    /// for `t_k`.
    pub factors: Vec<Arc<TermAlgebra>>,
    /// The components of `h(z)`.
    pub h_z: Vec<usize>,
}

pub fn alg_of(v: &Variety, p: &SymbolicProblem) -> Result<AlgebraicProblem> {
    let mut factors = Vec::with_capacity(p.len());
    let mut h_z = Vec::with_capacity(p.len());
    for t in &p.terms {
        let e = v.generate(&p.vars, &[("z".to_string(), t.clone())])?;
        h_z.push(e.generators()[0]);
        factors.push(e);
    }
    Ok(AlgebraicProblem {
        problem: p.clone(),
        factors,
        h_z,
    })
}

/// `ker(h)` as the intersection of the kernels of the factor maps
/// `h_k: F(z) → E_k`, each found by evaluating every unary term at `t_k`.
pub fn kernel_of_problem(ctx: &Context<'_>, ap: &AlgebraicProblem) -> Result<Congruence> {
    let f1 = ctx.f1();
    let mut ker = Congruence::nabla(f1.size());
    for e in &ap.factors {
        let values = (0..f1.size())
            .map(|u| e.eval(f1.rep(u)))
            .collect::<Result<Vec<usize>>>()?;
        ker = ker.meet(&Congruence::from_key(f1.size(), |u| values[u]));
    }
    Ok(ker)
}
