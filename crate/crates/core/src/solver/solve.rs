use crate::algebra::{direct_product, find_section, for_each_tuple, min_generators, Congruence, Homomorphism};
use crate::error::{Error, Result};
use crate::term::{Generalization, Substitution, Term};
use crate::variety::Variety;

use super::report::{CongruenceEntry, GeneralizationReport, McsgEntry, TypeVerdict};
use super::{alg_of, kernel_of_problem, AlgebraicProblem, Context, SymbolicProblem, Verdict};

/// Products larger than this are not tested for projectivity.
const PRODUCT_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GStatus {
    /// `lower == upper` is exactly the set of G-congruences.
    Exact,
    /// Only `lower ⊆ G(h) ⊆ upper` is known.
    Approximate,
}

#[derive(Debug, Clone)]
pub struct GCongruences {
    pub status: GStatus,
    /// Projective congruences below `ker(h)`; all of them are G-congruences.
    pub lower: Vec<Congruence>,
    /// Congruences below `ker(h)` not ruled out as exact.
    pub upper: Vec<Congruence>,
}

pub fn g_congruences(ctx: &Context<'_>, ker: &Congruence) -> GCongruences {
    let below = ctx
        .classifications()
        .iter()
        .filter(|c| c.theta.is_subset_of(ker));
    let lower: Vec<Congruence> = below
        .clone()
        .filter(|c| c.projective.is_yes())
        .map(|c| c.theta.clone())
        .collect();
    let (one_ep, _) = ctx.one_ep();
    if one_ep.is_yes() {
        return GCongruences {
            status: GStatus::Exact,
            upper: lower.clone(),
            lower,
        };
    }
    let upper = below
        .filter(|c| !c.exact.is_no())
        .map(|c| c.theta.clone())
        .collect();
    GCongruences {
        status: GStatus::Approximate,
        lower,
        upper,
    }
}

fn maximal(set: &[Congruence]) -> Vec<Congruence> {
    set.iter()
        .filter(|a| !set.iter().any(|b| b != *a && a.is_subset_of(b)))
        .cloned()
        .collect()
}

/// The 1-variable generalizer of the solution `n_θ`, with witnesses. θ must
/// be projective and below `ker(h)`.
pub fn sym_of(ctx: &Context<'_>, ap: &AlgebraicProblem, theta: &Congruence) -> Result<McsgEntry> {
    let c = ctx
        .classification(theta)
        .ok_or_else(|| Error::Precondition("not a congruence of F(z)".into()))?;
    let retract = c
        .retract
        .as_ref()
        .ok_or_else(|| Error::Precondition(format!("{} is not projective", c.name)))?;
    let s = retract.section.clone();
    let v = ctx.variety();
    let mut witnesses = Vec::with_capacity(ap.problem.len());
    for t in &ap.problem.terms {
        // σ(z) = t always works; prefer the smallest subterm of t that does.
        let mut chosen = None;
        for cand in t.subterms() {
            if v.holds_identity(&s.replace_var("z", &cand), t)? {
                chosen = Some(cand);
                break;
            }
        }
        let image = chosen.ok_or_else(|| {
            Error::Verification(format!("`{s}` does not generalize `{t}`"))
        })?;
        witnesses.push(Substitution::single("z", image));
    }
    Ok(McsgEntry {
        term: s,
        theta: theta.clone(),
        witnesses,
    })
}

fn soundness_gate(v: &Variety, terms: &[Term], entry: &McsgEntry) -> Result<()> {
    for (sigma, t) in entry.witnesses.iter().zip(terms) {
        let inst = sigma.apply(&entry.term);
        if !v.holds_identity(&inst, t)? {
            return Err(Error::Verification(format!(
                "{sigma} maps `{}` to `{inst}`, not equivalent to `{t}`",
                entry.term
            )));
        }
    }
    Ok(())
}

/// Whether `∏ E_k` is projective: `Some(answer)`, or `None` when the product
/// is too large or needs more generators than the bound allows.
fn product_projective(ctx: &Context<'_>, ap: &AlgebraicProblem) -> Result<Option<bool>> {
    let size: usize = ap.factors.iter().map(|e| e.size()).product();
    if size > PRODUCT_LIMIT {
        return Ok(None);
    }
    let algebras: Vec<_> = ap.factors.iter().map(|e| e.algebra().clone()).collect();
    let p = direct_product(&algebras)?;
    let (n, gens) = min_generators(&p.algebra);
    if n > ctx.bound() {
        return Ok(None);
    }
    let fv = ctx.variety().free_algebra(n)?;
    let vars = fv.vars().to_vec();
    let pa = &p.algebra;
    let map = (0..fv.size())
        .map(|e| {
            pa.eval(fv.rep(e), &|x| vars.iter().position(|y| y == x).map(|i| gens[i]))
        })
        .collect::<Result<Vec<usize>>>()?;
    let surj = Homomorphism::new(fv.algebra().clone(), pa.clone(), map)?;
    Ok(Some(find_section(&surj).is_some()))
}

pub fn solve(ctx: &Context<'_>, p: &SymbolicProblem) -> Result<GeneralizationReport> {
    let v = ctx.variety();
    let ap = alg_of(v, p)?;
    let ker = kernel_of_problem(ctx, &ap)?;
    let g = g_congruences(ctx, &ker);
    let (one_ep, _) = ctx.one_ep();
    let (one_esp, _) = ctx.one_esp();

    let mut mcsg = Vec::new();
    for theta in maximal(&g.lower) {
        let entry = sym_of(ctx, &ap, &theta)?;
        soundness_gate(v, &p.terms, &entry)?;
        mcsg.push(entry);
    }
    mcsg.sort_by_cached_key(|e| (e.term.size(), e.term.to_string()));

    let mut caveats = Vec::new();
    let kind = match one_ep {
        Verdict::Yes { bound } => {
            if let Some(k) = bound {
                caveats.push(format!(
                    "some congruences of F(z) are of unknown exactness at bound {k}; 1EP holds up to that bound"
                ));
            }
            if !one_esp.is_yes() {
                caveats.push(
                    "1ESP fails: the emitted set is sound but its completeness rests on 1EP only"
                        .to_string(),
                );
            } else if let Verdict::Yes { bound: Some(k) } = one_esp {
                caveats.push(format!("strong projectivity checked against F(k) for k <= {k}"));
            }
            match mcsg.len() {
                1 => TypeVerdict::Unitary,
                n => TypeVerdict::Finitary(n),
            }
        }
        _ => TypeVerdict::Inconclusive(
            "1EP fails in this variety; G(h) is only bracketed by projective and possibly exact congruences"
                .to_string(),
        ),
    };

    let product = product_projective(ctx, &ap)?;
    if product == Some(true) {
        caveats.push("the product of the factors is projective, so h is the most general solution".into());
    }

    let entry = |theta: &Congruence| CongruenceEntry {
        name: ctx.name_of(theta),
        theta: theta.clone(),
    };
    Ok(GeneralizationReport {
        variety: v.name().to_string(),
        terms: p.terms.clone(),
        vars: p.vars.clone(),
        bound: ctx.bound(),
        f1_labels: ctx.f1().algebra().labels().to_vec(),
        factor_sizes: ap.factors.iter().map(|e| e.size()).collect(),
        kernel: entry(&ker),
        one_ep,
        one_esp,
        g_status: g.status,
        g_lower: g.lower.iter().map(entry).collect(),
        g_upper: g.upper.iter().map(entry).collect(),
        classifications: ctx.classifications().to_vec(),
        mcsg,
        kind,
        product_projective: product,
        caveats,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generality {
    /// The first term is a proper instance of the second.
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// `s ⪯ s'`: some substitution maps `s'` to a term equivalent to `s`.
/// Images can be taken in `F(Var(s))` without loss of generality.
fn instance_of(v: &Variety, s: &Term, general: &Term) -> Result<bool> {
    let f = v.free_algebra_over(&s.vars())?;
    let target = f.eval(s)?;
    let vars = general.vars();
    let needed = (f.size() as u128).saturating_pow(vars.len() as u32);
    if needed > v.budget() {
        return Err(Error::Budget {
            what: format!("searching substitutions into `{general}`"),
            needed,
            limit: v.budget(),
        });
    }
    let a = f.algebra();
    let mut found = false;
    let mut err = None;
    for_each_tuple(f.size(), vars.len(), |c| {
        if found || err.is_some() {
            return;
        }
        match a.eval(general, &|x| vars.iter().position(|y| y == x).map(|i| c[i])) {
            Ok(e) => found = e == target,
            Err(e) => err = Some(e),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

pub fn compare_generality(v: &Variety, s: &Term, s2: &Term) -> Result<Generality> {
    v.sig().check(s)?;
    v.sig().check(s2)?;
    Ok(match (instance_of(v, s, s2)?, instance_of(v, s2, s)?) {
        (true, true) => Generality::Equal,
        (true, false) => Generality::Less,
        (false, true) => Generality::Greater,
        (false, false) => Generality::Incomparable,
    })
}

/// Generalizes the terms two at a time, then the results, and so on, and
/// composes the witnesses. Requires every 2-term problem to be unitary.
pub fn pairwise_reduce(ctx: &Context<'_>, p: &SymbolicProblem) -> Result<Generalization> {
    let (one_esp, _) = ctx.one_esp();
    if !one_esp.is_yes() {
        return Err(Error::Precondition("the variety does not have 1ESP".into()));
    }
    let exact: Vec<&Congruence> = ctx
        .classifications()
        .iter()
        .filter(|c| c.exact.is_yes())
        .map(|c| &c.theta)
        .collect();
    for (i, a) in exact.iter().enumerate() {
        for b in &exact[i..] {
            let g = g_congruences(ctx, &a.meet(b));
            if maximal(&g.lower).len() != 1 {
                return Err(Error::Precondition(format!(
                    "2-term problems with kernel {} are not unitary",
                    ctx.name_of(&a.meet(b))
                )));
            }
        }
    }

    let sig = ctx.variety().sig();
    // each item: a generalizer and, per original term it covers, a witness
    let mut items: Vec<(Term, Vec<(usize, Substitution)>)> = p
        .terms
        .iter()
        .enumerate()
        .map(|(k, t)| (t.clone(), vec![(k, Substitution::new())]))
        .collect();
    loop {
        let mut next = Vec::new();
        let mut i = 0;
        while i < items.len() {
            let a = &items[i];
            let b = items.get(i + 1).unwrap_or(a);
            let pair = SymbolicProblem::new(sig, vec![a.0.clone(), b.0.clone()])?;
            let report = solve(ctx, &pair)?;
            let top = report.mcsg.into_iter().next().ok_or_else(|| {
                Error::Verification("a 2-term problem has no generalizer".into())
            })?;
            let mut origins = Vec::new();
            for (k, tau) in &a.1 {
                origins.push((*k, tau.compose(&top.witnesses[0])));
            }
            if i + 1 < items.len() {
                for (k, tau) in &b.1 {
                    origins.push((*k, tau.compose(&top.witnesses[1])));
                }
            }
            next.push((top.term, origins));
            i += 2;
        }
        items = next;
        if items.len() == 1 {
            break;
        }
    }
    let (term, mut origins) = items.pop().expect("one item left");
    origins.sort_by_key(|(k, _)| *k);
    let witnesses: Vec<Substitution> = origins.into_iter().map(|(_, s)| s).collect();
    for (sigma, t) in witnesses.iter().zip(&p.terms) {
        if !ctx.variety().holds_identity(&sigma.apply(&term), t)? {
            return Err(Error::Verification(format!("pairwise witness {sigma} fails for `{t}`")));
        }
    }
    Ok(Generalization { term, witnesses })
}
