use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use super::{for_each_tuple, FiniteAlgebra};

/// A partition of `0..n`, stored canonically: `class[e]` is the least member
/// of the block containing `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<usize>,
}

impl Congruence {
    pub fn delta(n: usize) -> Self {
        Congruence {
            class: (0..n).collect(),
        }
    }

    pub fn nabla(n: usize) -> Self {
        Congruence { class: vec![0; n] }
    }

    /// Groups elements with equal keys.
    pub fn from_key<K: Eq + Hash>(n: usize, mut key: impl FnMut(usize) -> K) -> Self {
        let mut first: HashMap<K, usize> = HashMap::new();
        let class = (0..n).map(|e| *first.entry(key(e)).or_insert(e)).collect();
        Congruence { class }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let mut id = (0..n).collect::<Vec<_>>();
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                id[e] = n + b;
            }
        }
        Self::from_key(n, |e| id[e])
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn class_of(&self, e: usize) -> usize {
        self.class[e]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class[a] == self.class[b]
    }

    /// Least member of every block, ascending.
    pub fn representatives(&self) -> Vec<usize> {
        (0..self.len()).filter(|&e| self.class[e] == e).collect()
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let reps = self.representatives();
        let pos: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut out = vec![Vec::new(); reps.len()];
        for e in 0..self.len() {
            out[pos[&self.class[e]]].push(e);
        }
        out
    }

    pub fn num_blocks(&self) -> usize {
        self.representatives().len()
    }

    pub fn is_delta(&self) -> bool {
        self.class.iter().enumerate().all(|(i, &c)| i == c)
    }

    pub fn is_nabla(&self) -> bool {
        self.class.iter().all(|&c| c == 0)
    }

    pub fn is_subset_of(&self, other: &Congruence) -> bool {
        (0..self.len()).all(|e| other.related(e, self.class[e]))
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        Congruence::from_key(self.len(), |e| (self.class[e], other.class[e]))
    }

    /// True when the partition is compatible with every operation of `a`.
    pub fn is_compatible(&self, a: &FiniteAlgebra) -> bool {
        // Changing one argument at a time within its block suffices.
        for (op, sym) in a.sig().ops().iter().enumerate() {
            let mut ok = true;
            for_each_tuple(a.size(), sym.arity, |args| {
                if !ok {
                    return;
                }
                let v = self.class[a.apply(op, args)];
                let mut moved = args.to_vec();
                for i in 0..args.len() {
                    moved[i] = self.class[args[i]];
                    if self.class[a.apply(op, &moved)] != v {
                        ok = false;
                        return;
                    }
                    moved[i] = args[i];
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// Blocks written with element labels, e.g. `{0,z} {1}`.
    pub fn format_blocks(&self, labels: &[String]) -> String {
        self.blocks()
            .iter()
            .map(|b| {
                let names: Vec<&str> = b.iter().map(|&e| labels[e].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}

/// Least congruence containing all `pairs`: equivalence closure of the pairs
/// under every basic translation, run to fixpoint.
pub fn congruence_generated(a: &FiniteAlgebra, pairs: &[(usize, usize)]) -> Congruence {
    let n = a.size();
    let mut uf = UnionFind {
        parent: (0..n).collect(),
    };
    let mut work: Vec<(usize, usize)> = Vec::new();
    for &(x, y) in pairs {
        if uf.union(x, y) {
            work.push((x, y));
        }
    }
    // Translating only the pairs that caused a merge is enough: every related
    // pair is a chain of such pairs.
    while let Some((x, y)) = work.pop() {
        for (op, sym) in a.sig().ops().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            for i in 0..sym.arity {
                for_each_tuple(n, sym.arity - 1, |rest| {
                    let mut args = Vec::with_capacity(sym.arity);
                    args.extend_from_slice(&rest[..i]);
                    args.push(x);
                    args.extend_from_slice(&rest[i..]);
                    let u = a.apply(op, &args);
                    args[i] = y;
                    let v = a.apply(op, &args);
                    if uf.union(u, v) {
                        work.push((u, v));
                    }
                });
            }
        }
    }
    Congruence::from_key(n, |e| uf.find(e))
}

pub fn principal_congruence(a: &FiniteAlgebra, x: usize, y: usize) -> Congruence {
    congruence_generated(a, &[(x, y)])
}

pub fn join(a: &FiniteAlgebra, theta: &Congruence, phi: &Congruence) -> Congruence {
    let pairs: Vec<(usize, usize)> = (0..a.size())
        .flat_map(|e| [(e, theta.class_of(e)), (e, phi.class_of(e))])
        .collect();
    congruence_generated(a, &pairs)
}

/// The full congruence lattice with its Hasse diagram.
#[derive(Debug, Clone)]
pub struct CongruenceLattice {
    /// Sorted by number of blocks descending (Δ first), then canonically.
    pub members: Vec<Congruence>,
    /// Display names: `Δ`, `∇`, `⟨a,b⟩` for the least generating pair of a
    /// principal congruence, otherwise the block listing.
    pub names: Vec<String>,
    /// `(lower, upper)` index pairs of the covering relation.
    pub covers: Vec<(usize, usize)>,
}

impl CongruenceLattice {
    pub fn index_of(&self, theta: &Congruence) -> Option<usize> {
        self.members.iter().position(|m| m == theta)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.members[i].is_subset_of(&self.members[j])
    }
}

pub fn congruence_lattice(a: &FiniteAlgebra) -> CongruenceLattice {
    let n = a.size();
    let mut principal: Vec<((usize, usize), Congruence)> = Vec::new();
    let mut seen: HashSet<Congruence> = HashSet::new();
    let mut members = vec![Congruence::delta(n)];
    seen.insert(Congruence::delta(n));
    for x in 0..n {
        for y in x + 1..n {
            let p = principal_congruence(a, x, y);
            if !principal.iter().any(|(_, q)| *q == p) {
                principal.push(((x, y), p.clone()));
            }
            if seen.insert(p.clone()) {
                members.push(p);
            }
        }
    }
    let mut i = 0;
    while i < members.len() {
        for (_, p) in &principal {
            let j = join(a, &members[i], p);
            if seen.insert(j.clone()) {
                members.push(j);
            }
        }
        i += 1;
    }
    members.sort_by(|x, y| y.num_blocks().cmp(&x.num_blocks()).then_with(|| x.cmp(y)));

    let names = members
        .iter()
        .map(|m| {
            if m.is_delta() {
                "Δ".to_string()
            } else if m.is_nabla() {
                "∇".to_string()
            } else if let Some(((x, y), _)) = principal.iter().find(|(_, p)| p == m) {
                format!("⟨{},{}⟩", a.label(*x), a.label(*y))
            } else {
                m.format_blocks(a.labels())
            }
        })
        .collect();

    let k = members.len();
    let below: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i != j && members[i].is_subset_of(&members[j])).collect())
        .collect();
    let mut covers = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if below[i][j] && !(0..k).any(|m| below[i][m] && below[m][j]) {
                covers.push((i, j));
            }
        }
    }
    CongruenceLattice {
        members,
        names,
        covers,
    }
}
