//! Finite posets read as intuitionistic Kripke frames.

mod enumerate;
mod io;
mod map;
mod set;

use std::collections::HashMap;

pub use enumerate::{canonical_code, enumerate_posets, is_isomorphic, CanonicalCode};
pub use io::PosetFile;
pub use map::{is_order_isomorphism, MonotoneMap, PMorphismCheck};
pub use set::{ElemSet, MAX_ELEMENTS};

/// Up-set enumeration cap used when the caller does not choose one.
pub const DEFAULT_UPSET_CAP: usize = 1 << 20;

/// Up-sets are stored as element bitmasks.
pub type UpSet = ElemSet;
/// Lower sets are stored as element bitmasks.
pub type LowerSet = ElemSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("order has a cycle: {}", .0.join(" < "))]
    Cycle(Vec<String>),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("poset has {0} elements; at most {MAX_ELEMENTS} are supported")]
    TooLarge(usize),
    #[error("relation is not reflexive at `{0}`")]
    NotReflexive(String),
    #[error("relation is not antisymmetric: `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("relation is not transitive: `{0}` <= `{1}` <= `{2}`")]
    NotTransitive(String, String, String),
    #[error("more than {cap} up-sets (stopped after {count})")]
    CapExceeded { count: usize, cap: usize },
    #[error("set {0:?} is not an up-set")]
    NotAnUpSet(Vec<String>),
    #[error("map is not order-preserving: `{0}` <= `{1}` but images are not")]
    NotMonotone(String, String),
    #[error("map is not total or refers outside its codomain")]
    BadAssignment,
    #[error("invalid poset file: {0}")]
    Json(String),
}

/// A finite partial order with named elements.
///
/// `up[i]` is the principal up-set `↑i` and `down[i]` the principal down-set
/// `↓i`; both contain `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
}

impl Poset {
    /// The poset with no elements.
    pub fn empty() -> Self {
        Poset { names: Vec::new(), up: Vec::new(), down: Vec::new() }
    }

    /// Reflexive-transitive closure of a cover relation.
    ///
    /// Self-loops are absorbed into reflexivity. Any other cycle is rejected
    /// with a witness path.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self, PosetError> {
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let index = name_index(&names)?;
        let n = names.len();
        let mut succ = vec![ElemSet::EMPTY; n];
        for (lo, hi) in covers {
            let lo_name = lo.as_ref();
            let hi_name = hi.as_ref();
            let i = *index.get(lo_name).ok_or_else(|| PosetError::UnknownElement(lo_name.to_string()))?;
            let j = *index.get(hi_name).ok_or_else(|| PosetError::UnknownElement(hi_name.to_string()))?;
            if i != j {
                succ[i] = succ[i].with(j);
            }
        }
        Self::from_successors(names, &succ)
    }

    /// Builds the order from a strict "immediately below" relation given as
    /// successor sets over indices.
    pub fn from_successors(names: Vec<String>, succ: &[ElemSet]) -> Result<Self, PosetError> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        // reach[i]: elements reachable from i by a nonempty path.
        let mut reach = vec![ElemSet::EMPTY; n];
        for i in 0..n {
            let mut frontier = succ[i];
            let mut seen = ElemSet::EMPTY;
            while !frontier.is_empty() {
                seen = seen.union(frontier);
                let mut next = ElemSet::EMPTY;
                for j in frontier {
                    next = next.union(succ[j]);
                }
                frontier = next.difference(seen);
            }
            reach[i] = seen;
        }
        if let Some(i) = (0..n).find(|&i| reach[i].contains(i)) {
            return Err(PosetError::Cycle(cycle_witness(&names, succ, i)));
        }
        let up: Vec<ElemSet> = (0..n).map(|i| reach[i].with(i)).collect();
        Ok(Self::from_up_unchecked(names, up))
    }

    /// Builds a poset from a full order relation `leq(i, j)`, checking the axioms.
    pub fn from_relation(names: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self, PosetError> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        name_index(&names)?;
        let up: Vec<ElemSet> = (0..n).map(|i| (0..n).filter(|&j| leq(i, j)).collect()).collect();
        for i in 0..n {
            if !up[i].contains(i) {
                return Err(PosetError::NotReflexive(names[i].clone()));
            }
            for j in up[i] {
                if j != i && up[j].contains(i) {
                    return Err(PosetError::NotAntisymmetric(names[i].clone(), names[j].clone()));
                }
                if let Some(k) = up[j].difference(up[i]).first() {
                    return Err(PosetError::NotTransitive(
                        names[i].clone(),
                        names[j].clone(),
                        names[k].clone(),
                    ));
                }
            }
        }
        Ok(Self::from_up_unchecked(names, up))
    }

    pub(crate) fn from_up_unchecked(names: Vec<String>, up: Vec<ElemSet>) -> Self {
        let n = names.len();
        let mut down = vec![ElemSet::EMPTY; n];
        for (i, u) in up.iter().enumerate() {
            for j in u.iter() {
                down[j] = down[j].with(i);
            }
        }
        Poset { names, up, down }
    }

    /// The `n`-element chain `x1 < x2 < .. < xn`.
    pub fn chain(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Self::from_relation(names, |i, j| i <= j).expect("chain is a partial order")
    }

    /// The `n`-element antichain `x1, .., xn`.
    pub fn antichain(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("x{i}")).collect();
        Self::from_relation(names, |i, j| i == j).expect("antichain is a partial order")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.len())
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// `↑i`.
    #[inline]
    pub fn up(&self, i: usize) -> ElemSet {
        self.up[i]
    }

    /// `↓i`.
    #[inline]
    pub fn down(&self, i: usize) -> ElemSet {
        self.down[i]
    }

    pub fn up_closure(&self, set: ElemSet) -> ElemSet {
        set.iter().fold(ElemSet::EMPTY, |acc, i| acc.union(self.up[i]))
    }

    pub fn down_closure(&self, set: ElemSet) -> ElemSet {
        set.iter().fold(ElemSet::EMPTY, |acc, i| acc.union(self.down[i]))
    }

    pub fn is_upset(&self, set: ElemSet) -> bool {
        set.iter().all(|i| self.up[i].is_subset(set))
    }

    pub fn is_lowerset(&self, set: ElemSet) -> bool {
        set.iter().all(|i| self.down[i].is_subset(set))
    }

    /// Heyting implication on up-sets: `{a : ↑a ∩ u ⊆ v}`.
    #[inline]
    pub fn implies(&self, u: ElemSet, v: ElemSet) -> ElemSet {
        let bad = u.difference(v);
        let mut out = 0u128;
        for (i, up) in self.up.iter().enumerate() {
            if up.intersection(bad).is_empty() {
                out |= 1 << i;
            }
        }
        ElemSet(out)
    }

    /// Co-Heyting implication on lower sets: the down-closure of `c \ d`.
    pub fn co_implies(&self, c: ElemSet, d: ElemSet) -> ElemSet {
        self.down_closure(c.difference(d))
    }

    pub fn minimal_elements(&self) -> ElemSet {
        (0..self.len()).filter(|&i| self.down[i] == ElemSet::singleton(i)).collect()
    }

    pub fn maximal_elements(&self) -> ElemSet {
        (0..self.len()).filter(|&i| self.up[i] == ElemSet::singleton(i)).collect()
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let above = self.up[i].without(i);
            for j in above {
                let between = above.intersection(self.down[j].without(j));
                if between.is_empty() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Number of elements strictly below each element along a longest chain
    /// ending there.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].len());
        let mut height = vec![0usize; self.len()];
        for &i in &order {
            height[i] = self.down[i].without(i).iter().map(|j| height[j] + 1).max().unwrap_or(0);
        }
        height
    }

    /// Length of the longest chain minus one; `-1` for the empty poset.
    pub fn depth(&self) -> i64 {
        self.heights().into_iter().max().map_or(-1, |h| h as i64)
    }

    /// A longest chain, listed bottom to top.
    pub fn longest_chain(&self) -> Vec<usize> {
        let height = self.heights();
        let Some(top) = (0..self.len()).max_by_key(|&i| (height[i], std::cmp::Reverse(i))) else {
            return Vec::new();
        };
        let mut chain = vec![top];
        let mut cur = top;
        while height[cur] > 0 {
            cur = self.down[cur]
                .without(cur)
                .iter()
                .find(|&j| height[j] + 1 == height[cur])
                .expect("height witness exists");
            chain.push(cur);
        }
        chain.reverse();
        chain
    }

    /// Every up-set exactly once, in increasing bitmask order.
    pub fn all_upsets(&self, cap: usize) -> Result<Vec<ElemSet>, PosetError> {
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.reverse();
        // Decide elements from the most significant bit down; 0 before 1.
        fn go(
            p: &Poset,
            order: &[usize],
            k: usize,
            inc: ElemSet,
            exc: ElemSet,
            out: &mut Vec<ElemSet>,
            cap: usize,
        ) -> Result<(), PosetError> {
            if k == order.len() {
                if out.len() == cap {
                    return Err(PosetError::CapExceeded { count: out.len(), cap });
                }
                out.push(inc);
                return Ok(());
            }
            let i = order[k];
            if inc.contains(i) || exc.contains(i) {
                return go(p, order, k + 1, inc, exc, out, cap);
            }
            go(p, order, k + 1, inc, exc.union(p.down[i]), out, cap)?;
            go(p, order, k + 1, inc.union(p.up[i]), exc, out, cap)
        }
        go(self, &order, 0, ElemSet::EMPTY, ElemSet::EMPTY, &mut out, cap)?;
        Ok(out)
    }

    /// Every lower set exactly once, in increasing bitmask order.
    pub fn all_lowersets(&self, cap: usize) -> Result<Vec<ElemSet>, PosetError> {
        let mut sets = self.dual().all_upsets(cap)?;
        sets.sort();
        Ok(sets)
    }

    /// The order-dual poset (same names).
    pub fn dual(&self) -> Poset {
        Poset { names: self.names.clone(), up: self.down.clone(), down: self.up.clone() }
    }

    /// The subposet on `keep`, elements in their original relative order.
    pub fn restrict(&self, keep: ElemSet) -> Poset {
        let idx: Vec<usize> = keep.iter().collect();
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let up = idx
            .iter()
            .map(|&i| idx.iter().enumerate().filter(|&(_, &j)| self.leq(i, j)).map(|(k, _)| k).collect())
            .collect();
        Poset::from_up_unchecked(names, up)
    }

    pub fn set_names(&self, set: ElemSet) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet, PosetError> {
        names.iter().try_fold(ElemSet::EMPTY, |acc, n| {
            self.index_of(n.as_ref())
                .map(|i| acc.with(i))
                .ok_or_else(|| PosetError::UnknownElement(n.as_ref().to_string()))
        })
    }

    /// Parses a named up-set, rejecting sets that are not up-closed.
    pub fn upset_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<ElemSet, PosetError> {
        let set = self.set_from_names(names)?;
        if !self.is_upset(set) {
            return Err(PosetError::NotAnUpSet(self.set_names(set)));
        }
        Ok(set)
    }
}

fn name_index(names: &[String]) -> Result<HashMap<&str, usize>, PosetError> {
    if names.len() > MAX_ELEMENTS {
        return Err(PosetError::TooLarge(names.len()));
    }
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            return Err(PosetError::DuplicateElement(n.clone()));
        }
    }
    Ok(index)
}

/// A path `start -> .. -> start` in the successor graph, as names.
fn cycle_witness(names: &[String], succ: &[ElemSet], start: usize) -> Vec<String> {
    let n = names.len();
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for j in succ[start] {
        if parent[j] == usize::MAX {
            parent[j] = start;
            queue.push_back(j);
        }
    }
    while let Some(i) = queue.pop_front() {
        if i == start {
            break;
        }
        for j in succ[i] {
            if parent[j] == usize::MAX {
                parent[j] = i;
                queue.push_back(j);
            }
        }
    }
    let mut path = vec![start];
    let mut cur = parent[start];
    while cur != start {
        path.push(cur);
        cur = parent[cur];
    }
    path.push(start);
    path.reverse();
    path.into_iter().map(|i| names[i].clone()).collect()
}
