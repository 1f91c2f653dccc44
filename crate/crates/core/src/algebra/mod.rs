//! Finite Heyting and co-Heyting algebras of up-sets and lower sets, formula
//! evaluation on frames, prime spectra, the Stone map and finite duality.

mod duality;
mod eval;

use std::collections::HashMap;

use crate::poset::{ElemSet, Poset, PosetError};

pub use duality::{
    algebra_depth, join_irreducibles, join_irreducibles_by_definition, spec, stone_map, up_of_pmorphism,
    verify_stone, HomomorphismReport, PreimageHomomorphism, Spectrum, StoneMap,
};
pub use eval::{
    decide_validity, eval, eval_in, is_valid, is_valid_in, SearchLimits, Validity, Valuation, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("valuation does not assign atom `{0}`")]
    MissingAtom(String),
    #[error("search needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("not a p-morphism: `{element}` misses `{missed}`")]
    NotPMorphism { element: String, missed: String },
    #[error("the one-element algebra has no prime filters")]
    TrivialAlgebra,
    #[error("formula has more than 64 distinct atoms")]
    TooManyAtoms,
}

/// A finite bounded lattice presented by element indices.
pub trait FiniteLattice {
    fn len(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    fn join(&self, a: usize, b: usize) -> usize;
    fn meet(&self, a: usize, b: usize) -> usize;
    fn bottom(&self) -> usize;
    fn top(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Human-readable name of an element.
    fn label(&self, a: usize) -> String {
        format!("h{a}")
    }

    /// Join of all elements strictly below `a`.
    fn join_strictly_below(&self, a: usize) -> usize {
        (0..self.len()).filter(|&x| x != a && self.leq(x, a)).fold(self.bottom(), |acc, x| self.join(acc, x))
    }
}

/// A finite lattice with a Heyting implication.
pub trait HeytingAlgebra: FiniteLattice {
    fn implies(&self, a: usize, b: usize) -> usize;
}

/// A lattice whose elements are distinct subsets of a frame, ordered by
/// inclusion, closed under union and intersection.
#[derive(Clone, Debug)]
struct SetLattice {
    frame: Poset,
    carrier: Vec<ElemSet>,
    index: HashMap<ElemSet, usize>,
}

impl SetLattice {
    fn new(frame: Poset, carrier: Vec<ElemSet>) -> Self {
        let index = carrier.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        SetLattice { frame, carrier, index }
    }

    fn idx(&self, s: ElemSet) -> usize {
        self.index[&s]
    }

    fn label(&self, a: usize) -> String {
        format!("{{{}}}", self.frame.set_names(self.carrier[a]).join(","))
    }

    fn join_strictly_below(&self, a: usize) -> usize {
        let target = self.carrier[a];
        let mut acc = ElemSet::EMPTY;
        for &s in &self.carrier {
            if s != target && s.is_subset(target) {
                acc = acc.union(s);
            }
        }
        self.idx(acc)
    }
}

macro_rules! set_lattice_impl {
    ($ty:ty, $bottom:expr, $top:expr) => {
        impl FiniteLattice for $ty {
            fn len(&self) -> usize {
                self.sets.carrier.len()
            }
            fn leq(&self, a: usize, b: usize) -> bool {
                self.sets.carrier[a].is_subset(self.sets.carrier[b])
            }
            fn join(&self, a: usize, b: usize) -> usize {
                self.sets.idx(self.sets.carrier[a].union(self.sets.carrier[b]))
            }
            fn meet(&self, a: usize, b: usize) -> usize {
                self.sets.idx(self.sets.carrier[a].intersection(self.sets.carrier[b]))
            }
            fn bottom(&self) -> usize {
                self.sets.idx($bottom(&self.sets.frame))
            }
            fn top(&self) -> usize {
                self.sets.idx($top(&self.sets.frame))
            }
            fn label(&self, a: usize) -> String {
                self.sets.label(a)
            }
            fn join_strictly_below(&self, a: usize) -> usize {
                self.sets.join_strictly_below(a)
            }
        }

        impl $ty {
            /// The base frame.
            pub fn frame(&self) -> &Poset {
                &self.sets.frame
            }

            /// Carrier sets in increasing bitmask order.
            pub fn elements(&self) -> &[ElemSet] {
                &self.sets.carrier
            }

            pub fn element(&self, i: usize) -> ElemSet {
                self.sets.carrier[i]
            }

            pub fn index_of(&self, s: ElemSet) -> Option<usize> {
                self.sets.index.get(&s).copied()
            }
        }
    };
}

/// `Up(A)`: the up-sets of a finite frame.
#[derive(Clone, Debug)]
pub struct FiniteHeyting {
    sets: SetLattice,
}

/// `Lo(A)`: the lower sets of a finite frame with co-implication.
#[derive(Clone, Debug)]
pub struct FiniteCoHeyting {
    sets: SetLattice,
}

set_lattice_impl!(FiniteHeyting, |_: &Poset| ElemSet::EMPTY, |p: &Poset| p.all());
set_lattice_impl!(FiniteCoHeyting, |_: &Poset| ElemSet::EMPTY, |p: &Poset| p.all());

impl FiniteHeyting {
    /// `U -> V = {a : ↑a ∩ U ⊆ V}`; the largest up-set `W` with `W ∩ U ⊆ V`.
    pub fn implies_sets(&self, u: ElemSet, v: ElemSet) -> ElemSet {
        self.sets.frame.implies(u, v)
    }

    pub fn neg_sets(&self, u: ElemSet) -> ElemSet {
        self.implies_sets(u, ElemSet::EMPTY)
    }
}

impl HeytingAlgebra for FiniteHeyting {
    fn implies(&self, a: usize, b: usize) -> usize {
        self.sets.idx(self.implies_sets(self.sets.carrier[a], self.sets.carrier[b]))
    }
}

impl FiniteCoHeyting {
    /// `C <- D`: the smallest lower set `K` with `C ⊆ D ∪ K`, i.e. `↓(C \ D)`.
    pub fn co_implies_sets(&self, c: ElemSet, d: ElemSet) -> ElemSet {
        self.sets.frame.co_implies(c, d)
    }

    /// Co-negation `⊤ <- D`.
    pub fn co_neg_sets(&self, d: ElemSet) -> ElemSet {
        self.co_implies_sets(self.sets.frame.all(), d)
    }

    pub fn co_implies(&self, a: usize, b: usize) -> usize {
        self.sets.idx(self.co_implies_sets(self.sets.carrier[a], self.sets.carrier[b]))
    }
}

/// `Up(A)` as a finite Heyting algebra.
pub fn heyting_of_upsets(frame: &Poset, cap: usize) -> Result<FiniteHeyting, AlgebraError> {
    let carrier = frame.all_upsets(cap)?;
    Ok(FiniteHeyting { sets: SetLattice::new(frame.clone(), carrier) })
}

/// `Lo(A)` as a finite co-Heyting algebra.
pub fn coheyting_of_lowersets(frame: &Poset, cap: usize) -> Result<FiniteCoHeyting, AlgebraError> {
    let carrier = frame.all_lowersets(cap)?;
    Ok(FiniteCoHeyting { sets: SetLattice::new(frame.clone(), carrier) })
}

/// `C <- D` for lower sets of `L`'s frame.
pub fn coheyting_implication(l: &FiniteCoHeyting, c: ElemSet, d: ElemSet) -> ElemSet {
    l.co_implies_sets(c, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::DEFAULT_UPSET_CAP;

    fn chain2() -> Poset {
        Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn up(p: &Poset) -> FiniteHeyting {
        heyting_of_upsets(p, DEFAULT_UPSET_CAP).unwrap()
    }

    #[test]
    fn chain_negations() {
        let p = chain2();
        let h = up(&p);
        let b = ElemSet::singleton(1);
        assert_eq!(h.neg_sets(p.all()), ElemSet::EMPTY);
        assert_eq!(h.neg_sets(b), ElemSet::EMPTY);
        assert_eq!(h.neg_sets(h.neg_sets(b)), p.all());
    }

    #[test]
    fn point_gives_boolean_algebra() {
        let h = up(&Poset::antichain(1));
        assert_eq!(h.len(), 2);
        let (bot, top) = (h.bottom(), h.top());
        assert_eq!(h.implies(top, bot), bot);
        assert_eq!(h.implies(bot, bot), top);
    }

    #[test]
    fn adjunction_holds_exhaustively() {
        for n in 1..=5 {
            for p in crate::poset::enumerate_posets(n, n) {
                let h = up(&p);
                for &u in h.elements() {
                    for &v in h.elements() {
                        let imp = h.implies_sets(u, v);
                        assert!(p.is_upset(imp));
                        for &w in h.elements() {
                            assert_eq!(w.is_subset(imp), w.intersection(u).is_subset(v));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn co_adjunction_holds_exhaustively() {
        for n in 1..=5 {
            for p in crate::poset::enumerate_posets(n, n) {
                let l = coheyting_of_lowersets(&p, DEFAULT_UPSET_CAP).unwrap();
                for &c in l.elements() {
                    for &d in l.elements() {
                        let k0 = l.co_implies_sets(c, d);
                        assert!(p.is_lowerset(k0));
                        for &k in l.elements() {
                            assert_eq!(c.is_subset(d.union(k)), k0.is_subset(k));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn co_implication_is_complement_dual() {
        for p in crate::poset::enumerate_posets(4, 4) {
            let n = p.len();
            let l = coheyting_of_lowersets(&p, DEFAULT_UPSET_CAP).unwrap();
            for &c in l.elements() {
                for &d in l.elements() {
                    let dual = p.implies(d.complement(n), c.complement(n)).complement(n);
                    assert_eq!(l.co_implies_sets(c, d), dual);
                }
            }
        }
    }

    #[test]
    fn co_implication_edge_cases() {
        let p = chain2();
        let l = coheyting_of_lowersets(&p, DEFAULT_UPSET_CAP).unwrap();
        for &c in l.elements() {
            assert_eq!(coheyting_implication(&l, c, c), ElemSet::EMPTY);
            assert_eq!(coheyting_implication(&l, c, ElemSet::EMPTY), c);
        }
        assert_eq!(l.co_neg_sets(ElemSet::singleton(0)), p.all());
    }

    #[test]
    fn lattice_trait_on_indices() {
        let h = up(&chain2());
        assert_eq!(h.len(), 3);
        assert_eq!(h.bottom(), 0);
        assert_eq!(h.top(), 2);
        assert_eq!(h.join(0, 1), 1);
        assert_eq!(h.meet(1, 2), 1);
        assert!(h.leq(0, 2));
        assert_eq!(h.label(1), "{b}");
    }
}
