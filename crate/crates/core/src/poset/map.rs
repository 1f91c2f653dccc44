use super::{ElemSet, Poset, PosetError};

/// An order-preserving total map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    domain: Poset,
    codomain: Poset,
    assignment: Vec<usize>,
}

/// Result of checking `f[↑a] = ↑f(a)` for every `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PMorphismCheck {
    Holds,
    /// `missed ∈ ↑f(element)` has no preimage above `element`.
    Fails {
        element: usize,
        missed: usize,
    },
}

impl PMorphismCheck {
    pub fn holds(&self) -> bool {
        matches!(self, PMorphismCheck::Holds)
    }
}

impl MonotoneMap {
    pub fn new(domain: Poset, codomain: Poset, assignment: Vec<usize>) -> Result<Self, PosetError> {
        if assignment.len() != domain.len() || assignment.iter().any(|&t| t >= codomain.len()) {
            return Err(PosetError::BadAssignment);
        }
        for i in 0..domain.len() {
            for j in domain.up(i) {
                if !codomain.leq(assignment[i], assignment[j]) {
                    return Err(PosetError::NotMonotone(
                        domain.name(i).to_string(),
                        domain.name(j).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneMap { domain, codomain, assignment })
    }

    /// Builds a map from `(domain name, codomain name)` pairs.
    pub fn from_names<S: AsRef<str>>(
        domain: Poset,
        codomain: Poset,
        pairs: &[(S, S)],
    ) -> Result<Self, PosetError> {
        let mut assignment = vec![usize::MAX; domain.len()];
        for (from, to) in pairs {
            let i = domain
                .index_of(from.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(from.as_ref().to_string()))?;
            let j = codomain
                .index_of(to.as_ref())
                .ok_or_else(|| PosetError::UnknownElement(to.as_ref().to_string()))?;
            assignment[i] = j;
        }
        Self::new(domain, codomain, assignment)
    }

    pub fn identity(p: &Poset) -> Self {
        MonotoneMap { domain: p.clone(), codomain: p.clone(), assignment: (0..p.len()).collect() }
    }

    pub fn domain(&self) -> &Poset {
        &self.domain
    }

    pub fn codomain(&self) -> &Poset {
        &self.codomain
    }

    pub fn apply(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Direct image `f[s]`.
    pub fn image(&self, s: ElemSet) -> ElemSet {
        s.iter().map(|i| self.assignment[i]).collect()
    }

    /// Inverse image `f⁻¹[t]`.
    pub fn preimage(&self, t: ElemSet) -> ElemSet {
        (0..self.domain.len()).filter(|&i| t.contains(self.assignment[i])).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image(self.domain.all()) == self.codomain.all()
    }

    pub fn is_pmorphism(&self) -> PMorphismCheck {
        for a in 0..self.domain.len() {
            let reached = self.image(self.domain.up(a));
            let target = self.codomain.up(self.assignment[a]);
            if let Some(missed) = target.difference(reached).first() {
                return PMorphismCheck::Fails { element: a, missed };
            }
        }
        PMorphismCheck::Holds
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonotoneMap) -> Result<MonotoneMap, PosetError> {
        if self.codomain != next.domain {
            return Err(PosetError::BadAssignment);
        }
        let assignment = self.assignment.iter().map(|&i| next.assignment[i]).collect();
        MonotoneMap::new(self.domain.clone(), next.codomain.clone(), assignment)
    }
}

/// Checks that `map` (indices of `a` to indices of `b`) is an order isomorphism.
pub fn is_order_isomorphism(a: &Poset, b: &Poset, map: &[usize]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut hit = ElemSet::EMPTY;
    for &t in map {
        if t >= b.len() || hit.contains(t) {
            return false;
        }
        hit = hit.with(t);
    }
    (0..a.len()).all(|i| (0..a.len()).all(|j| a.leq(i, j) == b.leq(map[i], map[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2(lo: &str, hi: &str) -> Poset {
        Poset::from_covers(&[lo, hi], &[(lo, hi)]).unwrap()
    }

    #[test]
    fn identity_is_pmorphism() {
        let p = Poset::from_covers(&["r", "x", "y"], &[("r", "x"), ("r", "y")]).unwrap();
        let id = MonotoneMap::identity(&p);
        assert!(id.is_pmorphism().holds());
        assert!(id.is_surjective());
    }

    #[test]
    fn constant_to_point_is_pmorphism() {
        let point = Poset::antichain(1);
        let f = MonotoneMap::new(chain2("a", "b"), point, vec![0, 0]).unwrap();
        assert!(f.is_pmorphism().holds());
    }

    #[test]
    fn collapsing_chain_onto_bottom_fails() {
        let f =
            MonotoneMap::from_names(chain2("a", "b"), chain2("x", "y"), &[("a", "x"), ("b", "x")]).unwrap();
        assert_eq!(f.is_pmorphism(), PMorphismCheck::Fails { element: 0, missed: 1 });
    }

    #[test]
    fn non_monotone_rejected() {
        let err = MonotoneMap::new(chain2("a", "b"), chain2("x", "y"), vec![1, 0]).unwrap_err();
        assert!(matches!(err, PosetError::NotMonotone(..)));
        assert_eq!(
            MonotoneMap::new(chain2("a", "b"), chain2("x", "y"), vec![0]).unwrap_err(),
            PosetError::BadAssignment
        );
    }

    #[test]
    fn isomorphism_check() {
        let a = chain2("a", "b");
        let b = chain2("x", "y");
        assert!(is_order_isomorphism(&a, &b, &[0, 1]));
        assert!(!is_order_isomorphism(&a, &b, &[1, 0]));
        assert!(!is_order_isomorphism(&a, &b, &[0, 0]));
    }
}
