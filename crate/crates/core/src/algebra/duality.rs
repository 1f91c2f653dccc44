use super::{heyting_of_upsets, AlgebraError, FiniteHeyting, FiniteLattice, HeytingAlgebra};
use crate::poset::{ElemSet, MonotoneMap, PMorphismCheck, Poset};

/// Elements `j ≠ ⊥` that are not the join of the elements strictly below them.
pub fn join_irreducibles<L: FiniteLattice + ?Sized>(l: &L) -> Vec<usize> {
    (0..l.len()).filter(|&j| j != l.bottom() && l.join_strictly_below(j) != j).collect()
}

/// Same set as [`join_irreducibles`], straight from `j = a ∨ b ⇒ j = a or j = b`.
pub fn join_irreducibles_by_definition<L: FiniteLattice + ?Sized>(l: &L) -> Vec<usize> {
    (0..l.len())
        .filter(|&j| {
            j != l.bottom()
                && (0..l.len()).all(|a| (0..l.len()).all(|b| l.join(a, b) != j || a == j || b == j))
        })
        .collect()
}

/// Prime filters, each stored as its join-irreducible generator.
#[derive(Clone, Debug)]
pub struct Spectrum {
    poset: Poset,
    generators: Vec<usize>,
}

impl Spectrum {
    /// Filters ordered by inclusion.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Generator (lattice index) of each spectrum point.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }
}

/// The prime spectrum. The filter generated by `j` contains the one
/// generated by `k` iff `j ≤ k`.
pub fn spec<L: FiniteLattice + ?Sized>(l: &L) -> Result<Spectrum, AlgebraError> {
    let generators = join_irreducibles(l);
    let names = generators.iter().map(|&j| l.label(j)).collect();
    let poset = Poset::from_relation(names, |a, b| l.leq(generators[b], generators[a]))?;
    Ok(Spectrum { poset, generators })
}

/// Length of the longest chain of prime filters, minus one.
pub fn algebra_depth<L: FiniteLattice + ?Sized>(l: &L) -> Result<usize, AlgebraError> {
    if l.len() <= 1 {
        return Err(AlgebraError::TrivialAlgebra);
    }
    Ok(spec(l)?.poset.depth() as usize)
}

/// Which parts of the homomorphism and bijection conditions a map satisfies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub elements: usize,
    pub top: bool,
    pub bottom: bool,
    pub meet: bool,
    pub join: bool,
    pub implication: bool,
    pub injective: bool,
    pub surjective: bool,
    /// First violated condition, for diagnostics.
    pub failure: Option<String>,
}

impl HomomorphismReport {
    pub fn is_homomorphism(&self) -> bool {
        self.top && self.bottom && self.meet && self.join && self.implication
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_homomorphism() && self.injective && self.surjective
    }

    fn check<S, T>(s: &S, t: &T, map: &[usize]) -> Self
    where
        S: HeytingAlgebra + ?Sized,
        T: HeytingAlgebra + ?Sized,
    {
        let mut r = HomomorphismReport {
            elements: s.len(),
            top: map[s.top()] == t.top(),
            bottom: map[s.bottom()] == t.bottom(),
            meet: true,
            join: true,
            implication: true,
            ..Default::default()
        };
        let mut failure = None;
        for a in 0..s.len() {
            for b in 0..s.len() {
                let (fa, fb) = (map[a], map[b]);
                let checks = [
                    ("meet", map[s.meet(a, b)] == t.meet(fa, fb)),
                    ("join", map[s.join(a, b)] == t.join(fa, fb)),
                    ("implication", map[s.implies(a, b)] == t.implies(fa, fb)),
                ];
                for (what, ok) in checks {
                    if !ok {
                        match what {
                            "meet" => r.meet = false,
                            "join" => r.join = false,
                            _ => r.implication = false,
                        }
                        failure.get_or_insert_with(|| format!("{what} of {} and {}", s.label(a), s.label(b)));
                    }
                }
            }
        }
        let mut hit = vec![false; t.len()];
        let mut injective = true;
        for &x in map {
            injective &= !std::mem::replace(&mut hit[x], true);
        }
        r.injective = injective;
        r.surjective = hit.iter().all(|&h| h);
        if !r.top {
            failure.get_or_insert_with(|| "top".into());
        }
        if !r.bottom {
            failure.get_or_insert_with(|| "bottom".into());
        }
        r.failure = failure;
        r
    }
}

/// `h ↦ {prime filters containing h}` together with its verification.
#[derive(Clone, Debug)]
pub struct StoneMap {
    spectrum: Spectrum,
    up_spec: FiniteHeyting,
    images: Vec<ElemSet>,
    report: HomomorphismReport,
}

impl StoneMap {
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `Up(Spec H)`.
    pub fn codomain(&self) -> &FiniteHeyting {
        &self.up_spec
    }

    /// Image of element `h` as an up-set of the spectrum.
    pub fn apply(&self, h: usize) -> ElemSet {
        self.images[h]
    }

    pub fn report(&self) -> &HomomorphismReport {
        &self.report
    }
}

/// Builds the Stone map and checks it without asserting the outcome.
pub fn verify_stone<H: HeytingAlgebra + ?Sized>(h: &H) -> Result<StoneMap, AlgebraError> {
    let spectrum = spec(h)?;
    let gens = spectrum.generators.clone();
    let up_spec = heyting_of_upsets(&spectrum.poset, usize::MAX)?;
    let images: Vec<ElemSet> =
        (0..h.len()).map(|x| (0..gens.len()).filter(|&i| h.leq(gens[i], x)).collect()).collect();
    let mut map = Vec::with_capacity(images.len());
    let mut report = None;
    for (x, img) in images.iter().enumerate() {
        match up_spec.index_of(*img) {
            Some(i) => map.push(i),
            None => {
                report = Some(HomomorphismReport {
                    elements: h.len(),
                    failure: Some(format!("image of {} is not an up-set", h.label(x))),
                    ..Default::default()
                });
                break;
            }
        }
    }
    let report = report.unwrap_or_else(|| HomomorphismReport::check(h, &up_spec, &map));
    Ok(StoneMap { spectrum, up_spec, images, report })
}

/// The Stone isomorphism `H → Up(Spec H)`.
///
/// # Panics
/// If the map fails to be a Heyting isomorphism, which would be a bug.
pub fn stone_map<H: HeytingAlgebra + ?Sized>(h: &H) -> Result<StoneMap, AlgebraError> {
    let s = verify_stone(h)?;
    assert!(s.report.is_isomorphism(), "Stone map is not an isomorphism: {:?}", s.report);
    Ok(s)
}

/// `U ↦ f⁻¹[U]` from `Up(B)` to `Up(A)` for a p-morphism `f: A → B`.
#[derive(Clone, Debug)]
pub struct PreimageHomomorphism {
    source: FiniteHeyting,
    target: FiniteHeyting,
    table: Vec<usize>,
    report: HomomorphismReport,
}

impl PreimageHomomorphism {
    /// `Up(B)`.
    pub fn source(&self) -> &FiniteHeyting {
        &self.source
    }

    /// `Up(A)`.
    pub fn target(&self) -> &FiniteHeyting {
        &self.target
    }

    pub fn apply(&self, u: ElemSet) -> Option<ElemSet> {
        self.source.index_of(u).map(|i| self.target.element(self.table[i]))
    }

    pub fn is_injective(&self) -> bool {
        self.report.injective
    }

    pub fn report(&self) -> &HomomorphismReport {
        &self.report
    }
}

/// # Panics
/// If `f` is surjective but the preimage map is not injective, or the
/// preimage map is not a homomorphism; both would be bugs.
pub fn up_of_pmorphism(f: &MonotoneMap, cap: usize) -> Result<PreimageHomomorphism, AlgebraError> {
    if let PMorphismCheck::Fails { element, missed } = f.is_pmorphism() {
        return Err(AlgebraError::NotPMorphism {
            element: f.domain().name(element).to_string(),
            missed: f.codomain().name(missed).to_string(),
        });
    }
    let source = heyting_of_upsets(f.codomain(), cap)?;
    let target = heyting_of_upsets(f.domain(), cap)?;
    let table: Vec<usize> = source
        .elements()
        .iter()
        .map(|&u| {
            target.index_of(f.preimage(u)).expect("preimage of an up-set under a monotone map is an up-set")
        })
        .collect();
    let report = HomomorphismReport::check(&source, &target, &table);
    assert!(report.is_homomorphism(), "preimage map: {:?}", report);
    if f.is_surjective() {
        assert!(report.injective, "surjective p-morphism gave a non-injective map");
    }
    Ok(PreimageHomomorphism { source, target, table, report })
}
