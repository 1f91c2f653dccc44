use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::PipelineError;
use crate::algebra::{
    algebra_depth, decide_validity, eval, heyting_of_upsets, is_valid, join_irreducibles, spec,
    up_of_pmorphism, verify_stone, AlgebraError, FiniteLattice, HomomorphismReport, SearchLimits, Valuation,
};
use crate::formula::bd;
use crate::nerve::{max_pmorphism, nerve, realize};
use crate::poset::{is_isomorphic, is_order_isomorphism, ElemSet, Poset};
use crate::simplicial::{
    co_implication, definable_algebras, heyting_implication, nearby_carriers, sample_points, Complex,
    DefinableSet, Polarity, Scalar,
};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidityMethod {
    /// Every valuation enumerated.
    Exhaustive,
    /// Attainable values per subformula on rooted subframes.
    ValueSets,
}

/// `v(p_i) = ↑x_{k+1−i}` on the first `k + 2` points of a longest chain
/// `x_0 < x_1 < …`, which refutes `bd(k)` at `x_0`. `None` if the frame is too shallow.
pub fn bd_chain_refutation(frame: &Poset, k: usize) -> Option<Valuation> {
    let chain = frame.longest_chain();
    if chain.len() < k + 2 {
        return None;
    }
    let mut v = Valuation::new();
    for i in 0..=k {
        v.assign(format!("p{i}"), frame.up(chain[k + 1 - i]));
    }
    Some(v)
}

#[derive(Clone, Debug)]
pub struct DimBdReport {
    pub faces: Poset,
    pub dim: i64,
    pub depth: i64,
    pub bd_valid: bool,
    pub method: ValidityMethod,
    /// `(k, valuation, refutes)` for each `k < dim`.
    pub refutations: Vec<(usize, Valuation, bool)>,
}

impl DimBdReport {
    pub fn passed(&self) -> bool {
        self.dim == self.depth
            && self.bd_valid
            && self.refutations.len() == self.dim.max(0) as usize
            && self.refutations.iter().all(|r| r.2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "face_poset_depth": self.depth,
            "bd_valid": self.bd_valid,
            "method": format!("{:?}", self.method),
            "refutations": self.refutations.iter().map(|(k, v, ok)| json!({
                "formula": format!("bd({k})"),
                "valuation": v.to_json_value(&self.faces),
                "refutes": ok,
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

/// `bd(dim K)` is valid on the face poset and every `bd(k)`, `k < dim K`, is
/// refuted by an explicit chain valuation.
pub fn verify_dim_bd<S: Scalar>(k: &Complex<S>, limits: SearchLimits) -> Result<DimBdReport, PipelineError> {
    if k.is_empty() {
        return Err(PipelineError::EmptyComplex);
    }
    let faces = k.face_poset().clone();
    let d = k.dim() as usize;
    let f = bd(d);
    let (valid, method) = match is_valid(&faces, &f, limits) {
        Ok(v) => (v.is_valid(), ValidityMethod::Exhaustive),
        Err(AlgebraError::BudgetExceeded { .. }) => {
            (decide_validity(&faces, &f, limits)?.is_valid(), ValidityMethod::ValueSets)
        }
        Err(e) => return Err(e.into()),
    };
    let mut refutations = Vec::new();
    for j in 0..d {
        let v = bd_chain_refutation(&faces, j).expect("a d-simplex has a chain of d + 1 faces");
        let refutes = eval(&faces, &v, &bd(j))? != faces.all();
        refutations.push((j, v, refutes));
    }
    Ok(DimBdReport { dim: k.dim(), depth: faces.depth(), faces, bd_valid: valid, method, refutations })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JiReport {
    pub simplices: usize,
    pub dim: i64,
    pub closed_jis: usize,
    pub open_jis: usize,
    /// Join-irreducibles of the closed algebra are the principal lower sets.
    pub closed_are_simplices: bool,
    /// Join-irreducibles of the open algebra are the open stars.
    pub open_are_stars: bool,
    /// Longest chains of prime filters, as cardinalities.
    pub closed_chain: usize,
    pub open_chain: usize,
}

impl JiReport {
    pub fn passed(&self) -> bool {
        let n = (self.dim + 1) as usize;
        self.closed_are_simplices
            && self.open_are_stars
            && self.closed_jis == self.simplices
            && self.open_jis == self.simplices
            && self.closed_chain == n
            && self.open_chain == n
    }

    pub fn to_json(&self) -> Value {
        json!({
            "simplices": self.simplices,
            "dim": self.dim,
            "closed_join_irreducibles": self.closed_jis,
            "open_join_irreducibles": self.open_jis,
            "closed_are_simplices": self.closed_are_simplices,
            "open_are_stars": self.open_are_stars,
            "closed_chain": self.closed_chain,
            "open_chain": self.open_chain,
            "passed": self.passed(),
        })
    }
}

pub fn verify_ji<S: Scalar>(k: &Complex<S>, cap: usize) -> Result<JiReport, PipelineError> {
    let (lo, up) = definable_algebras(k, cap)?;
    let sorted = |mut v: Vec<ElemSet>| {
        v.sort();
        v
    };
    let closed: Vec<ElemSet> = join_irreducibles(&lo).iter().map(|&i| lo.element(i)).collect();
    let open: Vec<ElemSet> = join_irreducibles(&up).iter().map(|&i| up.element(i)).collect();
    // Principal lower sets from vertex inclusion, stars likewise.
    let below = |s: usize| -> ElemSet {
        (0..k.len()).filter(|&t| k.simplex(t).iter().all(|v| k.simplex(s).contains(v))).collect()
    };
    let above = |s: usize| -> ElemSet {
        (0..k.len()).filter(|&t| k.simplex(s).iter().all(|v| k.simplex(t).contains(v))).collect()
    };
    let chain = |l: &dyn FiniteLattice| algebra_depth(l).map(|d| d + 1);
    Ok(JiReport {
        simplices: k.len(),
        dim: k.dim(),
        closed_jis: closed.len(),
        open_jis: open.len(),
        closed_are_simplices: closed == sorted((0..k.len()).map(below).collect()),
        open_are_stars: open == sorted((0..k.len()).map(above).collect()),
        closed_chain: chain(&lo)?,
        open_chain: chain(&up)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsakiaReport {
    pub elements: usize,
    pub algebra_size: usize,
    pub spectrum_size: usize,
    /// Same canonical code.
    pub isomorphic: bool,
    /// `a ↦ (filter generated by ↑a)` is an order isomorphism.
    pub explicit_isomorphism: bool,
    pub stone: HomomorphismReport,
}

impl EsakiaReport {
    pub fn passed(&self) -> bool {
        self.isomorphic && self.explicit_isomorphism && self.stone.is_isomorphism()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "algebra_size": self.algebra_size,
            "spectrum_size": self.spectrum_size,
            "isomorphic": self.isomorphic,
            "explicit_isomorphism": self.explicit_isomorphism,
            "stone_isomorphism": self.stone.is_isomorphism(),
            "passed": self.passed(),
        })
    }
}

pub fn verify_esakia(a: &Poset, cap: usize) -> Result<EsakiaReport, PipelineError> {
    let h = heyting_of_upsets(a, cap)?;
    let s = spec(&h)?;
    let map: Option<Vec<usize>> = (0..a.len())
        .map(|i| {
            let gen = h.index_of(a.up(i))?;
            s.generators().iter().position(|&g| g == gen)
        })
        .collect();
    let explicit = map.is_some_and(|m| is_order_isomorphism(a, s.poset(), &m));
    let stone = verify_stone(&h)?.report().clone();
    Ok(EsakiaReport {
        elements: a.len(),
        algebra_size: h.len(),
        spectrum_size: s.poset().len(),
        isomorphic: is_isomorphic(a, s.poset()),
        explicit_isomorphism: explicit,
        stone,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NerveReport {
    pub elements: usize,
    pub depth: i64,
    pub dim: i64,
    pub face_poset_is_nerve: bool,
    pub pmorphism: bool,
    pub surjective: bool,
    pub embedding: bool,
    /// `None` when the geometric pair check was skipped.
    pub triangulation: Option<bool>,
}

impl NerveReport {
    pub fn passed(&self) -> bool {
        self.depth == self.dim
            && self.face_poset_is_nerve
            && self.pmorphism
            && self.surjective
            && self.embedding
            && self.triangulation != Some(false)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "elements": self.elements,
            "depth": self.depth,
            "dim": self.dim,
            "face_poset_is_nerve": self.face_poset_is_nerve,
            "pmorphism": self.pmorphism,
            "surjective": self.surjective,
            "embedding": self.embedding,
            "triangulation": self.triangulation,
            "passed": self.passed(),
        })
    }
}

/// Realization dimension, face poset versus nerve, the max-map and the
/// induced embedding of algebras; optionally the pairwise intersection check.
pub fn verify_nerve(a: &Poset, cap: usize, check_geometry: bool) -> Result<NerveReport, PipelineError> {
    let k = realize::<Rational>(a)?;
    let n = nerve(a)?;
    let f = max_pmorphism(a)?;
    let h = up_of_pmorphism(&f, cap)?;
    Ok(NerveReport {
        elements: a.len(),
        depth: a.depth(),
        dim: k.dim(),
        face_poset_is_nerve: is_isomorphic(k.face_poset(), &n),
        pmorphism: f.is_pmorphism().holds(),
        surjective: f.is_surjective(),
        embedding: h.is_injective() && h.report().is_homomorphism(),
        triangulation: check_geometry.then(|| k.verify().is_ok()),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HnegReport {
    pub seed: u64,
    pub trials: usize,
    pub oracle_mismatches: usize,
    pub adjunction_failures: usize,
    pub minimality_failures: usize,
    pub edge_case_failures: usize,
    pub point_checks: usize,
    pub point_failures: usize,
    pub first_failure: Option<String>,
}

impl HnegReport {
    pub fn passed(&self) -> bool {
        self.oracle_mismatches
            + self.adjunction_failures
            + self.minimality_failures
            + self.edge_case_failures
            + self.point_failures
            == 0
    }

    fn fail(&mut self, what: String) {
        self.first_failure.get_or_insert(what);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "oracle_mismatches": self.oracle_mismatches,
            "adjunction_failures": self.adjunction_failures,
            "minimality_failures": self.minimality_failures,
            "edge_case_failures": self.edge_case_failures,
            "point_checks": self.point_checks,
            "point_failures": self.point_failures,
            "first_failure": self.first_failure,
            "passed": self.passed(),
        })
    }
}

/// Vertex-set inclusion, independent of the stored face order.
fn is_face<S: Scalar>(k: &Complex<S>, s: usize, t: usize) -> bool {
    k.simplex(s).iter().all(|v| k.simplex(t).contains(v))
}

/// Random closed pairs `(C, D)`: the co-implication is compared with the
/// oracle "every face of σ is a face of some τ ∈ C \ D", checked for
/// co-adjunction and minimality over all closed sets, and the result's
/// flags are compared at sample points with geometric membership (a point of
/// `relint σ` lies in a closed definable set iff σ is one of its simplices).
pub fn verify_hneg<S: Scalar>(
    k: &Complex<S>,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<HnegReport, PipelineError> {
    let (lo, _) = definable_algebras(k, cap)?;
    let closed = lo.elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sample_points(k, 2, seed);
    // Closed simplices containing each sample, found by barycentric solves.
    let containing: Vec<ElemSet> =
        samples.iter().map(|s| k.simplices_containing(&s.point).into_iter().collect()).collect();
    let mut r = HnegReport { seed, trials, ..Default::default() };
    let names = |s: ElemSet| k.face_poset().set_names(s).join(",");
    for _ in 0..trials {
        let c = closed[rng.gen_range(0..closed.len())];
        let d = closed[rng.gen_range(0..closed.len())];
        let cs = DefinableSet::closed(k, c)?;
        let ds = DefinableSet::closed(k, d)?;
        let got = co_implication(k, &cs, &ds)?.flags();

        let rest = c.difference(d);
        let oracle: ElemSet = (0..k.len())
            .filter(|&s| {
                (0..k.len()).filter(|&f| is_face(k, f, s)).all(|f| rest.iter().any(|t| is_face(k, f, t)))
            })
            .collect();
        if got != oracle {
            r.oracle_mismatches += 1;
            r.fail(format!("oracle: C={{{}}} D={{{}}}", names(c), names(d)));
        }
        if !c.is_subset(d.union(got)) {
            r.adjunction_failures += 1;
            r.fail(format!("adjunction: C={{{}}} D={{{}}}", names(c), names(d)));
        }
        if closed.iter().any(|&kk| c.is_subset(d.union(kk)) && !got.is_subset(kk)) {
            r.minimality_failures += 1;
            r.fail(format!("minimality: C={{{}}} D={{{}}}", names(c), names(d)));
        }
        let same = co_implication(k, &cs, &cs)?.flags();
        let none = co_implication(k, &cs, &DefinableSet::nothing(Polarity::Closed))?.flags();
        if !same.is_empty() || none != c {
            r.edge_case_failures += 1;
            r.fail(format!("edge cases: C={{{}}}", names(c)));
        }
        for (s, inside) in samples.iter().zip(&containing) {
            r.point_checks += 1;
            let geometric = !inside.intersection(got).is_empty();
            if geometric != got.contains(s.carrier) {
                r.point_failures += 1;
                r.fail(format!("point in {}: result {{{}}}", k.name(s.carrier), names(got)));
            }
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GammaReport {
    pub seed: u64,
    pub points: usize,
    pub pairs: usize,
    pub carrier_failures: usize,
    pub uniqueness_failures: usize,
    pub minimality_failures: usize,
    pub meet_failures: usize,
    pub join_failures: usize,
    pub implication_failures: usize,
    pub injectivity_failures: usize,
    pub first_failure: Option<String>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.carrier_failures
            + self.uniqueness_failures
            + self.minimality_failures
            + self.meet_failures
            + self.join_failures
            + self.implication_failures
            + self.injectivity_failures
            == 0
    }

    fn fail(&mut self, what: String) {
        self.first_failure.get_or_insert(what);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "points": self.points,
            "pairs": self.pairs,
            "carrier_failures": self.carrier_failures,
            "uniqueness_failures": self.uniqueness_failures,
            "minimality_failures": self.minimality_failures,
            "meet_failures": self.meet_failures,
            "join_failures": self.join_failures,
            "implication_failures": self.implication_failures,
            "injectivity_failures": self.injectivity_failures,
            "first_failure": self.first_failure,
            "passed": self.passed(),
        })
    }
}

/// Pointwise checks of the open definable sets at sampled points: carrier
/// uniqueness and minimality, and for random up-set pairs that membership
/// commutes with `∩`, `∪` and `→` (the latter against the local geometry
/// around each point).
pub fn gamma_pointwise<S: Scalar>(
    k: &Complex<S>,
    per_simplex: usize,
    pairs: usize,
    seed: u64,
    cap: usize,
) -> Result<GammaReport, PipelineError> {
    let (_, up) = definable_algebras(k, cap)?;
    let opens = up.elements();
    let samples = sample_points(k, per_simplex, seed);
    let mut r = GammaReport { seed, points: samples.len(), pairs, ..Default::default() };
    let mut carriers = Vec::with_capacity(samples.len());
    let mut nearby = Vec::with_capacity(samples.len());
    for s in &samples {
        let c = k.carrier(&s.point)?;
        if c != s.carrier {
            r.carrier_failures += 1;
            r.fail(format!("carrier of a point drawn from {}", k.name(s.carrier)));
        }
        if k.relint_simplices(&s.point) != [c] {
            r.uniqueness_failures += 1;
            r.fail(format!("several relative interiors contain a point of {}", k.name(c)));
        }
        if !k.simplices_containing(&s.point).into_iter().all(|t| is_face(k, c, t)) {
            r.minimality_failures += 1;
            r.fail(format!("carrier {} is not minimal", k.name(c)));
        }
        carriers.push(c);
        nearby.push(nearby_carriers(k, &s.point)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let names = |s: ElemSet| k.face_poset().set_names(s).join(",");
    for _ in 0..pairs {
        let u = DefinableSet::open(k, opens[rng.gen_range(0..opens.len())])?;
        let v = DefinableSet::open(k, opens[rng.gen_range(0..opens.len())])?;
        let meet = u.intersection(&v)?;
        let join = u.union(&v)?;
        let imp = heyting_implication(k, &u, &v)?;
        let at = |set: &DefinableSet, c: usize| set.flags().contains(c);
        for (i, &c) in carriers.iter().enumerate() {
            if at(&meet, c) != (at(&u, c) && at(&v, c)) {
                r.meet_failures += 1;
            }
            if at(&join, c) != (at(&u, c) || at(&v, c)) {
                r.join_failures += 1;
            }
            let local = nearby[i].iter().all(|&n| !at(&u, n) || at(&v, n));
            if at(&imp, c) != local {
                r.implication_failures += 1;
                r.fail(format!(
                    "U={{{}}} V={{{}}} at a point of {}",
                    names(u.flags()),
                    names(v.flags()),
                    k.name(c)
                ));
            }
        }
        if u != v {
            let diff = u.flags().difference(v.flags()).union(v.flags().difference(u.flags()));
            let s = diff.first().expect("distinct sets differ");
            let x = k.barycenter(s);
            let c = k.carrier(&x)?;
            if at(&u, c) == at(&v, c) {
                r.injectivity_failures += 1;
                r.fail(format!(
                    "U={{{}}} and V={{{}}} agree at the barycenter of {}",
                    names(u.flags()),
                    names(v.flags()),
                    k.name(s)
                ));
            }
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poset::DEFAULT_UPSET_CAP;

    #[test]
    fn chain_valuations_refute() {
        let c = Poset::chain(4);
        for k in 0..=2 {
            let v = bd_chain_refutation(&c, k).unwrap();
            assert_ne!(eval(&c, &v, &bd(k)).unwrap(), c.all());
        }
        assert!(bd_chain_refutation(&c, 3).is_none());
    }

    #[test]
    fn dim_bd_on_small_complexes() {
        for name in ["simplex0", "simplex1", "simplex2", "square", "tetra_boundary"] {
            let k = corpus::complex(name).unwrap();
            let r = verify_dim_bd(&k, SearchLimits::default()).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.to_json());
        }
        let r = verify_dim_bd(&corpus::complex("square").unwrap(), SearchLimits::default()).unwrap();
        assert_eq!(r.dim, 2);
        assert_eq!(r.refutations.len(), 2);
        assert_eq!(
            verify_dim_bd(&Complex::<Rational>::empty(2), SearchLimits::default()).unwrap_err(),
            PipelineError::EmptyComplex
        );
    }

    #[test]
    fn dim_bd_falls_back_to_value_sets() {
        let k = corpus::simplex(3).unwrap();
        let r = verify_dim_bd(&k, SearchLimits::default()).unwrap();
        assert_eq!(r.method, ValidityMethod::ValueSets);
        assert!(r.passed());
    }

    #[test]
    fn ji_on_square() {
        let r = verify_ji(&corpus::complex("square").unwrap(), DEFAULT_UPSET_CAP).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.closed_jis, r.open_jis, r.closed_chain), (11, 11, 3));
    }

    #[test]
    fn esakia_small() {
        for a in corpus::posets(4) {
            assert!(verify_esakia(&a, DEFAULT_UPSET_CAP).unwrap().passed());
        }
    }

    #[test]
    fn nerve_small() {
        for a in corpus::posets(3) {
            let r = verify_nerve(&a, DEFAULT_UPSET_CAP, true).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.triangulation, Some(true));
        }
    }

    #[test]
    fn hneg_on_square_and_triangle() {
        for name in ["square", "simplex2"] {
            let r = verify_hneg(&corpus::complex(name).unwrap(), 60, 7, DEFAULT_UPSET_CAP).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
            assert!(r.point_checks > 0);
        }
    }

    #[test]
    fn gamma_on_square() {
        let r = gamma_pointwise(&corpus::complex("square").unwrap(), 6, 40, 11, DEFAULT_UPSET_CAP).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.points, 66);
    }

    #[test]
    fn suites_are_deterministic() {
        let k = corpus::complex("square").unwrap();
        let a = verify_hneg(&k, 20, 3, DEFAULT_UPSET_CAP).unwrap();
        let b = verify_hneg(&k, 20, 3, DEFAULT_UPSET_CAP).unwrap();
        assert_eq!(a, b);
        let a = gamma_pointwise(&k, 3, 10, 3, DEFAULT_UPSET_CAP).unwrap();
        assert_eq!(a, gamma_pointwise(&k, 3, 10, 3, DEFAULT_UPSET_CAP).unwrap());
    }
}
