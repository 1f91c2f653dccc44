//! The nerve of a finite poset, its realization on standard basis vectors,
//! the max-element p-morphism and transfer of frame countermodels.

use serde_json::{json, Value};

use crate::algebra::{eval, AlgebraError, Valuation};
use crate::formula::Formula;
use crate::poset::{ElemSet, MonotoneMap, Poset, PosetError, MAX_ELEMENTS};
use crate::simplicial::{simplex_name, Complex, ComplexError, Scalar};
use crate::{Rational, RationalComplex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NerveError {
    #[error("the empty poset has no nerve")]
    EmptyPoset,
    #[error("nerve has {0} chains; at most 128 are supported")]
    TooManyChains(usize),
    #[error("valuation does not refute the formula on the frame")]
    NotACountermodel,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

impl From<PosetError> for NerveError {
    fn from(e: PosetError) -> Self {
        NerveError::Algebra(e.into())
    }
}

/// Nonempty chains as sorted element-index lists, by size then lexicographically.
pub fn chains(a: &Poset) -> Result<Vec<Vec<usize>>, NerveError> {
    if a.is_empty() {
        return Err(NerveError::EmptyPoset);
    }
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..a.len()).rev().map(|i| vec![i]).collect();
    while let Some(c) = stack.pop() {
        let last = *c.last().unwrap();
        for j in (last + 1..a.len()).rev() {
            if c.iter().all(|&i| a.comparable(i, j)) {
                let mut next = c.clone();
                next.push(j);
                stack.push(next);
            }
        }
        out.push(c);
        if out.len() > MAX_ELEMENTS {
            return Err(NerveError::TooManyChains(out.len()));
        }
    }
    out.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    Ok(out)
}

fn chain_name(a: &Poset, c: &[usize]) -> String {
    simplex_name(&c.iter().map(|&i| a.name(i)).collect::<Vec<_>>())
}

/// The poset of nonempty chains of `a` ordered by inclusion.
pub fn nerve(a: &Poset) -> Result<Poset, NerveError> {
    let cs = chains(a)?;
    let names = cs.iter().map(|c| chain_name(a, c)).collect();
    let as_set = |c: &[usize]| c.iter().copied().collect::<ElemSet>();
    let sets: Vec<ElemSet> = cs.iter().map(|c| as_set(c)).collect();
    Ok(Poset::from_relation(names, |i, j| sets[i].is_subset(sets[j]))?)
}

/// The nerve realized in `S^n`, element `i` at the basis vector `e_i`.
pub fn realize<S: Scalar>(a: &Poset) -> Result<Complex<S>, NerveError> {
    let cs = chains(a)?;
    let n = a.len();
    let vertices = (0..n).map(|i| {
        let e = (0..n).map(|k| if k == i { S::one() } else { S::zero() }).collect();
        (a.name(i).to_string(), e)
    });
    let sets: Vec<ElemSet> = cs.iter().map(|c| c.iter().copied().collect()).collect();
    let maximal: Vec<Vec<String>> = cs
        .iter()
        .zip(&sets)
        .filter(|(_, s)| !sets.iter().any(|t| t != *s && s.is_subset(*t)))
        .map(|(c, _)| c.iter().map(|&i| a.name(i).to_string()).collect())
        .collect();
    Ok(Complex::build(n, vertices, &maximal)?)
}

/// `C ↦ max C` from the nerve onto `a`.
///
/// # Panics
/// If the map is not a surjective p-morphism, which would be a bug.
pub fn max_pmorphism(a: &Poset) -> Result<MonotoneMap, NerveError> {
    let cs = chains(a)?;
    let n = nerve(a)?;
    let assignment = cs
        .iter()
        .map(|c| *c.iter().find(|&&m| c.iter().all(|&x| a.leq(x, m))).expect("chains have a maximum"))
        .collect();
    let f = MonotoneMap::new(n, a.clone(), assignment)?;
    assert!(f.is_pmorphism().holds(), "max map is not a p-morphism");
    assert!(f.is_surjective(), "max map is not surjective");
    Ok(f)
}

/// A frame refutation carried over to the realized nerve.
#[derive(Clone, Debug)]
pub struct PolyhedralCountermodel {
    pub formula: Formula,
    pub frame: Poset,
    pub frame_valuation: Valuation,
    pub frame_evaluation: ElemSet,
    pub complex: RationalComplex,
    /// Atoms to open definable sets (up-sets of the face poset).
    pub valuation: Valuation,
    pub evaluation: ElemSet,
}

impl PolyhedralCountermodel {
    pub fn dim(&self) -> i64 {
        self.complex.dim()
    }

    /// Recomputes both evaluations from scratch and checks they refute.
    pub fn reverify(&self) -> bool {
        let faces = self.complex.face_poset();
        let on_frame = eval(&self.frame, &self.frame_valuation, &self.formula);
        let on_complex = eval(faces, &self.valuation, &self.formula);
        matches!(on_frame, Ok(u) if u != self.frame.all())
            && matches!(on_complex, Ok(u) if u != faces.all() && u == self.evaluation)
            && self.valuation.iter().all(|(_, u)| faces.is_upset(u))
    }

    /// JSON bundle; includes an OFF mesh when the frame has at most three elements.
    pub fn to_json(&self) -> Value {
        let faces = self.complex.face_poset();
        let mut bundle = json!({
            "formula": self.formula.to_string(),
            "frame": self.frame.to_file(),
            "frame_valuation": self.frame_valuation.to_json_value(&self.frame),
            "dimension": self.dim(),
            "complex": self.complex.to_file(),
            "valuation": self.valuation.to_json_value(faces),
            "evaluation": faces.set_names(self.evaluation),
        });
        if self.frame.len() <= 3 {
            bundle["off"] = Value::from(self.complex.to_off().expect("ambient dimension at most 3"));
        }
        bundle
    }
}

/// Pulls `v` back along the max-map to the realized nerve and evaluates there.
///
/// # Panics
/// If the transferred valuation fails to refute, which would be a bug.
pub fn transfer_countermodel(
    a: &Poset,
    v: &Valuation,
    f: &Formula,
) -> Result<PolyhedralCountermodel, NerveError> {
    let frame_evaluation = eval(a, v, f)?;
    if frame_evaluation == a.all() {
        return Err(NerveError::NotACountermodel);
    }
    let complex = realize::<Rational>(a)?;
    let m = max_pmorphism(a)?;
    debug_assert_eq!(m.domain(), complex.face_poset());
    let mut valuation = Valuation::new();
    for atom in f.atoms() {
        let u = v.get(&atom).ok_or_else(|| AlgebraError::MissingAtom(atom.clone()))?;
        valuation.assign(atom, m.preimage(u));
    }
    let evaluation = eval(complex.face_poset(), &valuation, f)?;
    assert_ne!(evaluation, complex.face_poset().all(), "transferred valuation does not refute");
    Ok(PolyhedralCountermodel {
        formula: f.clone(),
        frame: a.clone(),
        frame_valuation: v.clone(),
        frame_evaluation,
        complex,
        valuation,
        evaluation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::up_of_pmorphism;
    use crate::formula::{bd, peirce, weak_excluded_middle};
    use crate::poset::{enumerate_posets, is_isomorphic, DEFAULT_UPSET_CAP};

    fn chain2() -> Poset {
        Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn fork() -> Poset {
        Poset::from_covers(&["r", "x", "y"], &[("r", "x"), ("r", "y")]).unwrap()
    }

    #[test]
    fn nerve_examples() {
        let n = nerve(&Poset::from_covers(&["a", "b"], &[] as &[(&str, &str)]).unwrap()).unwrap();
        assert_eq!(n.names(), ["a", "b"]);
        assert_eq!(n.depth(), 0);
        let n = nerve(&chain2()).unwrap();
        assert_eq!(n.names(), ["a", "b", "ab"]);
        assert!(n.lt(0, 2) && n.lt(1, 2) && !n.comparable(0, 1));
        let n = nerve(&fork()).unwrap();
        assert_eq!(n.names(), ["r", "x", "y", "rx", "ry"]);
        assert_eq!(n.depth(), 1);
        assert_eq!(nerve(&Poset::empty()).unwrap_err(), NerveError::EmptyPoset);
        assert_eq!(nerve(&Poset::chain(3)).unwrap().names()[6], "x1-x2-x3");
    }

    #[test]
    fn realization_examples() {
        let k = realize::<Rational>(&chain2()).unwrap();
        assert_eq!(k.ambient_dim(), 2);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.vertex(0), [Rational::from_integer(1.into()), Rational::from_integer(0.into())]);
        let k = realize::<Rational>(&Poset::antichain(1)).unwrap();
        assert_eq!((k.ambient_dim(), k.dim()), (1, 0));
        let k = realize::<Rational>(&Poset::chain(3)).unwrap();
        assert_eq!((k.len(), k.dim()), (7, 2));
    }

    #[test]
    fn max_map_examples() {
        let f = max_pmorphism(&chain2()).unwrap();
        assert_eq!(f.assignment(), [0, 1, 1]);
        let f = max_pmorphism(&fork()).unwrap();
        assert_eq!(f.assignment(), [0, 1, 2, 1, 2]);
        let f = max_pmorphism(&Poset::antichain(1)).unwrap();
        assert_eq!(f.assignment(), [0]);
    }

    #[test]
    fn nerve_properties_exhaustive() {
        for n in 1..=5 {
            for a in enumerate_posets(n, n) {
                let k = realize::<Rational>(&a).unwrap();
                assert_eq!(k.dim(), a.depth());
                let nv = nerve(&a).unwrap();
                assert_eq!(k.face_poset(), &nv);
                assert!(is_isomorphic(k.face_poset(), &nv));
                let f = max_pmorphism(&a).unwrap();
                let h = up_of_pmorphism(&f, DEFAULT_UPSET_CAP).unwrap();
                assert!(h.is_injective() && h.report().is_homomorphism());
            }
        }
    }

    #[test]
    fn realizations_are_triangulations() {
        for n in 1..=4 {
            for a in enumerate_posets(n, n) {
                assert!(realize::<Rational>(&a).unwrap().verify().is_ok());
            }
        }
    }

    #[test]
    fn transfers() {
        let c = chain2();
        let b = ElemSet::singleton(1);
        let v = Valuation::new().with("p", b).with("q", ElemSet::EMPTY);
        let cm = transfer_countermodel(&c, &v, &peirce()).unwrap();
        assert_eq!(cm.dim(), 1);
        assert_eq!(cm.complex.face_poset().set_names(cm.valuation.get("p").unwrap()), ["b", "ab"]);
        assert!(cm.reverify());

        let v = Valuation::new().with("p0", b);
        let cm = transfer_countermodel(&c, &v, &bd(0)).unwrap();
        assert_eq!(cm.dim(), 1);
        assert!(cm.to_json()["off"].as_str().unwrap().starts_with("OFF"));

        let v = Valuation::new().with("p", ElemSet::singleton(1));
        let cm = transfer_countermodel(&fork(), &v, &weak_excluded_middle()).unwrap();
        assert_eq!(cm.dim(), 1);
        assert!(cm.reverify());

        let v = Valuation::new().with("p0", c.all());
        assert_eq!(transfer_countermodel(&c, &v, &bd(0)).unwrap_err(), NerveError::NotACountermodel);
    }
}
