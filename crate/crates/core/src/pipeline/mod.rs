//! Bounded countermodel search and verification suites.

mod suites;

pub use suites::{
    bd_chain_refutation, gamma_pointwise, verify_dim_bd, verify_esakia, verify_hneg, verify_ji, verify_nerve,
    DimBdReport, EsakiaReport, GammaReport, HnegReport, JiReport, NerveReport, ValidityMethod,
};

use serde_json::{json, Value};

use crate::algebra::{eval, is_valid, AlgebraError, SearchLimits, Validity, Valuation};
use crate::formula::Formula;
use crate::nerve::{transfer_countermodel, NerveError, PolyhedralCountermodel};
use crate::poset::{enumerate_posets, Poset};
use crate::simplicial::ComplexError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error("bounds must be at least 1")]
    BadBounds,
    #[error("the complex is empty")]
    EmptyComplex,
}

/// Search bounds recorded in a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_size: usize,
    pub max_depth: Option<usize>,
    pub frames_checked: usize,
}

impl Bounds {
    fn to_json(self) -> Value {
        json!({
            "max_size": self.max_size,
            "max_depth": self.max_depth,
            "frames_checked": self.frames_checked,
        })
    }
}

/// Outcome of a bounded search. Validity is never claimed.
#[derive(Clone, Debug)]
pub enum Verdict {
    RefutedOnFrame { frame: Poset, valuation: Valuation, bounds: Bounds },
    RefutedOnPolyhedron { countermodel: Box<PolyhedralCountermodel>, bounds: Bounds },
    NoCountermodelUpToBound { bounds: Bounds },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        !matches!(self, Verdict::NoCountermodelUpToBound { .. })
    }

    pub fn bounds(&self) -> Bounds {
        match self {
            Verdict::RefutedOnFrame { bounds, .. }
            | Verdict::RefutedOnPolyhedron { bounds, .. }
            | Verdict::NoCountermodelUpToBound { bounds } => *bounds,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::RefutedOnFrame { .. } => "RefutedOnFrame",
            Verdict::RefutedOnPolyhedron { .. } => "RefutedOnPolyhedron",
            Verdict::NoCountermodelUpToBound { .. } => "NoCountermodelUpToBound",
        }
    }

    /// Re-evaluates the witness, if any; `true` for an unrefuted verdict.
    pub fn reverify(&self, f: &Formula) -> bool {
        match self {
            Verdict::RefutedOnFrame { frame, valuation, .. } => {
                matches!(eval(frame, valuation, f), Ok(u) if u != frame.all())
            }
            Verdict::RefutedOnPolyhedron { countermodel, .. } => {
                countermodel.formula == *f && countermodel.reverify()
            }
            Verdict::NoCountermodelUpToBound { .. } => true,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({ "status": self.status(), "bounds": self.bounds().to_json() });
        match self {
            Verdict::RefutedOnFrame { frame, valuation, .. } => {
                out["frame"] = serde_json::to_value(frame.to_file()).expect("serializes");
                out["depth"] = frame.depth().into();
                out["valuation"] = valuation.to_json_value(frame);
            }
            Verdict::RefutedOnPolyhedron { countermodel, .. } => {
                out["countermodel"] = countermodel.to_json();
            }
            Verdict::NoCountermodelUpToBound { .. } => {}
        }
        out
    }
}

/// First refutation over all frames with at most `max_size` elements and
/// depth at most `max_depth`, in enumeration order (size, then canonical code).
pub fn find_frame_countermodel(
    f: &Formula,
    max_size: usize,
    max_depth: usize,
    limits: SearchLimits,
) -> Result<Verdict, PipelineError> {
    search(f, max_size, Some(max_depth), limits)
}

fn search(
    f: &Formula,
    max_size: usize,
    max_depth: Option<usize>,
    limits: SearchLimits,
) -> Result<Verdict, PipelineError> {
    if max_size == 0 {
        return Err(PipelineError::BadBounds);
    }
    let mut bounds = Bounds { max_size, max_depth, frames_checked: 0 };
    for n in 1..=max_size {
        for frame in enumerate_posets(n, max_depth.unwrap_or(n)) {
            bounds.frames_checked += 1;
            if let Validity::Refuted(valuation) = is_valid(&frame, f, limits)? {
                return Ok(Verdict::RefutedOnFrame { frame, valuation, bounds });
            }
        }
    }
    Ok(Verdict::NoCountermodelUpToBound { bounds })
}

/// Bounded search for a countermodel of `f` in `IPC + BD_d`: frames of depth at most `d`.
pub fn decide_in_bd_logic(
    f: &Formula,
    d: usize,
    max_size: usize,
    limits: SearchLimits,
) -> Result<Verdict, PipelineError> {
    search(f, max_size, Some(d), limits)
}

/// A frame countermodel of depth at most `d`, realized as a polyhedron of
/// dimension equal to the frame's depth.
pub fn polyhedral_countermodel(
    f: &Formula,
    d: usize,
    max_size: usize,
    limits: SearchLimits,
) -> Result<Verdict, PipelineError> {
    match decide_in_bd_logic(f, d, max_size, limits)? {
        Verdict::RefutedOnFrame { frame, valuation, bounds } => {
            let countermodel = transfer_countermodel(&frame, &valuation, f)?;
            assert_eq!(countermodel.dim(), frame.depth());
            Ok(Verdict::RefutedOnPolyhedron { countermodel: Box::new(countermodel), bounds })
        }
        other => Ok(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::algebra_depth;
    use crate::algebra::heyting_of_upsets;
    use crate::formula::{bd, peirce, weak_excluded_middle};
    use crate::poset::{is_isomorphic, DEFAULT_UPSET_CAP};

    fn lim() -> SearchLimits {
        SearchLimits::default()
    }

    fn parse(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn frame_search_examples() {
        let v = find_frame_countermodel(&bd(0), 2, 1, lim()).unwrap();
        let Verdict::RefutedOnFrame { frame, .. } = &v else { panic!("{v:?}") };
        assert!(is_isomorphic(frame, &Poset::chain(2)));
        assert!(v.reverify(&bd(0)));
        let v = find_frame_countermodel(&parse("p -> p"), 4, 3, lim()).unwrap();
        assert!(!v.is_refuted());
        let v = find_frame_countermodel(&peirce(), 2, 1, lim()).unwrap();
        let Verdict::RefutedOnFrame { frame, .. } = &v else { panic!("{v:?}") };
        assert!(is_isomorphic(frame, &Poset::chain(2)));
        assert_eq!(find_frame_countermodel(&bd(0), 0, 1, lim()).unwrap_err(), PipelineError::BadBounds);
    }

    #[test]
    fn bd_logic_examples() {
        for d in 0..=2 {
            let v = decide_in_bd_logic(&bd(d), d, 4, lim()).unwrap();
            assert!(!v.is_refuted(), "bd({d})");
        }
        let v = decide_in_bd_logic(&bd(1), 2, 3, lim()).unwrap();
        let Verdict::RefutedOnFrame { frame, .. } = &v else { panic!("{v:?}") };
        assert_eq!(frame.depth(), 2);
        let h = heyting_of_upsets(frame, DEFAULT_UPSET_CAP).unwrap();
        assert_eq!(algebra_depth(&h).unwrap(), 2);
        let v = decide_in_bd_logic(&Formula::Bottom, 0, 1, lim()).unwrap();
        let Verdict::RefutedOnFrame { frame, .. } = &v else { panic!("{v:?}") };
        assert_eq!(frame.len(), 1);
    }

    #[test]
    fn polyhedral_examples() {
        for f in [bd(0), peirce(), weak_excluded_middle()] {
            let v = polyhedral_countermodel(&f, 1, 3, lim()).unwrap();
            let Verdict::RefutedOnPolyhedron { countermodel, .. } = &v else { panic!("{v:?}") };
            assert_eq!(countermodel.dim(), 1);
            assert!(v.reverify(&f));
            assert_eq!(v.to_json()["status"], "RefutedOnPolyhedron");
        }
        let v = polyhedral_countermodel(&parse("p -> p"), 2, 3, lim()).unwrap();
        assert!(!v.is_refuted());
    }

    #[test]
    fn bd_logic_agrees_with_unrestricted_search() {
        let formulas = [bd(0), bd(1), peirce(), weak_excluded_middle(), parse("(p -> q) | (q -> p)")];
        for f in &formulas {
            for d in 0..=2 {
                let restricted = decide_in_bd_logic(f, d, 4, lim()).unwrap();
                let any = find_frame_countermodel(f, 4, d, lim()).unwrap();
                assert_eq!(restricted.is_refuted(), any.is_refuted());
                if let Verdict::RefutedOnFrame { frame, .. } = &restricted {
                    assert!(frame.depth() <= d as i64);
                }
            }
        }
    }
}
