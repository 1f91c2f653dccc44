use std::fmt;

use super::{Complex, ComplexError, Scalar};
use crate::algebra::{coheyting_of_lowersets, heyting_of_upsets, FiniteCoHeyting, FiniteHeyting};
use crate::poset::ElemSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// A union of closed simplices; its flags form a lower set.
    Closed,
    /// A union of open stars; its flags form an up-set.
    Open,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Closed => "closed",
            Polarity::Open => "open",
        })
    }
}

/// A polyhedron definable from a fixed complex, stored as simplex flags.
///
/// A closed set is the union of its (closed) simplices; an open set is the
/// union of the relative interiors of its simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DefinableSet {
    polarity: Polarity,
    flags: ElemSet,
}

impl DefinableSet {
    pub fn new<S: Scalar>(k: &Complex<S>, polarity: Polarity, flags: ElemSet) -> Result<Self, ComplexError> {
        let p = k.face_poset();
        let ok = flags.is_subset(p.all())
            && match polarity {
                Polarity::Closed => p.is_lowerset(flags),
                Polarity::Open => p.is_upset(flags),
            };
        if !ok {
            return Err(ComplexError::NotDefinable {
                polarity,
                simplices: p.set_names(flags.intersection(p.all())),
            });
        }
        Ok(DefinableSet { polarity, flags })
    }

    pub fn closed<S: Scalar>(k: &Complex<S>, flags: ElemSet) -> Result<Self, ComplexError> {
        Self::new(k, Polarity::Closed, flags)
    }

    pub fn open<S: Scalar>(k: &Complex<S>, flags: ElemSet) -> Result<Self, ComplexError> {
        Self::new(k, Polarity::Open, flags)
    }

    /// The closed set spanned by the named simplices and all their faces.
    pub fn closure_of<S: Scalar, T: AsRef<str>>(k: &Complex<S>, names: &[T]) -> Result<Self, ComplexError> {
        let set = lookup_all(k, names)?;
        Ok(DefinableSet { polarity: Polarity::Closed, flags: k.face_poset().down_closure(set) })
    }

    /// The open set of all simplices having a named simplex as a face.
    pub fn star_of<S: Scalar, T: AsRef<str>>(k: &Complex<S>, names: &[T]) -> Result<Self, ComplexError> {
        let set = lookup_all(k, names)?;
        Ok(DefinableSet { polarity: Polarity::Open, flags: k.face_poset().up_closure(set) })
    }

    pub fn whole<S: Scalar>(k: &Complex<S>, polarity: Polarity) -> Self {
        DefinableSet { polarity, flags: k.face_poset().all() }
    }

    pub fn nothing(polarity: Polarity) -> Self {
        DefinableSet { polarity, flags: ElemSet::EMPTY }
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn flags(&self) -> ElemSet {
        self.flags
    }

    pub fn names<S: Scalar>(&self, k: &Complex<S>) -> Vec<String> {
        k.face_poset().set_names(self.flags)
    }

    fn expect(&self, polarity: Polarity) -> Result<(), ComplexError> {
        if self.polarity != polarity {
            return Err(ComplexError::PolarityMismatch { expected: polarity, found: self.polarity });
        }
        Ok(())
    }

    fn same(&self, other: &Self) -> Result<(), ComplexError> {
        other.expect(self.polarity)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, ComplexError> {
        self.same(other)?;
        Ok(DefinableSet { polarity: self.polarity, flags: self.flags.intersection(other.flags) })
    }

    pub fn union(&self, other: &Self) -> Result<Self, ComplexError> {
        self.same(other)?;
        Ok(DefinableSet { polarity: self.polarity, flags: self.flags.union(other.flags) })
    }
}

fn lookup_all<S: Scalar, T: AsRef<str>>(k: &Complex<S>, names: &[T]) -> Result<ElemSet, ComplexError> {
    names.iter().map(|n| k.lookup(n.as_ref())).collect::<Result<ElemSet, _>>()
}

/// The open star of `sigma`: every simplex having it as a face.
pub fn open_star<S: Scalar>(k: &Complex<S>, sigma: &str) -> Result<DefinableSet, ComplexError> {
    let s = k.lookup(sigma)?;
    Ok(DefinableSet { polarity: Polarity::Open, flags: k.face_poset().up(s) })
}

/// Whether `x ∈ S`; in both polarities this is `carrier(x) ∈ flags`.
pub fn member<S: Scalar>(k: &Complex<S>, set: &DefinableSet, x: &[S]) -> Result<bool, ComplexError> {
    Ok(set.flags.contains(k.carrier(x)?))
}

/// `C ⇐ D`: the closure of `C \ D`, i.e. every face of a simplex of `C` not in `D`.
pub fn co_implication<S: Scalar>(
    k: &Complex<S>,
    c: &DefinableSet,
    d: &DefinableSet,
) -> Result<DefinableSet, ComplexError> {
    c.expect(Polarity::Closed)?;
    d.expect(Polarity::Closed)?;
    Ok(DefinableSet { polarity: Polarity::Closed, flags: k.face_poset().co_implies(c.flags, d.flags) })
}

/// `U → V`: the simplices `σ` with `↑σ ∩ U ⊆ V`.
pub fn heyting_implication<S: Scalar>(
    k: &Complex<S>,
    u: &DefinableSet,
    v: &DefinableSet,
) -> Result<DefinableSet, ComplexError> {
    u.expect(Polarity::Open)?;
    v.expect(Polarity::Open)?;
    Ok(DefinableSet { polarity: Polarity::Open, flags: k.face_poset().implies(u.flags, v.flags) })
}

/// The co-Heyting algebra of closed and the Heyting algebra of open definable sets.
pub fn definable_algebras<S: Scalar>(
    k: &Complex<S>,
    cap: usize,
) -> Result<(FiniteCoHeyting, FiniteHeyting), ComplexError> {
    let p = k.face_poset();
    Ok((coheyting_of_lowersets(p, cap)?, heyting_of_upsets(p, cap)?))
}

/// Carriers of the points reached by stepping from `x` a little toward the
/// barycenter of each closed simplex containing `x`, then `x`'s own carrier.
///
/// These are exactly the simplices whose relative interiors meet every
/// neighbourhood of `x` in `|K|`; they are found here from coordinates alone.
pub fn nearby_carriers<S: Scalar>(k: &Complex<S>, x: &[S]) -> Result<Vec<usize>, ComplexError> {
    let eps = S::from_ratio(1, 100);
    let mut out = Vec::new();
    for t in k.simplices_containing(x) {
        let b = k.barycenter(t);
        let y: Vec<S> =
            x.iter().zip(&b).map(|(xi, bi)| xi.clone() + eps.clone() * (bi.clone() - xi.clone())).collect();
        out.push(k.carrier(&y)?);
    }
    out.push(k.carrier(x)?);
    Ok(out)
}

/// Whether `x` lies in the interior (relative to `|K|`) of `(|K| \ U) ∪ V`,
/// judged on the points of [`nearby_carriers`].
pub fn implication_holds_near<S: Scalar>(
    k: &Complex<S>,
    u: &DefinableSet,
    v: &DefinableSet,
    x: &[S],
) -> Result<bool, ComplexError> {
    Ok(nearby_carriers(k, x)?.into_iter().all(|c| !u.flags.contains(c) || v.flags.contains(c)))
}
