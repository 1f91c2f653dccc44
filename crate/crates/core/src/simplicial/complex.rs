use std::collections::HashMap;

use super::linalg::{self, Ineq};
use super::{ComplexError, Scalar};
use crate::poset::{ElemSet, Poset, MAX_ELEMENTS};

/// A finite geometric simplicial complex in `S^n`.
///
/// Simplices are sorted vertex-index lists, kept in canonical order: by
/// dimension, then lexicographically by vertex index (vertices in table order).
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<S> {
    ambient: usize,
    ids: Vec<String>,
    coords: Vec<Vec<S>>,
    simplices: Vec<Vec<usize>>,
    names: Vec<String>,
    index: HashMap<Vec<usize>, usize>,
    faces: Poset,
}

/// Pairs of simplices whose intersection is not a common face.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    pub pairs_checked: usize,
    pub violations: Vec<(String, String)>,
}

impl ComplexReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of the closed pseudo-manifold test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub holds: bool,
    /// `(d−1)`-simplices with the number of `d`-simplices containing them, when that is not 2.
    pub violators: Vec<(String, usize)>,
}

/// Canonical simplex name: vertex ids concatenated when all are single
/// characters, joined by `-` otherwise.
pub fn simplex_name(ids: &[&str]) -> String {
    if ids.iter().all(|s| s.chars().count() == 1) {
        ids.concat()
    } else {
        ids.join("-")
    }
}

impl<S: Scalar> Complex<S> {
    /// Builds the face closure of `maximal`, checking every listed simplex
    /// for affine independence. Every vertex of the table is a 0-simplex.
    pub fn build<V, M>(ambient: usize, vertices: V, maximal: &[M]) -> Result<Self, ComplexError>
    where
        V: IntoIterator<Item = (String, Vec<S>)>,
        M: AsRef<[String]>,
    {
        let mut ids = Vec::new();
        let mut coords = Vec::new();
        let mut by_id: HashMap<String, usize> = HashMap::new();
        for (id, point) in vertices {
            if point.len() != ambient {
                return Err(ComplexError::DimensionMismatch {
                    vertex: id,
                    expected: ambient,
                    found: point.len(),
                });
            }
            if by_id.insert(id.clone(), ids.len()).is_some() {
                return Err(ComplexError::DuplicateVertex(id));
            }
            ids.push(id);
            coords.push(point);
        }
        let single = ids.iter().all(|s| s.chars().count() == 1);
        let mut simplices: Vec<Vec<usize>> = (0..ids.len()).map(|i| vec![i]).collect();
        for listed in maximal {
            let listed = listed.as_ref();
            let mut vs = listed
                .iter()
                .map(|id| by_id.get(id).copied().ok_or_else(|| ComplexError::UnknownVertex(id.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            let label = listed.join(if single { "" } else { "-" });
            vs.sort_unstable();
            if vs.windows(2).any(|w| w[0] == w[1]) || !independent(&coords, &vs) {
                return Err(ComplexError::AffinelyDependent(label));
            }
            if vs.len() > 7 {
                return Err(ComplexError::TooManySimplices((1usize << vs.len()) - 1));
            }
            for mask in 1u32..(1 << vs.len()) {
                simplices.push((0..vs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| vs[k]).collect());
            }
        }
        simplices.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        simplices.dedup();
        if simplices.len() > MAX_ELEMENTS {
            return Err(ComplexError::TooManySimplices(simplices.len()));
        }
        let names: Vec<String> = simplices
            .iter()
            .map(|s| simplex_name(&s.iter().map(|&v| ids[v].as_str()).collect::<Vec<_>>()))
            .collect();
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let up = simplices
            .iter()
            .map(|s| {
                simplices
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| s.iter().all(|v| t.contains(v)))
                    .map(|(j, _)| j)
                    .collect::<ElemSet>()
            })
            .collect();
        let faces = Poset::from_up_unchecked(names.clone(), up);
        Ok(Complex { ambient, ids, coords, simplices, names, index, faces })
    }

    pub fn empty(ambient: usize) -> Self {
        Self::build(ambient, Vec::new(), &[] as &[Vec<String>]).expect("empty complex builds")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex(&self, v: usize) -> &[S] {
        &self.coords[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    /// Number of simplices.
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn simplex(&self, s: usize) -> &[usize] {
        &self.simplices[s]
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn simplex_dim(&self, s: usize) -> usize {
        self.simplices[s].len() - 1
    }

    /// Index of the simplex with exactly these vertex ids, in any order.
    pub fn find_by_ids<T: AsRef<str>>(&self, ids: &[T]) -> Option<usize> {
        let mut vs = ids.iter().map(|id| self.vertex_index(id.as_ref())).collect::<Option<Vec<_>>>()?;
        vs.sort_unstable();
        self.index.get(&vs).copied()
    }

    /// Looks a simplex up by canonical name, or by `,`/`-`-separated vertex ids.
    pub fn lookup(&self, name: &str) -> Result<usize, ComplexError> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(i);
        }
        let parts: Vec<&str> = name.split([',', '-', ' ']).filter(|p| !p.is_empty()).collect();
        let single = self.ids.iter().all(|s| s.chars().count() == 1);
        let by_chars: Vec<String> = name.chars().map(String::from).collect();
        self.find_by_ids(&parts)
            .or_else(|| single.then(|| self.find_by_ids(&by_chars)).flatten())
            .ok_or_else(|| ComplexError::UnknownSimplex(name.to_string()))
    }

    /// The face poset: simplices ordered by inclusion, named canonically.
    pub fn face_poset(&self) -> &Poset {
        &self.faces
    }

    /// Largest simplex dimension; −1 when empty.
    pub fn dim(&self) -> i64 {
        self.simplices.last().map_or(-1, |s| s.len() as i64 - 1)
    }

    pub fn maximal_simplices(&self) -> Vec<usize> {
        self.faces.maximal_elements().iter().collect()
    }

    /// Barycentric coordinates of `x` with respect to simplex `s`, if `x`
    /// lies on its affine hull.
    pub fn barycentric(&self, s: usize, x: &[S]) -> Option<Vec<S>> {
        if x.len() != self.ambient {
            return None;
        }
        let vs = &self.simplices[s];
        let mut a: Vec<Vec<S>> =
            (0..self.ambient).map(|r| vs.iter().map(|&v| self.coords[v][r].clone()).collect()).collect();
        a.push(vec![S::one(); vs.len()]);
        let mut b = x.to_vec();
        b.push(S::one());
        linalg::solve(&a, &b, vs.len())
    }

    /// Whether `x` lies in the closed simplex `s`.
    pub fn contains(&self, s: usize, x: &[S]) -> bool {
        self.barycentric(s, x).is_some_and(|l| l.iter().all(|c| !c.is_negative()))
    }

    /// Whether `x` lies in the relative interior of `s`.
    pub fn in_relint(&self, s: usize, x: &[S]) -> bool {
        self.barycentric(s, x).is_some_and(|l| l.iter().all(|c| c.is_positive()))
    }

    /// The unique simplex whose relative interior contains `x`: the positive
    /// support of `x` in any simplex containing it.
    pub fn carrier(&self, x: &[S]) -> Result<usize, ComplexError> {
        if x.len() != self.ambient {
            return Err(ComplexError::PointDimension { expected: self.ambient, found: x.len() });
        }
        for s in self.maximal_simplices() {
            if let Some(l) = self.barycentric(s, x) {
                if l.iter().all(|c| !c.is_negative()) {
                    let support: Vec<usize> = self.simplices[s]
                        .iter()
                        .zip(&l)
                        .filter(|(_, c)| c.is_positive())
                        .map(|(&v, _)| v)
                        .collect();
                    return Ok(self.index[&support]);
                }
            }
        }
        Err(ComplexError::OutsideSupport)
    }

    /// Every simplex whose relative interior contains `x`, by trying them all.
    pub fn relint_simplices(&self, x: &[S]) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.in_relint(s, x)).collect()
    }

    /// Every closed simplex containing `x`.
    pub fn simplices_containing(&self, x: &[S]) -> Vec<usize> {
        (0..self.len()).filter(|&s| self.contains(s, x)).collect()
    }

    /// `Σ w_i v_i / Σ w_i` over the vertices of `s`.
    pub fn combination(&self, s: usize, weights: &[S]) -> Vec<S> {
        let vs = &self.simplices[s];
        assert_eq!(weights.len(), vs.len(), "one weight per vertex");
        let total = weights.iter().fold(S::zero(), |a, w| a + w.clone());
        (0..self.ambient)
            .map(|r| {
                vs.iter().zip(weights).fold(S::zero(), |a, (&v, w)| a + w.clone() * self.coords[v][r].clone())
                    / total.clone()
            })
            .collect()
    }

    pub fn barycenter(&self, s: usize) -> Vec<S> {
        self.combination(s, &vec![S::one(); self.simplices[s].len()])
    }

    /// Checks that every two simplices meet in a common face (or not at all).
    ///
    /// For `σ, τ` with neither a face of the other, a violation is a point of
    /// `σ ∩ τ` whose barycentric coordinates in `σ` put positive mass outside
    /// the shared vertices. Each such question is a linear feasibility problem.
    pub fn verify(&self) -> ComplexReport {
        let mut report = ComplexReport::default();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.faces.comparable(i, j) {
                    continue;
                }
                report.pairs_checked += 1;
                if self.bad_intersection(i, j) {
                    report.violations.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        report
    }

    fn bad_intersection(&self, i: usize, j: usize) -> bool {
        let (s, t) = (&self.simplices[i], &self.simplices[j]);
        let vars = s.len() + t.len();
        // λ over s then μ over t: Σλ v = Σμ w, Σλ = 1, Σμ = 1.
        let mut eqs = Vec::new();
        for r in 0..self.ambient {
            let row = s
                .iter()
                .map(|&v| self.coords[v][r].clone())
                .chain(t.iter().map(|&w| -self.coords[w][r].clone()))
                .collect();
            eqs.push((row, S::zero()));
        }
        let ones = |first: bool| -> Vec<S> {
            (0..vars).map(|k| if (k < s.len()) == first { S::one() } else { S::zero() }).collect()
        };
        eqs.push((ones(true), S::one()));
        eqs.push((ones(false), S::one()));
        let mut ineqs: Vec<Ineq<S>> = (0..vars).map(|k| Ineq::nonneg(vars, k)).collect();
        let outside: Vec<S> =
            (0..vars).map(|k| if k < s.len() && !t.contains(&s[k]) { S::one() } else { S::zero() }).collect();
        ineqs.push(Ineq::new(outside, S::zero(), true));
        linalg::feasible(vars, &eqs, ineqs)
    }

    /// Whether every `(d−1)`-simplex is a face of exactly two `d`-simplices.
    pub fn is_closed_pseudomanifold(&self, d: usize) -> Result<PseudomanifoldReport, ComplexError> {
        if self.dim() != d as i64 {
            return Err(ComplexError::WrongDimension { expected: d as i64, found: self.dim() });
        }
        if d == 0 {
            // The empty face lies in every vertex.
            let n = self.len();
            return Ok(PseudomanifoldReport {
                holds: n == 2,
                violators: if n == 2 { vec![] } else { vec![(String::new(), n)] },
            });
        }
        let mut violators = Vec::new();
        for f in (0..self.len()).filter(|&f| self.simplex_dim(f) == d - 1) {
            let count = self.faces.up(f).iter().filter(|&t| self.simplex_dim(t) == d).count();
            if count != 2 {
                violators.push((self.names[f].clone(), count));
            }
        }
        Ok(PseudomanifoldReport { holds: violators.is_empty(), violators })
    }
}

fn independent<S: Scalar>(coords: &[Vec<S>], vs: &[usize]) -> bool {
    let Some((&first, rest)) = vs.split_first() else {
        return true;
    };
    let rows: Vec<Vec<S>> = rest
        .iter()
        .map(|&v| coords[v].iter().zip(&coords[first]).map(|(a, b)| a.clone() - b.clone()).collect())
        .collect();
    linalg::rank(rows) == rest.len()
}
