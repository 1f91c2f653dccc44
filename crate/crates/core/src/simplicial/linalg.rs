//! Gaussian elimination and Fourier–Motzkin elimination over an ordered field.

use super::Scalar;

/// Row-reduces in place and returns the pivot column of each nonzero row.
fn reduce<S: Scalar>(m: &mut [Vec<S>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = S::one() / m[row][col].clone();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = f.clone() * m[row][c].clone();
                    m[r][c] = m[r][c].clone() - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank<S: Scalar>(mut rows: Vec<Vec<S>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    reduce(&mut rows, cols).len()
}

/// Solves `Σ_j a[i][j] x_j = b[i]`. Returns `None` if inconsistent; free
/// variables (if any) are set to zero.
pub(crate) fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], vars: usize) -> Option<Vec<S>> {
    let mut m: Vec<Vec<S>> =
        a.iter().zip(b).map(|(row, rhs)| row.iter().cloned().chain([rhs.clone()]).collect()).collect();
    let pivots = reduce(&mut m, vars);
    if m[pivots.len()..].iter().any(|row| !row[vars].is_zero()) {
        return None;
    }
    let mut x = vec![S::zero(); vars];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][vars].clone();
    }
    Some(x)
}

/// `coeffs · x ≥ rhs`, or `>` when `strict`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Ineq<S> {
    pub coeffs: Vec<S>,
    pub rhs: S,
    pub strict: bool,
}

impl<S: Scalar> Ineq<S> {
    pub fn new(coeffs: Vec<S>, rhs: S, strict: bool) -> Self {
        Ineq { coeffs, rhs, strict }
    }

    /// `x_j ≥ 0`.
    pub fn nonneg(vars: usize, j: usize) -> Self {
        let mut coeffs = vec![S::zero(); vars];
        coeffs[j] = S::one();
        Ineq::new(coeffs, S::zero(), false)
    }

    fn scaled(&self, k: &S) -> Self {
        Ineq {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
            rhs: self.rhs.clone() * k.clone(),
            strict: self.strict,
        }
    }

    /// Divides by the magnitude of the leading nonzero coefficient.
    fn normalized(self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => {
                let k = S::one() / lead.abs();
                self.scaled(&k)
            }
            None => self,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// For a constant row: whether `0 ≥ rhs` (or `0 > rhs`) holds.
    fn constant_holds(&self) -> bool {
        if self.strict {
            self.rhs.is_negative()
        } else {
            !self.rhs.is_positive()
        }
    }
}

/// Decides whether `eqs` (rows `a · x = b`) and `ineqs` have a common real
/// solution. Equalities are eliminated first by Gaussian elimination, the
/// remaining variables by Fourier–Motzkin with strictness tracking.
pub(crate) fn feasible<S: Scalar>(vars: usize, eqs: &[(Vec<S>, S)], ineqs: Vec<Ineq<S>>) -> bool {
    let mut m: Vec<Vec<S>> =
        eqs.iter().map(|(row, rhs)| row.iter().cloned().chain([rhs.clone()]).collect()).collect();
    let pivots = reduce(&mut m, vars);
    if m[pivots.len()..].iter().any(|row| !row[vars].is_zero()) {
        return false;
    }
    // Substitute x_p = rhs_r − Σ_free m[r][j] x_j.
    let mut rows: Vec<Ineq<S>> = ineqs
        .into_iter()
        .map(|mut q| {
            for (r, &p) in pivots.iter().enumerate() {
                let c = q.coeffs[p].clone();
                if c.is_zero() {
                    continue;
                }
                for (qj, mj) in q.coeffs.iter_mut().zip(&m[r][..vars]) {
                    *qj = qj.clone() - c.clone() * mj.clone();
                }
                q.rhs = q.rhs.clone() - c * m[r][vars].clone();
            }
            q
        })
        .collect();

    for j in 0..vars {
        let mut kept = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for q in rows {
            if q.is_constant() {
                if !q.constant_holds() {
                    return false;
                }
                continue;
            }
            let c = &q.coeffs[j];
            if c.is_positive() {
                pos.push(q);
            } else if c.is_negative() {
                neg.push(q);
            } else {
                kept.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                let a = p.coeffs[j].clone();
                let c = -n.coeffs[j].clone();
                let (sp, sn) = (p.scaled(&c), n.scaled(&a));
                let combined = Ineq {
                    coeffs: sp.coeffs.iter().zip(&sn.coeffs).map(|(x, y)| x.clone() + y.clone()).collect(),
                    rhs: sp.rhs + sn.rhs,
                    strict: p.strict || n.strict,
                };
                kept.push(combined);
            }
        }
        rows = Vec::with_capacity(kept.len());
        for q in kept.into_iter().map(Ineq::normalized) {
            // A strict copy implies the non-strict one; keep the stronger.
            match rows.iter_mut().find(|r: &&mut Ineq<S>| r.coeffs == q.coeffs && r.rhs == q.rhs) {
                Some(r) => r.strict |= q.strict,
                None => rows.push(q),
            }
        }
    }
    rows.iter().all(Ineq::constant_holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn row(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_of_collinear_points() {
        assert_eq!(rank(vec![row(&[1, 1]), row(&[2, 2])]), 1);
        assert_eq!(rank(vec![row(&[1, 0]), row(&[0, 1])]), 2);
        assert_eq!(rank::<Rational>(vec![]), 0);
    }

    #[test]
    fn solves_systems() {
        let a = vec![row(&[1, 1]), row(&[1, -1])];
        assert_eq!(solve(&a, &row(&[2, 0]), 2), Some(row(&[1, 1])));
        let a = vec![row(&[1, 1]), row(&[2, 2])];
        assert_eq!(solve(&a, &row(&[1, 3]), 2), None);
    }

    #[test]
    fn strictness_matters() {
        // x ≥ 0, −x ≥ 0 is feasible; x > 0, −x ≥ 0 is not.
        let both = |strict| {
            feasible(1, &[], vec![Ineq::new(row(&[1]), q(0), strict), Ineq::new(row(&[-1]), q(0), false)])
        };
        assert!(both(false));
        assert!(!both(true));
    }

    #[test]
    fn equalities_are_eliminated() {
        // x + y = 1, x ≥ 0, y ≥ 0, x − y > 1 is infeasible; x − y ≥ 1 is feasible.
        let eqs = vec![(row(&[1, 1]), q(1))];
        let run = |strict| {
            feasible(
                2,
                &eqs,
                vec![Ineq::nonneg(2, 0), Ineq::nonneg(2, 1), Ineq::new(row(&[1, -1]), q(1), strict)],
            )
        };
        assert!(run(false));
        assert!(!run(true));
        assert!(!feasible(1, &[(row(&[0]), q(1))], vec![]));
    }

    #[test]
    fn agrees_with_grid_search_on_small_boxes() {
        // Constraints a·x ≥ b over x in a box; compare with a fine rational grid.
        let systems: Vec<Vec<(Vec<i64>, i64, bool)>> = vec![
            vec![(vec![1, 0], 0, false), (vec![0, 1], 0, false), (vec![-1, -1], -1, true)],
            vec![(vec![1, 1], 2, false), (vec![-1, 0], -1, false), (vec![0, -1], -1, true)],
            vec![(vec![1, -2], 0, true), (vec![-1, 2], 0, false)],
            vec![(vec![2, 1], 1, true), (vec![-1, 0], 0, false), (vec![0, -1], 0, false)],
        ];
        for sys in systems {
            let ineqs: Vec<Ineq<Rational>> =
                sys.iter().map(|(c, b, s)| Ineq::new(row(c), q(*b), *s)).collect();
            let grid = (-8..=8).any(|i| {
                (-8..=8).any(|j| {
                    let x = [Rational::new(i.into(), 4.into()), Rational::new(j.into(), 4.into())];
                    ineqs.iter().all(|r| {
                        let v = r.coeffs[0].clone() * x[0].clone() + r.coeffs[1].clone() * x[1].clone();
                        if r.strict {
                            v > r.rhs
                        } else {
                            v >= r.rhs
                        }
                    })
                })
            });
            assert_eq!(feasible(2, &[], ineqs), grid, "{sys:?}");
        }
    }
}
