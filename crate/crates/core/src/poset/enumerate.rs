//! Posets up to isomorphism.
//!
//! Canonical forms come from individualization and refinement: colours start
//! from (strict down-degree, strict up-degree, height) and are refined by the
//! multisets of colours strictly below and above. When refinement stalls,
//! each member of the first non-singleton class is individualized in turn.
//! The minimum relabelled relation matrix over all leaves is the canonical code.

use std::collections::{BTreeMap, BTreeSet};

use super::{ElemSet, Poset};

/// Rows of the strict order `i < j` after canonical relabelling.
pub type CanonicalCode = Vec<u128>;

fn initial_colours(p: &Poset) -> Vec<usize> {
    let height = p.heights();
    let keys: Vec<(usize, usize, usize)> =
        (0..p.len()).map(|i| (p.down(i).len() - 1, p.up(i).len() - 1, height[i])).collect();
    rank(&keys)
}

fn classes(c: &[usize]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

fn refine(p: &Poset, mut colour: Vec<usize>) -> Vec<usize> {
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..p.len())
            .map(|i| {
                let mut below: Vec<usize> = p.down(i).without(i).iter().map(|j| colour[j]).collect();
                let mut above: Vec<usize> = p.up(i).without(i).iter().map(|j| colour[j]).collect();
                below.sort_unstable();
                above.sort_unstable();
                (colour[i], below, above)
            })
            .collect();
        let next = rank(&sig);
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let distinct: BTreeMap<T, usize> =
        keys.iter().cloned().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(r, k)| (k, r)).collect();
    keys.iter().map(|k| distinct[k]).collect()
}

fn code_for(p: &Poset, order: &[usize]) -> CanonicalCode {
    order
        .iter()
        .map(|&i| {
            let mut row = 0u128;
            for (pos, &j) in order.iter().enumerate() {
                if p.lt(i, j) {
                    row |= 1 << pos;
                }
            }
            row
        })
        .collect()
}

/// The canonical code together with the element order that realises it.
fn canonical_order(p: &Poset) -> (CanonicalCode, Vec<usize>) {
    fn search(p: &Poset, colour: Vec<usize>, best: &mut Option<(CanonicalCode, Vec<usize>)>) {
        let colour = refine(p, colour);
        let n = p.len();
        if classes(&colour) == n {
            let mut order = vec![0; n];
            for (i, &c) in colour.iter().enumerate() {
                order[c] = i;
            }
            let code = code_for(p, &order);
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                *best = Some((code, order));
            }
            return;
        }
        let mut size = vec![0usize; n];
        for &c in &colour {
            size[c] += 1;
        }
        let target = (0..n).find(|&c| size[c] > 1).expect("a non-singleton class");
        for m in (0..n).filter(|&i| colour[i] == target) {
            let keys: Vec<(usize, bool)> = (0..n).map(|i| (colour[i], i != m)).collect();
            search(p, rank(&keys), best);
        }
    }
    let mut best = None;
    if !p.is_empty() {
        search(p, initial_colours(p), &mut best);
    }
    best.unwrap_or_default()
}

/// Isomorphism-invariant code; equal codes iff isomorphic posets.
pub fn canonical_code(p: &Poset) -> CanonicalCode {
    canonical_order(p).0
}

pub fn is_isomorphic(a: &Poset, b: &Poset) -> bool {
    a.len() == b.len() && canonical_code(a) == canonical_code(b)
}

fn from_code(code: &CanonicalCode) -> Poset {
    let n = code.len();
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    let up = code.iter().enumerate().map(|(i, &row)| ElemSet(row).with(i)).collect();
    Poset::from_up_unchecked(names, up)
}

/// All posets on `n` elements of depth at most `max_depth`, one per
/// isomorphism class, named `x1..xn` and sorted by canonical code.
pub fn enumerate_posets(n: usize, max_depth: usize) -> std::vec::IntoIter<Poset> {
    // Every poset is a smaller one plus a maximal element whose strict
    // down-set is a lower set, so extending class representatives suffices.
    let mut level: BTreeSet<CanonicalCode> = BTreeSet::new();
    level.insert(Vec::new());
    for k in 0..n {
        let mut next = BTreeSet::new();
        for code in &level {
            let p = from_code(code);
            let lowers = p.all_lowersets(usize::MAX).expect("uncapped enumeration cannot fail");
            for below in lowers {
                let mut up: Vec<ElemSet> = (0..k).map(|i| p.up(i)).collect();
                for i in below {
                    up[i] = up[i].with(k);
                }
                up.push(ElemSet::singleton(k));
                let names = (1..=k + 1).map(|i| format!("x{i}")).collect();
                let q = Poset::from_up_unchecked(names, up);
                if q.depth() <= max_depth as i64 {
                    next.insert(canonical_code(&q));
                }
            }
        }
        level = next;
    }
    level.iter().map(from_code).collect::<Vec<_>>().into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_iso(a: &Poset, b: &Poset) -> bool {
        a.len() == b.len()
            && permutations(a.len()).iter().any(|m| super::super::map::is_order_isomorphism(a, b, m))
    }

    /// All partial orders on `n` labelled points by filtering every relation.
    fn brute_posets(n: usize) -> Vec<Poset> {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1 << pairs.len()) {
            let leq = |i: usize, j: usize| {
                i == j || pairs.iter().position(|&p| p == (i, j)).is_some_and(|k| mask >> k & 1 == 1)
            };
            let names = (1..=n).map(|i| format!("x{i}")).collect();
            if let Ok(p) = Poset::from_relation(names, leq) {
                out.push(p);
            }
        }
        out
    }

    fn brute_classes(n: usize) -> Vec<Poset> {
        let mut reps: Vec<Poset> = Vec::new();
        for p in brute_posets(n) {
            if !reps.iter().any(|r| brute_iso(r, &p)) {
                reps.push(p);
            }
        }
        reps
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_posets(1, 10).count(), 1);
        assert_eq!(enumerate_posets(2, 1).count(), 2);
        assert_eq!(enumerate_posets(2, 0).count(), 1);
        assert_eq!(brute_classes(3).len(), 5);
        assert_eq!(enumerate_posets(3, 10).count(), 5);
    }

    #[test]
    fn known_class_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_posets(n, n).count()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn depth_filter_matches_brute_force() {
        for n in 1..=4 {
            let classes = brute_classes(n);
            for d in 0..n {
                let expected = classes.iter().filter(|p| p.depth() <= d as i64).count();
                assert_eq!(enumerate_posets(n, d).count(), expected, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn canonical_code_agrees_with_pairwise_isomorphism() {
        for n in 1..=4 {
            let all = brute_posets(n);
            // compare a spread of labelled posets pairwise
            let sample: Vec<&Poset> = all.iter().step_by(1 + all.len() / 60).collect();
            for a in &sample {
                for b in &sample {
                    assert_eq!(is_isomorphic(a, b), brute_iso(a, b));
                }
            }
        }
        let reps: Vec<Poset> = enumerate_posets(5, 5).collect();
        let mut sample: Vec<&Poset> = reps.iter().step_by(3).collect();
        sample.truncate(21);
        for (i, a) in sample.iter().enumerate() {
            for (j, b) in sample.iter().enumerate() {
                assert_eq!(brute_iso(a, b), i == j);
            }
        }
    }

    #[test]
    fn six_element_representatives_are_pairwise_distinct() {
        let reps: Vec<Poset> = enumerate_posets(6, 6).collect();
        // Invariants partition the classes; check brute force inside each block.
        let mut blocks: BTreeMap<(Vec<usize>, i64, usize), Vec<&Poset>> = BTreeMap::new();
        for p in &reps {
            let mut degs: Vec<usize> = (0..6).map(|i| p.up(i).len() * 8 + p.down(i).len()).collect();
            degs.sort_unstable();
            let rel: usize = (0..6).map(|i| p.up(i).len()).sum();
            blocks.entry((degs, p.depth(), rel)).or_default().push(p);
        }
        for block in blocks.values() {
            for (i, a) in block.iter().enumerate() {
                for b in &block[i + 1..] {
                    assert!(!brute_iso(a, b));
                }
            }
        }
    }

    #[test]
    fn relabelling_preserves_code() {
        let p = Poset::from_covers(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("b", "d")]).unwrap();
        let q = Poset::from_covers(&["w", "x", "y", "z"], &[("z", "w"), ("y", "w"), ("y", "x")]).unwrap();
        assert!(is_isomorphic(&p, &q));
        assert!(!is_isomorphic(&p, &Poset::chain(4)));
    }
}
