use std::collections::HashMap;
use std::rc::Rc;

use serde_json::{Map, Value};

use super::{AlgebraError, HeytingAlgebra};
use crate::formula::Formula;
use crate::poset::{ElemSet, Poset, PosetError};

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Assignment of up-sets to atoms, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    entries: Vec<(String, ElemSet)>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, atom: impl Into<String>, set: ElemSet) {
        let atom = atom.into();
        match self.entries.iter_mut().find(|(a, _)| *a == atom) {
            Some(slot) => slot.1 = set,
            None => self.entries.push((atom, set)),
        }
    }

    pub fn with(mut self, atom: impl Into<String>, set: ElemSet) -> Self {
        self.assign(atom, set);
        self
    }

    pub fn get(&self, atom: &str) -> Option<ElemSet> {
        self.entries.iter().find(|(a, _)| a == atom).map(|e| e.1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ElemSet)> {
        self.entries.iter().map(|(a, s)| (a.as_str(), *s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Builds a valuation from element names, rejecting sets that are not up-closed.
    pub fn from_names<A: AsRef<str>, S: AsRef<str>>(
        frame: &Poset,
        entries: &[(A, Vec<S>)],
    ) -> Result<Self, PosetError> {
        let mut v = Valuation::new();
        for (atom, names) in entries {
            v.assign(atom.as_ref(), frame.upset_from_names(names)?);
        }
        Ok(v)
    }

    /// Reads `{"p": ["a", "b"], ...}`.
    pub fn from_json(frame: &Poset, text: &str) -> Result<Self, PosetError> {
        let bad = |e: String| PosetError::Json(e);
        let map: Map<String, Value> = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let mut v = Valuation::new();
        for (atom, value) in map {
            let names: Vec<String> =
                serde_json::from_value(value).map_err(|e| bad(format!("atom `{atom}`: {e}")))?;
            v.assign(atom, frame.upset_from_names(&names)?);
        }
        Ok(v)
    }

    pub fn to_json_value(&self, frame: &Poset) -> Value {
        let map: Map<String, Value> =
            self.entries.iter().map(|(a, s)| (a.clone(), Value::from(frame.set_names(*s)))).collect();
        Value::Object(map)
    }

    /// `p0 = {b}, q = {}`.
    pub fn describe(&self, frame: &Poset) -> String {
        self.entries
            .iter()
            .map(|(a, s)| format!("{a} = {{{}}}", frame.set_names(*s).join(", ")))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Refuted(Valuation),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            Validity::Valid => None,
            Validity::Refuted(v) => Some(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest number of up-sets any frame may have.
    pub cap: usize,
    /// Largest number of formula evaluations a search may perform.
    pub budget: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { cap: crate::poset::DEFAULT_UPSET_CAP, budget: DEFAULT_BUDGET }
    }
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Atom(usize),
    Bottom,
    Top,
    And,
    Or,
    Implies,
}

/// A formula flattened to postfix over atom slots.
struct Program {
    atoms: Vec<String>,
    ops: Vec<Op>,
}

impl Program {
    fn compile(f: &Formula) -> Self {
        let atoms = f.atoms();
        let mut ops = Vec::with_capacity(f.size());
        fn walk(f: &Formula, atoms: &[String], ops: &mut Vec<Op>) {
            match f {
                Formula::Atom(a) => ops.push(Op::Atom(atoms.iter().position(|x| x == a).unwrap())),
                Formula::Bottom => ops.push(Op::Bottom),
                Formula::Top => ops.push(Op::Top),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                    walk(l, atoms, ops);
                    walk(r, atoms, ops);
                    ops.push(match f {
                        Formula::And(..) => Op::And,
                        Formula::Or(..) => Op::Or,
                        _ => Op::Implies,
                    });
                }
            }
        }
        walk(f, &atoms, &mut ops);
        Program { atoms, ops }
    }

    #[allow(clippy::too_many_arguments)]
    fn run<T: Copy>(
        &self,
        vals: &[T],
        stack: &mut Vec<T>,
        bottom: T,
        top: T,
        and: impl Fn(T, T) -> T,
        or: impl Fn(T, T) -> T,
        imp: impl Fn(T, T) -> T,
    ) -> T {
        stack.clear();
        for op in &self.ops {
            let x = match *op {
                Op::Atom(i) => vals[i],
                Op::Bottom => bottom,
                Op::Top => top,
                binary => {
                    let r = stack.pop().unwrap();
                    let l = stack.pop().unwrap();
                    match binary {
                        Op::And => and(l, r),
                        Op::Or => or(l, r),
                        _ => imp(l, r),
                    }
                }
            };
            stack.push(x);
        }
        stack.pop().unwrap()
    }

    fn run_frame(&self, frame: &Poset, vals: &[ElemSet], stack: &mut Vec<ElemSet>) -> ElemSet {
        self.run(vals, stack, ElemSet::EMPTY, frame.all(), ElemSet::intersection, ElemSet::union, |u, v| {
            frame.implies(u, v)
        })
    }
}

/// The up-set a formula denotes on `frame` under `v`.
pub fn eval(frame: &Poset, v: &Valuation, f: &Formula) -> Result<ElemSet, AlgebraError> {
    let prog = Program::compile(f);
    let vals = prog
        .atoms
        .iter()
        .map(|a| v.get(a).ok_or_else(|| AlgebraError::MissingAtom(a.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(prog.run_frame(frame, &vals, &mut Vec::new()))
}

/// Evaluates in an abstract finite Heyting algebra; `v` maps atoms to element indices.
pub fn eval_in<H: HeytingAlgebra>(h: &H, v: &[(&str, usize)], f: &Formula) -> Result<usize, AlgebraError> {
    let prog = Program::compile(f);
    let vals = prog
        .atoms
        .iter()
        .map(|a| {
            v.iter()
                .find(|(name, _)| name == a)
                .map(|e| e.1)
                .ok_or_else(|| AlgebraError::MissingAtom(a.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(run_in(h, &prog, &vals, &mut Vec::new()))
}

fn run_in<H: HeytingAlgebra>(h: &H, prog: &Program, vals: &[usize], stack: &mut Vec<usize>) -> usize {
    prog.run(
        vals,
        stack,
        h.bottom(),
        h.top(),
        |a, b| h.meet(a, b),
        |a, b| h.join(a, b),
        |a, b| h.implies(a, b),
    )
}

fn check_budget(carrier: usize, atoms: usize, budget: u128) -> Result<(), AlgebraError> {
    let required = (0..atoms).try_fold(1u128, |acc, _| acc.checked_mul(carrier as u128));
    match required {
        Some(r) if r <= budget => Ok(()),
        r => Err(AlgebraError::BudgetExceeded { required: r.unwrap_or(u128::MAX), budget }),
    }
}

/// Steps an odometer whose first digit is most significant; false on wrap-around.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

/// Exhaustive validity on a frame.
///
/// Valuations are visited lexicographically: atoms in first-occurrence order,
/// the first atom most significant, up-sets in increasing bitmask order. The
/// first failing valuation is returned.
pub fn is_valid(frame: &Poset, f: &Formula, limits: SearchLimits) -> Result<Validity, AlgebraError> {
    let upsets = frame.all_upsets(limits.cap)?;
    let prog = Program::compile(f);
    let k = prog.atoms.len();
    check_budget(upsets.len(), k, limits.budget)?;
    let full = frame.all();
    let mut digits = vec![0usize; k];
    let mut vals = vec![ElemSet::EMPTY; k];
    let mut stack = Vec::with_capacity(prog.ops.len());
    loop {
        for (slot, &d) in vals.iter_mut().zip(&digits) {
            *slot = upsets[d];
        }
        if prog.run_frame(frame, &vals, &mut stack) != full {
            let mut v = Valuation::new();
            for (a, &s) in prog.atoms.iter().zip(&vals) {
                v.assign(a.clone(), s);
            }
            return Ok(Validity::Refuted(v));
        }
        if !advance(&mut digits, upsets.len()) {
            return Ok(Validity::Valid);
        }
    }
}

/// Exhaustive validity in an abstract finite Heyting algebra (value `⊤` under
/// every assignment), in the same search order as [`is_valid`].
pub fn is_valid_in<H: HeytingAlgebra>(h: &H, f: &Formula, budget: u128) -> Result<bool, AlgebraError> {
    let prog = Program::compile(f);
    let k = prog.atoms.len();
    check_budget(h.len(), k, budget)?;
    let top = h.top();
    let mut digits = vec![0usize; k];
    let mut stack = Vec::with_capacity(prog.ops.len());
    loop {
        if run_in(h, &prog, &digits, &mut stack) != top {
            return Ok(false);
        }
        if !advance(&mut digits, h.len()) {
            return Ok(true);
        }
    }
}

// ---------------------------------------------------------------------------
// Value-set decision procedure.

enum Kind {
    Atom(usize),
    Bottom,
    Top,
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
}

struct Node {
    kind: Kind,
    atoms: u64,
}

/// Value of a subformula paired with the free-atom assignment that produces it.
type Values = Rc<Vec<(ElemSet, Vec<(usize, usize)>)>>;

struct ValueSets<'a> {
    frame: &'a Poset,
    upsets: &'a [ElemSet],
    nodes: &'a [Node],
    memo: HashMap<(usize, Vec<(usize, usize)>), Values>,
    work: u128,
    budget: u128,
}

impl ValueSets<'_> {
    fn charge(&mut self, n: u128) -> Result<(), AlgebraError> {
        self.work += n;
        if self.work > self.budget {
            return Err(AlgebraError::BudgetExceeded { required: self.work, budget: self.budget });
        }
        Ok(())
    }

    /// All values of node `i` over assignments of its free atoms, given `fixed`.
    fn values(&mut self, i: usize, fixed: &[Option<usize>]) -> Result<Values, AlgebraError> {
        let node = &self.nodes[i];
        let key_fixed: Vec<(usize, usize)> = (0..fixed.len())
            .filter(|&a| node.atoms >> a & 1 == 1)
            .filter_map(|a| fixed[a].map(|u| (a, u)))
            .collect();
        let key = (i, key_fixed);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let free = |mask: u64| {
            (0..fixed.len())
                .filter(|&a| mask >> a & 1 == 1 && fixed[a].is_none())
                .fold(0u64, |m, a| m | 1 << a)
        };
        let out: Vec<(ElemSet, Vec<(usize, usize)>)> = match node.kind {
            Kind::Atom(a) => match fixed[a] {
                Some(u) => vec![(self.upsets[u], vec![])],
                None => (0..self.upsets.len()).map(|u| (self.upsets[u], vec![(a, u)])).collect(),
            },
            Kind::Bottom => vec![(ElemSet::EMPTY, vec![])],
            Kind::Top => vec![(self.frame.all(), vec![])],
            Kind::And(l, r) | Kind::Or(l, r) | Kind::Implies(l, r) => {
                let shared = free(self.nodes[l].atoms) & free(self.nodes[r].atoms);
                let mut seen: HashMap<ElemSet, usize> = HashMap::new();
                let mut out = Vec::new();
                if shared == 0 {
                    let lv = self.values(l, fixed)?;
                    let rv = self.values(r, fixed)?;
                    self.charge((lv.len() * rv.len()) as u128)?;
                    for (x, wx) in lv.iter() {
                        for (y, wy) in rv.iter() {
                            let z = match node.kind {
                                Kind::And(..) => x.intersection(*y),
                                Kind::Or(..) => x.union(*y),
                                _ => self.frame.implies(*x, *y),
                            };
                            seen.entry(z).or_insert_with(|| {
                                out.push((z, wx.iter().chain(wy).copied().collect()));
                                out.len() - 1
                            });
                        }
                    }
                } else {
                    // Condition on the first shared atom.
                    let s = shared.trailing_zeros() as usize;
                    let mut next = fixed.to_vec();
                    for u in 0..self.upsets.len() {
                        next[s] = Some(u);
                        let vals = self.values(i, &next)?;
                        for (z, w) in vals.iter() {
                            seen.entry(*z).or_insert_with(|| {
                                let mut w = w.clone();
                                w.push((s, u));
                                out.push((*z, w));
                                out.len() - 1
                            });
                        }
                    }
                }
                out
            }
        };
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        Ok(out)
    }
}

fn build_nodes(f: &Formula, atoms: &[String], nodes: &mut Vec<Node>) -> usize {
    let (kind, mask) = match f {
        Formula::Atom(a) => {
            let i = atoms.iter().position(|x| x == a).unwrap();
            (Kind::Atom(i), 1u64 << i)
        }
        Formula::Bottom => (Kind::Bottom, 0),
        Formula::Top => (Kind::Top, 0),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            let li = build_nodes(l, atoms, nodes);
            let ri = build_nodes(r, atoms, nodes);
            let mask = nodes[li].atoms | nodes[ri].atoms;
            let kind = match f {
                Formula::And(..) => Kind::And(li, ri),
                Formula::Or(..) => Kind::Or(li, ri),
                _ => Kind::Implies(li, ri),
            };
            (kind, mask)
        }
    };
    nodes.push(Node { kind, atoms: mask });
    nodes.len() - 1
}

/// Exact validity without enumerating the full valuation space.
///
/// The value at a point only depends on the valuation above it, so it is
/// enough to decide validity on each rooted subframe `↑m` for minimal `m`.
/// On each of those the set of attainable values of every subformula is
/// computed bottom-up, branching only on atoms shared by both sides of a
/// connective. `limits.budget` bounds the number of value combinations.
pub fn decide_validity(frame: &Poset, f: &Formula, limits: SearchLimits) -> Result<Validity, AlgebraError> {
    let atoms = f.atoms();
    if atoms.len() > 64 {
        return Err(AlgebraError::TooManyAtoms);
    }
    let mut nodes = Vec::new();
    let root = build_nodes(f, &atoms, &mut nodes);
    let mut work = 0u128;
    for m in frame.minimal_elements() {
        let keep = frame.up(m);
        let sub = frame.restrict(keep);
        let original: Vec<usize> = keep.iter().collect();
        let upsets = sub.all_upsets(limits.cap)?;
        let mut search = ValueSets {
            frame: &sub,
            upsets: &upsets,
            nodes: &nodes,
            memo: HashMap::new(),
            work,
            budget: limits.budget,
        };
        let values = search.values(root, &vec![None; atoms.len()])?;
        work = search.work;
        if let Some((_, witness)) = values.iter().find(|(z, _)| *z != sub.all()) {
            let lift = |s: ElemSet| s.iter().map(|i| original[i]).collect::<ElemSet>();
            let mut v = Valuation::new();
            for (a, name) in atoms.iter().enumerate() {
                let u = witness.iter().find(|(x, _)| *x == a).map(|e| e.1);
                v.assign(name.clone(), u.map(|u| lift(upsets[u])).unwrap_or(ElemSet::EMPTY));
            }
            return Ok(Validity::Refuted(v));
        }
    }
    Ok(Validity::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::heyting_of_upsets;
    use crate::formula::{bd, peirce, weak_excluded_middle};
    use crate::poset::{enumerate_posets, DEFAULT_UPSET_CAP};
    use proptest::prelude::*;

    fn chain2() -> Poset {
        Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap()
    }

    fn fork() -> Poset {
        Poset::from_covers(&["r", "x", "y"], &[("r", "x"), ("r", "y")]).unwrap()
    }

    fn lim() -> SearchLimits {
        SearchLimits::default()
    }

    #[test]
    fn eval_examples() {
        let p = chain2();
        let b = ElemSet::singleton(1);
        let v = Valuation::new().with("p", p.all());
        assert_eq!(eval(&p, &v, &"p".parse().unwrap()).unwrap(), p.all());
        let v = Valuation::new().with("p0", b);
        assert_eq!(eval(&p, &v, &bd(0)).unwrap(), b);
        let v = Valuation::new().with("p", b).with("q", ElemSet::EMPTY);
        assert_eq!(eval(&p, &v, &peirce()).unwrap(), b);
    }

    #[test]
    fn missing_atom() {
        let err = eval(&chain2(), &Valuation::new(), &bd(0)).unwrap_err();
        assert_eq!(err, AlgebraError::MissingAtom("p0".into()));
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid(&Poset::antichain(1), &bd(0), lim()).unwrap().is_valid());
        assert!(is_valid(&chain2(), &bd(1), lim()).unwrap().is_valid());
        let r = is_valid(&chain2(), &bd(0), lim()).unwrap();
        // first failing valuation in bitmask order: {b}
        assert_eq!(r, Validity::Refuted(Valuation::new().with("p0", ElemSet::singleton(1))));
        let r = is_valid(&fork(), &weak_excluded_middle(), lim()).unwrap();
        let v = r.countermodel().unwrap();
        assert_ne!(eval(&fork(), v, &weak_excluded_middle()).unwrap(), fork().all());
        assert_eq!(v.get("p"), Some(ElemSet::singleton(1)));
    }

    #[test]
    fn budget_is_checked_up_front() {
        let limits = SearchLimits { budget: 8, ..lim() };
        let err = is_valid(&chain2(), &bd(1), limits).unwrap_err();
        assert_eq!(err, AlgebraError::BudgetExceeded { required: 9, budget: 8 });
    }

    #[test]
    fn depth_correspondence_exhaustive() {
        for n in 1..=6 {
            for p in enumerate_posets(n, n) {
                let h = heyting_of_upsets(&p, DEFAULT_UPSET_CAP).unwrap();
                assert_eq!(crate::algebra::algebra_depth(&h).unwrap() as i64, p.depth());
                for d in 0..=3 {
                    let expect = p.depth() <= d as i64;
                    let valid = match is_valid(&p, &bd(d), lim()) {
                        Ok(v) => v.is_valid(),
                        Err(AlgebraError::BudgetExceeded { .. }) => {
                            decide_validity(&p, &bd(d), lim()).unwrap().is_valid()
                        }
                        Err(e) => panic!("{e}"),
                    };
                    assert_eq!(valid, expect, "{p:?} d={d}");
                }
            }
        }
    }

    #[test]
    fn frame_and_algebra_agree() {
        let formulas = [bd(0), bd(1), peirce(), weak_excluded_middle(), "p -> ~~p".parse().unwrap()];
        for n in 1..=4 {
            for p in enumerate_posets(n, n) {
                let h = heyting_of_upsets(&p, DEFAULT_UPSET_CAP).unwrap();
                for f in &formulas {
                    let frame = is_valid(&p, f, lim()).unwrap().is_valid();
                    assert_eq!(frame, is_valid_in(&h, f, DEFAULT_BUDGET).unwrap());
                }
            }
        }
    }

    #[test]
    fn valuation_json() {
        let p = chain2();
        let v = Valuation::from_json(&p, r#"{"q": ["b"], "p": []}"#).unwrap();
        assert_eq!(v.iter().map(|e| e.0).collect::<Vec<_>>(), vec!["q", "p"]);
        assert_eq!(v.to_json_value(&p).to_string(), r#"{"q":["b"],"p":[]}"#);
        assert!(matches!(Valuation::from_json(&p, r#"{"p": ["a"]}"#), Err(PosetError::NotAnUpSet(_))));
        assert!(Valuation::from_json(&p, r#"{"p": ["z"]}"#).is_err());
        assert!(Valuation::from_json(&p, r#"{"p": 3}"#).is_err());
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            4 => (0..3usize).prop_map(|i| Formula::atom(format!("p{i}"))),
            1 => Just(Formula::Bottom),
            1 => Just(Formula::Top),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
            ]
        })
    }

    fn arb_poset() -> impl Strategy<Value = Poset> {
        (1..=4usize, any::<u64>()).prop_map(|(n, seed)| {
            let all: Vec<Poset> = enumerate_posets(n, n).collect();
            all[(seed % all.len() as u64) as usize].clone()
        })
    }

    proptest! {
        #[test]
        fn value_sets_agree_with_brute_force(p in arb_poset(), f in arb_formula()) {
            let brute = is_valid(&p, &f, lim()).unwrap();
            let fast = decide_validity(&p, &f, lim()).unwrap();
            prop_assert_eq!(brute.is_valid(), fast.is_valid());
            if let Validity::Refuted(v) = fast {
                prop_assert_ne!(eval(&p, &v, &f).unwrap(), p.all());
            }
        }

        #[test]
        fn eval_is_an_upset(p in arb_poset(), f in arb_formula(), bits in any::<u64>()) {
            let ups = p.all_upsets(DEFAULT_UPSET_CAP).unwrap();
            let mut v = Valuation::new();
            for (k, a) in f.atoms().into_iter().enumerate() {
                v.assign(a, ups[(bits >> (8 * k)) as usize % ups.len()]);
            }
            prop_assert!(p.is_upset(eval(&p, &v, &f).unwrap()));
        }
    }
}
