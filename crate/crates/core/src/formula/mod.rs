//! Intuitionistic propositional formulae.
//!
//! The AST has no negation node: `~a` is parsed as `a -> false` and an
//! implication into `false` is printed back as `~a`.

mod parse;

use std::fmt;

pub use parse::{parse, ParseError};

/// A propositional formula over named atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Bottom,
    Top,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Implies(Box::new(left), Box::new(right))
    }

    /// `f -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::implies(f, Formula::Bottom)
    }

    /// The operand of a negation, if this formula is one.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(inner, rhs) if **rhs == Formula::Bottom => Some(inner),
            _ => None,
        }
    }

    /// Atom names in first-occurrence order (left to right), without duplicates.
    pub fn atoms(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_atoms(&mut |name| {
            if !out.iter().any(|seen| seen == name) {
                out.push(name.to_string());
            }
        });
        out
    }

    fn visit_atoms(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Atom(name) => f(name),
            Formula::Bottom | Formula::Top => {}
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit_atoms(f);
                r.visit_atoms(f);
            }
        }
    }

    /// Height of the syntax tree; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => 0,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Bottom | Formula::Top => 1,
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// The bounded-depth schema `bd(d)` over atoms `p0..pd`.
///
/// `bd(0) = p0 | ~p0` and `bd(d) = pd | (pd -> bd(d-1))`.
pub fn bd(d: usize) -> Formula {
    let p0 = Formula::atom("p0");
    let mut f = Formula::or(p0.clone(), Formula::not(p0));
    for i in 1..=d {
        let p = Formula::atom(format!("p{i}"));
        f = Formula::or(p.clone(), Formula::implies(p, f));
    }
    f
}

/// Peirce's law `((p -> q) -> p) -> p`.
pub fn peirce() -> Formula {
    let p = || Formula::atom("p");
    Formula::implies(Formula::implies(Formula::implies(p(), Formula::atom("q")), p()), p())
}

/// Weak excluded middle `~p | ~~p`.
pub fn weak_excluded_middle() -> Formula {
    let np = Formula::not(Formula::atom("p"));
    Formula::or(np.clone(), Formula::not(np))
}

// Binding strength, loosest first.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_NEG: u8 = 4;
const PREC_ATOM: u8 = 5;

fn prec(f: &Formula) -> u8 {
    if f.as_negation().is_some() {
        return PREC_NEG;
    }
    match f {
        Formula::Atom(_) | Formula::Bottom | Formula::Top => PREC_ATOM,
        Formula::And(..) => PREC_AND,
        Formula::Or(..) => PREC_OR,
        Formula::Implies(..) => PREC_IMP,
    }
}

fn write_operand(out: &mut fmt::Formatter<'_>, f: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

/// Renders with the fewest parentheses the grammar needs, except that a
/// disjunction directly under an implication is always bracketed
/// (`p1 | (p1 -> (p0 | ~p0))`).
impl fmt::Display for Formula {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(inner) = self.as_negation() {
            out.write_str("~")?;
            return write_operand(out, inner, prec(inner) < PREC_NEG);
        }
        match self {
            Formula::Atom(name) => out.write_str(name),
            Formula::Bottom => out.write_str("false"),
            Formula::Top => out.write_str("true"),
            Formula::And(l, r) => {
                write_operand(out, l, prec(l) < PREC_AND)?;
                out.write_str(" & ")?;
                write_operand(out, r, prec(r) <= PREC_AND)
            }
            Formula::Or(l, r) => {
                write_operand(out, l, prec(l) < PREC_OR)?;
                out.write_str(" | ")?;
                write_operand(out, r, prec(r) <= PREC_OR)
            }
            Formula::Implies(l, r) => {
                write_operand(out, l, prec(l) <= PREC_OR)?;
                out.write_str(" -> ")?;
                write_operand(out, r, prec(r) == PREC_OR)
            }
        }
    }
}

/// Canonical text of a formula.
pub fn print(f: &Formula) -> String {
    f.to_string()
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn prints_examples() {
        let em = Formula::or(a("p0"), Formula::implies(a("p0"), Formula::Bottom));
        assert_eq!(print(&em), "p0 | ~p0");
        assert_eq!(print(&Formula::Bottom), "false");
        let f = Formula::implies(Formula::and(a("p0"), a("p1")), a("p2"));
        assert_eq!(print(&f), "p0 & p1 -> p2");
    }

    #[test]
    fn bd_unfolds() {
        assert_eq!(bd(0).to_string(), "p0 | ~p0");
        assert_eq!(bd(1).to_string(), "p1 | (p1 -> (p0 | ~p0))");
        assert_eq!(bd(2).to_string(), "p2 | (p2 -> (p1 | (p1 -> (p0 | ~p0))))");
    }

    #[test]
    fn atoms_in_first_occurrence_order() {
        assert_eq!(bd(1).atoms(), vec!["p1", "p0"]);
        assert!(Formula::Bottom.atoms().is_empty());
        assert_eq!(parse("p0 & p0").unwrap().atoms(), vec!["p0"]);
    }

    #[test]
    fn bd_grows_linearly() {
        for d in 0..12 {
            let f = bd(d);
            assert_eq!(f.atoms().len(), d + 1);
            assert_eq!(f.depth(), 2 * d + 2);
        }
    }

    #[test]
    fn negation_of_compound_keeps_parens() {
        let f = Formula::not(Formula::or(a("p"), a("q")));
        assert_eq!(f.to_string(), "~(p | q)");
        let g = Formula::not(Formula::implies(a("p"), a("q")));
        assert_eq!(g.to_string(), "~(p -> q)");
        assert_eq!(Formula::not(Formula::not(a("p"))).to_string(), "~~p");
        assert_eq!(peirce().to_string(), "((p -> q) -> p) -> p");
        assert_eq!(weak_excluded_middle().to_string(), "~p | ~~p");
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf =
            prop_oneof![Just(Formula::Bottom), Just(Formula::Top), "[a-c][0-2]?".prop_map(Formula::Atom),];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
                inner.prop_map(Formula::not),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let text = print(&f);
            prop_assert_eq!(parse(&text).unwrap(), f);
        }

        #[test]
        fn printing_is_a_fixed_point(f in arb_formula()) {
            let once = print(&f);
            let twice = print(&parse(&once).unwrap());
            prop_assert_eq!(once, twice);
        }
    }
}
