use super::Formula;

/// A syntax error at a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset} ({found}): expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: &'static str,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    False,
    True,
    And,
    Or,
    Arrow,
    Tilde,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::False => "`false`".into(),
            Tok::True => "`true`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'~' => Tok::Tilde,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(ParseError { offset: i, expected: "`->`", found: "`-`".into() });
                }
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "false" => Tok::False,
                    "true" => Tok::True,
                    ident => Tok::Ident(ident.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError { offset: i, expected: "a formula token", found: format!("`{ch}`") });
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].1.clone();
        if tok != Tok::End {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let (offset, tok) = &self.toks[self.pos];
        ParseError { offset: *offset, expected, found: tok.describe() }
    }

    // imp := or ("->" imp)?
    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    // or := and ("|" and)*
    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    // and := neg ("&" neg)*
    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.neg()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.neg()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // neg := "~" neg | atomic
    fn neg(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.neg()?));
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.imp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("an atom, `false`, `true`, `~` or `(`")),
        }
    }
}

/// Parses the concrete syntax `&`, `|`, `->`, `~`, `false`, `true`.
///
/// Precedence from tightest: `~`, `&`, `|`, `->`. `&` and `|` associate to the
/// left, `->` to the right.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let f = p.imp()?;
    if *p.peek() != Tok::End {
        return Err(p.error("a binary connective or end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn desugars_negation() {
        let f = parse("p0 | ~p0").unwrap();
        assert_eq!(f, Formula::or(a("p0"), Formula::implies(a("p0"), Formula::Bottom)));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse("p1 -> p2 -> p3").unwrap();
        assert_eq!(f, Formula::implies(a("p1"), Formula::implies(a("p2"), a("p3"))));
    }

    #[test]
    fn conjunction_is_left_associative() {
        let f = parse("a & b & c").unwrap();
        assert_eq!(f, Formula::and(Formula::and(a("a"), a("b")), a("c")));
    }

    #[test]
    fn precedence() {
        let f = parse("~a & b | c -> d").unwrap();
        let expected =
            Formula::implies(Formula::or(Formula::and(Formula::not(a("a")), a("b")), a("c")), a("d"));
        assert_eq!(f, expected);
    }

    #[test]
    fn unbalanced_paren_fails_at_end() {
        let err = parse("(p0 -> p1").unwrap_err();
        assert_eq!(err.offset, 9);
        assert_eq!(err.expected, "`)`");
        assert_eq!(err.found, "end of input");
    }

    #[test]
    fn keywords_and_identifiers() {
        assert_eq!(parse("false").unwrap(), Formula::Bottom);
        assert_eq!(parse("true").unwrap(), Formula::Top);
        assert_eq!(parse("falsehood").unwrap(), a("falsehood"));
        assert_eq!(parse("x_1").unwrap(), a("x_1"));
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("p - q").unwrap_err().offset, 2);
        assert_eq!(parse("p q").unwrap_err().offset, 2);
        assert_eq!(parse("1p").unwrap_err().offset, 0);
        assert_eq!(parse("p & ").unwrap_err().offset, 4);
    }
}
