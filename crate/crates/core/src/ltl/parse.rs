use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character {ch:?} at byte {offset}")]
    UnexpectedChar { offset: usize, ch: char },
    #[error("unknown escape {sequence:?} at byte {offset}")]
    UnknownEscape { offset: usize, sequence: String },
    #[error("unexpected {found} at byte {offset}, expected one of: {}", expected.join(", "))]
    UnexpectedToken {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::UnexpectedChar { offset, .. }
            | ParseError::UnknownEscape { offset, .. }
            | ParseError::UnexpectedToken { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Until,
    Release,
    Eventually,
    Always,
    LParen,
    RParen,
    Ident(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::True => "'true'".into(),
            Tok::False => "'false'".into(),
            Tok::Not => "'!'".into(),
            Tok::And => "'&&'".into(),
            Tok::Or => "'||'".into(),
            Tok::Implies => "'->'".into(),
            Tok::Next => "'X'".into(),
            Tok::Until => "'U'".into(),
            Tok::Release => "'R'".into(),
            Tok::Eventually => "'F'".into(),
            Tok::Always => "'G'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'!' => {
                toks.push((i, Tok::Not));
                i += 1;
            }
            b'&' if bytes.get(i + 1) == Some(&b'&') => {
                toks.push((i, Tok::And));
                i += 2;
            }
            b'|' if bytes.get(i + 1) == Some(&b'|') => {
                toks.push((i, Tok::Or));
                i += 2;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((i, Tok::Implies));
                i += 2;
            }
            b'\\' => {
                let end = text[i + 1..]
                    .char_indices()
                    .nth(1)
                    .map(|(k, _)| i + 1 + k)
                    .unwrap_or(text.len());
                return Err(ParseError::UnknownEscape {
                    offset: i,
                    sequence: text[i..end].to_string(),
                });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                match word {
                    "true" => toks.push((start, Tok::True)),
                    "false" => toks.push((start, Tok::False)),
                    "X" => toks.push((start, Tok::Next)),
                    "U" => toks.push((start, Tok::Until)),
                    "R" => toks.push((start, Tok::Release)),
                    "F" => toks.push((start, Tok::Eventually)),
                    "G" => toks.push((start, Tok::Always)),
                    // Runs of unary operators written without spaces ("GF", "XXF").
                    w if w.bytes().all(|b| matches!(b, b'X' | b'F' | b'G')) => {
                        for (k, b) in w.bytes().enumerate() {
                            let t = match b {
                                b'X' => Tok::Next,
                                b'F' => Tok::Eventually,
                                _ => Tok::Always,
                            };
                            toks.push((start + k, t));
                        }
                    }
                    w => toks.push((start, Tok::Ident(w.to_string()))),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError::UnexpectedChar { offset: i, ch });
            }
        }
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

const ATOM_START: &[&str] = &[
    "'true'",
    "'false'",
    "identifier",
    "'('",
    "'!'",
    "'X'",
    "'F'",
    "'G'",
];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::UnexpectedToken {
            offset: self.offset(),
            found: self.peek().describe(),
            expected: expected.to_vec(),
        }
    }

    // implication := disjunction ('->' implication)?
    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::or(Formula::not(lhs), rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.binary_temporal()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    // factor := unary (('U'|'R') factor)?
    fn binary_temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                let rhs = self.binary_temporal()?;
                Ok(Formula::until(lhs, rhs))
            }
            Tok::Release => {
                self.bump();
                let rhs = self.binary_temporal()?;
                Ok(Formula::release(lhs, rhs))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Next => {
                self.bump();
                Ok(Formula::next(self.unary()?))
            }
            Tok::Eventually => {
                self.bump();
                Ok(Formula::eventually(self.unary()?))
            }
            Tok::Always => {
                self.bump();
                Ok(Formula::always(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["')'", "'&&'", "'||'", "'->'", "'U'", "'R'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(ATOM_START)),
        }
    }
}

/// Parses the concrete formula syntax.
///
/// Precedence from tightest to loosest: `! X F G`, then `U R` (right
/// associative), `&&`, `||`, and `->` (right associative, sugar for `!a || b`).
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["end of input", "'&&'", "'||'", "'->'", "'U'", "'R'"]));
    }
    Ok(f)
}
