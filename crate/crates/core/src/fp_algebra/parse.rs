//! Polynomial expressions over a presentation.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := ('-')? atom ('^' int)?
//! atom   := int | name | '(' expr ')' | 'Q' int '(' expr ')'
//! ```
//!
//! Names resolve to generators first, then aliases. `Q<i>(...)` needs a
//! callback supplied by the caller, since Milnor operations live outside the
//! presentation.

use super::element::Element;
use super::presentation::GradedPresentation;
use crate::error::{Error, Result};

/// Identifier syntax for generator and alias names: a letter or `_`, then
/// letters, digits, `_`; trailing primes (`'`) are allowed.
pub fn is_identifier(s: &str) -> bool {
    let core = s.trim_end_matches('\'');
    let mut chars = core.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Applies `Q_i` to an element during parsing.
pub type QHook<'a> = &'a dyn Fn(u32, &Element) -> Result<Element>;

struct Parser<'a> {
    pres: &'a GradedPresentation,
    src: &'a [u8],
    pos: usize,
    q: Option<QHook<'a>>,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", c as char)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| {
                self.pos = start;
                self.err("integer too large")
            })
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos] == b'\'' {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn wrap<T>(&self, at: usize, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line: 1,
                column: at + 1,
                message: other.to_string(),
            },
        })
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            if self.eat(b'+') {
                let t = self.term()?;
                acc = self.wrap(at, acc.add(&t))?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = self.wrap(at, acc.sub(&t))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.factor()?;
        loop {
            let at = self.pos;
            if self.eat(b'*') {
                let f = self.factor()?;
                acc = self.wrap(at, acc.mul(&f))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Element> {
        if self.eat(b'-') {
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        let at = self.pos;
        if self.eat(b'^') {
            let k = self.int()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return self.wrap(at, base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Element> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let p = self.pres.prime().value() as u64;
                Ok(self.pres.constant((n % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                if let Some(e) = self.resolve(name) {
                    return Ok(e);
                }
                if let Some(i) = name.strip_prefix('Q').and_then(|s| s.parse::<u32>().ok()) {
                    if self.peek() == Some(b'(') {
                        self.pos += 1;
                        let inner = self.expr()?;
                        self.expect(b')')?;
                        let Some(q) = self.q else {
                            return Err(Error::Parse {
                                line: 1,
                                column: at + 1,
                                message: "Milnor operations are not available here".into(),
                            });
                        };
                        return self.wrap(at, q(i, &inner));
                    }
                }
                Err(Error::Parse {
                    line: 1,
                    column: at + 1,
                    message: format!("unknown generator `{name}`"),
                })
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
        }
    }

    fn resolve(&self, name: &str) -> Option<Element> {
        if let Some(i) = self.pres.generator_index(name) {
            return Some(self.pres.generator_element(i));
        }
        let poly = self.pres.alias(name)?.clone();
        Some(Element::from_terms_unreduced(self.pres.clone(), poly))
    }
}

impl GradedPresentation {
    /// Parses a polynomial expression into normal form.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        self.parse_element_with(text, None)
    }

    /// Like [`Self::parse_element`], with `Q<i>(...)` evaluated by `q`.
    pub fn parse_element_with(&self, text: &str, q: Option<QHook<'_>>) -> Result<Element> {
        let mut parser = Parser {
            pres: self,
            src: text.as_bytes(),
            pos: 0,
            q,
        };
        let e = parser.expr()?;
        if parser.peek().is_some() {
            return Err(parser.err("trailing input"));
        }
        parser.wrap(0, e.normal_form())
    }
}

/// Shifts a parse error from an expression onto its position in a file.
pub(crate) fn relocate(err: Error, line: usize, column_offset: usize) -> Error {
    match err {
        Error::Parse {
            column, message, ..
        } => Error::Parse {
            line,
            column: column + column_offset,
            message,
        },
        other => Error::Parse {
            line,
            column: column_offset + 1,
            message: other.to_string(),
        },
    }
}
