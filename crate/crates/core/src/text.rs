//! Shared character cursor for the textual grammars.
//!
//! Every grammar in the crate (values, polynomials, chains, families, tables,
//! certificates) is parsed by recursive descent over one [`Cursor`], so that
//! errors always report a byte offset into the original input.

use num::{BigInt, BigRational, One, Zero};

use crate::error::ParseError;

pub type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone)]
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos, message)
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Peeks without skipping whitespace first.
    pub fn peek_raw(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.rest().chars().next()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let msg = match self.peek() {
                Some(found) => format!("expected '{c}', found '{found}'"),
                None => format!("expected '{c}', found end of input"),
            };
            Err(self.error(msg))
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    /// Consumes `word` only if it is not immediately followed by an identifier character.
    pub fn eat_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if let Some(after) = self.rest().strip_prefix(word) {
            let next = after.chars().next();
            if !next.is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += word.len();
                return true;
            }
        }
        false
    }

    pub fn expect_keyword(&mut self, word: &str) -> PResult<()> {
        if self.eat_keyword(word) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{word}'")))
        }
    }

    pub fn ident(&mut self) -> PResult<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected identifier"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    pub fn unsigned(&mut self) -> PResult<BigInt> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        let n: BigInt = rest[..len].parse().map_err(|_| self.error("bad integer"))?;
        self.pos += len;
        Ok(n)
    }

    pub fn usize(&mut self) -> PResult<usize> {
        let start = self.pos;
        let n = self.unsigned()?;
        n.to_string()
            .parse()
            .map_err(|_| ParseError::new(start, "integer out of range"))
    }

    /// `[-]digits[/digits]`
    pub fn rational(&mut self) -> PResult<BigRational> {
        let neg = self.eat('-');
        let num = self.unsigned()?;
        let den = if self.peek_raw() == Some('/') {
            self.bump();
            let at = self.pos;
            let d = self.unsigned()?;
            if d.is_zero() {
                return Err(ParseError::new(at, "zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let q = BigRational::new(num, den);
        Ok(if neg { -q } else { q })
    }

    pub fn quoted(&mut self) -> PResult<&'a str> {
        self.expect('"')?;
        let rest = self.rest();
        let end = rest
            .find('"')
            .ok_or_else(|| self.error("unterminated string"))?;
        self.pos += end + 1;
        Ok(&rest[..end])
    }

    pub fn finish(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing input '{}'", self.rest())))
        }
    }
}

/// Runs `f` on the whole input and rejects trailing text.
pub fn parse_all<T>(src: &str, f: impl FnOnce(&mut Cursor<'_>) -> PResult<T>) -> PResult<T> {
    let mut cur = Cursor::new(src);
    let out = f(&mut cur)?;
    cur.finish()?;
    Ok(out)
}
