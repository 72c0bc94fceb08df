//! A small cursor used by every text format in the crate. Positions in
//! errors are 1-based columns into the original input.

use crate::error::{Error, Result};

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::parse(self.pos + 1, msg))
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected '{c}', found '{found}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
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

    pub fn expect_str(&mut self, s: &str) -> Result<()> {
        if self.eat_str(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    /// Takes the longest prefix whose characters satisfy `pred`.
    pub fn take_while(&mut self, pred: impl Fn(char) -> bool) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.rest().char_indices().find(|&(_, c)| !pred(c)).map_or(self.rest().len(), |(i, _)| i);
        self.pos += len;
        (start, &self.src[start..start + len])
    }

    pub fn integer<T: std::str::FromStr>(&mut self) -> Result<T> {
        let (start, tok) = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '+');
        tok.parse().map_err(|_| Error::parse(start + 1, format!("invalid integer '{tok}'")))
    }

    /// Reads a rational token such as `-3/4` or `5`.
    pub fn rational_token(&mut self) -> Result<(usize, &'a str)> {
        let (start, tok) = self.take_while(|c| c.is_ascii_digit() || c == '-' || c == '+' || c == '/');
        if tok.is_empty() {
            return Err(Error::parse(start + 1, "expected a rational number"));
        }
        Ok((start, tok))
    }

    pub fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected trailing input starting at '{c}'")),
        }
    }
}
