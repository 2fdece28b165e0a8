//! Line-oriented text encoding for trained models.
//!
//! Floats are written with `Display`, which prints the shortest string that
//! parses back to the same bits, so a write/read cycle is exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct LineWriter {
    buf: String,
}

impl LineWriter {
    pub fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    /// `key v1 v2 ...`
    pub fn floats(&mut self, key: &str, values: &[f64]) {
        self.buf.push_str(key);
        for v in values {
            self.buf.push(' ');
            self.buf.push_str(&format!("{v}"));
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[derive(Debug)]
pub struct LineReader<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> LineReader<'a> {
    pub fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines().collect(),
            pos: 0,
        }
    }

    /// 1-based number of the line most recently read.
    pub fn line_number(&self) -> usize {
        self.pos
    }

    pub fn error(&self, message: &str) -> Error {
        Error::ModelFormat {
            line: self.pos,
            message: message.to_string(),
        }
    }

    pub fn next_line(&mut self) -> Result<&'a str> {
        let line = self
            .lines
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::ModelFormat {
                line: self.pos + 1,
                message: "unexpected end of input".to_string(),
            })?;
        self.pos += 1;
        Ok(line)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.lines.len()
    }

    pub fn expect_line(&mut self, expected: &str) -> Result<()> {
        let line = self.next_line()?;
        if line == expected {
            Ok(())
        } else {
            Err(self.error(&format!("expected {expected:?}, found {line:?}")))
        }
    }

    /// Reads `key rest` and returns `rest`.
    pub fn keyword(&mut self, key: &str) -> Result<String> {
        let line = self.next_line()?;
        match line.split_once(' ') {
            Some((k, rest)) if k == key => Ok(rest.to_string()),
            _ if line == key => Ok(String::new()),
            _ => Err(self.error(&format!("expected {key:?}, found {line:?}"))),
        }
    }

    pub fn parse_keyword<T: FromStr>(&mut self, key: &str) -> Result<T> {
        let rest = self.keyword(key)?;
        self.parse(&rest)
    }

    pub fn parse<T: FromStr>(&self, s: &str) -> Result<T> {
        s.trim()
            .parse()
            .map_err(|_| self.error(&format!("cannot parse {s:?}")))
    }

    /// Reads `key v1 v2 ...`, requiring exactly `len` values.
    pub fn floats(&mut self, key: &str, len: usize) -> Result<Vec<f64>> {
        let rest = self.keyword(key)?;
        let values = rest
            .split(' ')
            .filter(|s| !s.is_empty())
            .map(|s| self.parse::<f64>(s))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != len {
            return Err(self.error(&format!("{key} needs {len} values, found {}", values.len())));
        }
        Ok(values)
    }
}
