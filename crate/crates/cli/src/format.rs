//! Line-oriented text formats for chains and single matrices.
//!
//! ```text
//! CHAIN v1
//! field GF 5
//! t 3
//! dirs ><
//! dims 2 1 2
//! map 1 1 2
//! 1 4
//! map 2 1 2
//! 0 3
//! END
//! ```
//!
//! Map `i` of a `>` link is `dims[i+1] x dims[i]`, of a `<` link
//! `dims[i] x dims[i+1]`. Entries are `a`, `-a` or `a/b`. A matrix file is
//! `MATRIX v1`, a `field` line, `size <rows> <cols>`, the rows, then `END`.

use std::fmt::Write as _;

use chaindecomp_core::chain::{format_directions, ChainShape};
use chaindecomp_core::{Chain, Direction, Field, Matrix};
use thiserror::Error;

/// A parse failure at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    len: usize,
}

impl<'a> Line<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column, message: message.into() }
    }

    fn at(&self, k: usize, message: impl Into<String>) -> ParseError {
        let column = self.tokens.get(k).map_or(self.len + 1, |t| t.column);
        self.error(column, message)
    }

    fn expect_len(&self, n: usize, what: &str) -> Result<(), ParseError> {
        match self.tokens.len().cmp(&n) {
            std::cmp::Ordering::Equal => Ok(()),
            std::cmp::Ordering::Less => Err(self.at(self.tokens.len(), format!("{what}: missing field"))),
            std::cmp::Ordering::Greater => Err(self.at(n, format!("{what}: unexpected {:?}", self.tokens[n].text))),
        }
    }

    fn keyword(&self, word: &str) -> Result<(), ParseError> {
        match self.tokens.first() {
            Some(t) if t.text == word => Ok(()),
            Some(t) => Err(self.error(t.column, format!("expected `{word}`, found {:?}", t.text))),
            None => Err(self.error(1, format!("expected `{word}`, found an empty line"))),
        }
    }

    fn number(&self, k: usize, what: &str) -> Result<usize, ParseError> {
        let tok = self.tokens.get(k).ok_or_else(|| self.at(k, format!("{what}: missing value")))?;
        if !tok.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error(tok.column, format!("{what}: expected a nonnegative integer, found {:?}", tok.text)));
        }
        tok.text.parse().map_err(|_| self.error(tok.column, format!("{what}: {:?} is too large", tok.text)))
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        Lines { inner: body.split('\n').enumerate(), last: 0 }
    }

    fn next(&mut self, expecting: &str) -> Result<Line<'a>, ParseError> {
        let Some((k, raw)) = self.inner.next() else {
            return Err(ParseError {
                line: self.last + 1,
                column: 1,
                message: format!("unexpected end of input, expected {expecting}"),
            });
        };
        self.last = k + 1;
        if let Some(pos) = raw.find('\r') {
            return Err(ParseError { line: k + 1, column: pos + 1, message: "carriage return; use LF line endings".into() });
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in raw.char_indices().chain([(raw.len(), ' ')]) {
            match (ch == ' ' || ch == '\t', start) {
                (true, Some(s)) => {
                    tokens.push(Token { text: &raw[s..i], column: raw[..s].chars().count() + 1 });
                    start = None;
                }
                (false, None) => start = Some(i),
                _ => {}
            }
        }
        Ok(Line { number: k + 1, tokens, len: raw.chars().count() })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        let end = self.next("`END`")?;
        end.keyword("END")?;
        end.expect_len(1, "END")?;
        if let Some((k, _)) = self.inner.next() {
            return Err(ParseError { line: k + 1, column: 1, message: "content after `END`".into() });
        }
        Ok(())
    }
}

fn parse_header(lines: &mut Lines<'_>, magic: &str) -> Result<Field, ParseError> {
    let head = lines.next(magic)?;
    if head.tokens.iter().map(|t| t.text).ne(magic.split(' ')) {
        return Err(head.error(1, format!("expected `{magic}`")));
    }
    let line = lines.next("`field`")?;
    line.keyword("field")?;
    match line.tokens.get(1).map(|t| t.text) {
        Some("Q") => {
            line.expect_len(2, "field")?;
            Ok(Field::Rational)
        }
        Some("GF") => {
            line.expect_len(3, "field")?;
            let p = line.number(2, "modulus")?;
            Field::prime(p as u64).map_err(|e| line.at(2, e.to_string()))
        }
        Some(other) => Err(line.at(1, format!("unknown field {other:?}; expected `Q` or `GF <p>`"))),
        None => Err(line.at(1, "missing field name")),
    }
}

fn parse_rows(lines: &mut Lines<'_>, field: Field, rows: usize, cols: usize) -> Result<Matrix, ParseError> {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let line = lines.next("a matrix row")?;
        line.expect_len(cols, "matrix row")?;
        for tok in &line.tokens {
            let v = field.parse_value(tok.text).map_err(|e| line.error(tok.column, e.to_string()))?;
            entries.push(v);
        }
    }
    Ok(Matrix::from_entries(field, rows, cols, entries).expect("entries parsed in this field"))
}

/// Parses a chain file.
pub fn parse_chain(text: &str) -> Result<Chain, ParseError> {
    let mut lines = Lines::new(text);
    let field = parse_header(&mut lines, "CHAIN v1")?;

    let line = lines.next("`t`")?;
    line.keyword("t")?;
    line.expect_len(2, "t")?;
    let t = line.number(1, "t")?;
    if t == 0 {
        return Err(line.at(1, "t must be at least 1"));
    }

    let line = lines.next("`dirs`")?;
    line.keyword("dirs")?;
    let pattern = match line.tokens.len() {
        1 => "",
        2 => line.tokens[1].text,
        _ => return Err(line.at(2, "dirs: unexpected field")),
    };
    let mut dirs = Vec::new();
    for (k, ch) in pattern.chars().enumerate() {
        let d = Direction::from_symbol(ch)
            .ok_or_else(|| line.error(line.tokens[1].column + k, format!("dirs: {ch:?} is not `>` or `<`")))?;
        dirs.push(d);
    }
    if dirs.len() + 1 != t {
        return Err(line.at(1, format!("dirs has length {}, expected {}", dirs.len(), t - 1)));
    }

    let line = lines.next("`dims`")?;
    line.keyword("dims")?;
    line.expect_len(t + 1, "dims")?;
    let dims = (1..=t).map(|k| line.number(k, "dimension")).collect::<Result<Vec<_>, _>>()?;
    let shape = ChainShape::new(dirs, dims).expect("t - 1 links for t vertices");

    let mut maps = Vec::with_capacity(t - 1);
    for i in 0..t - 1 {
        let line = lines.next("`map`")?;
        line.keyword("map")?;
        line.expect_len(4, "map")?;
        let index = line.number(1, "map index")?;
        if index != i + 1 {
            return Err(line.at(1, format!("expected map {}, found map {index}", i + 1)));
        }
        let (rows, cols) = (line.number(2, "rows")?, line.number(3, "cols")?);
        let (er, ec) = shape.map_shape(i);
        if (rows, cols) != (er, ec) {
            return Err(line.at(2, format!("map {} is {rows}x{cols} but dims and dirs require {er}x{ec}", i + 1)));
        }
        maps.push(parse_rows(&mut lines, field, rows, cols)?);
    }
    lines.finish()?;
    Ok(Chain::new(field, shape, maps).expect("shapes checked against the header"))
}

fn write_field(out: &mut String, field: Field) {
    match field {
        Field::Rational => out.push_str("field Q\n"),
        Field::Prime(p) => {
            let _ = writeln!(out, "field GF {p}");
        }
    }
}

/// Writes the rows of `m`, one line each, entries separated by single spaces.
pub fn write_rows(out: &mut String, m: &Matrix) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", m.get(r, c));
        }
        out.push('\n');
    }
}

/// The canonical text of a chain; `parse_chain` inverts it exactly.
pub fn serialize_chain(c: &Chain) -> String {
    let mut out = String::from("CHAIN v1\n");
    write_field(&mut out, c.field());
    let _ = writeln!(out, "t {}", c.t());
    let dirs = format_directions(c.directions());
    if dirs.is_empty() {
        out.push_str("dirs\n");
    } else {
        let _ = writeln!(out, "dirs {dirs}");
    }
    out.push_str("dims");
    for d in c.dims() {
        let _ = write!(out, " {d}");
    }
    out.push('\n');
    for (i, m) in c.maps().iter().enumerate() {
        let _ = writeln!(out, "map {} {} {}", i + 1, m.rows(), m.cols());
        write_rows(&mut out, m);
    }
    out.push_str("END\n");
    out
}

pub fn parse_matrix(text: &str) -> Result<Matrix, ParseError> {
    let mut lines = Lines::new(text);
    let field = parse_header(&mut lines, "MATRIX v1")?;
    let line = lines.next("`size`")?;
    line.keyword("size")?;
    line.expect_len(3, "size")?;
    let (rows, cols) = (line.number(1, "rows")?, line.number(2, "cols")?);
    let m = parse_rows(&mut lines, field, rows, cols)?;
    lines.finish()?;
    Ok(m)
}

pub fn serialize_matrix(m: &Matrix) -> String {
    let mut out = String::from("MATRIX v1\n");
    write_field(&mut out, m.field());
    let _ = writeln!(out, "size {} {}", m.rows(), m.cols());
    write_rows(&mut out, m);
    out.push_str("END\n");
    out
}

/// A field named on the command line: `Q`, `GF7`, `GF(7)` or `GF 7`.
pub fn parse_field_name(name: &str) -> Result<Field, FieldNameError> {
    let name = name.trim();
    if name == "Q" {
        return Ok(Field::Rational);
    }
    let digits = name
        .strip_prefix("GF")
        .map(|rest| rest.trim().trim_start_matches('(').trim_end_matches(')'))
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .ok_or_else(|| FieldNameError(name.into()))?;
    let p: u64 = digits.parse().map_err(|_| FieldNameError(name.into()))?;
    Field::prime(p).map_err(|_| FieldNameError(name.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown field {0:?}; expected `Q` or `GF<p>` with p prime")]
pub struct FieldNameError(pub String);
