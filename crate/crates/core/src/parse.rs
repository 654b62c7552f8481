//! Text syntax for mean expressions.
//!
//! ```text
//! mean    := "power(" num ")" | "gini(" num "," num ")" | "quasi(" gen ")"
//!          | "bajrak(" gen "," gen ")" | "dev(" devspec ")"
//!          | "gauss(" mean ("," mean)+ ")"
//!          | "arith" | "geom" | "harm" | "min" | "max"
//! gen     := "id" | "log" | "exp" | "pow:" num | "negpow:" num
//! devspec := "arith" | "pair:" gen "," gen
//! ```
//!
//! Whitespace between tokens is ignored. `Display` on [`MeanExpr`] prints
//! this syntax back, so `parse(print(e)) == e`.

use std::fmt;

use crate::expr::MeanExpr;
use crate::families::DeviationSpec;
use crate::generator::Generator;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<&'static str>, found: String },
    Arity { call: &'static str, expected: &'static str, found: usize },
    UnknownGenerator(String),
}

/// A parse failure at byte `offset` of the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax { .. } => "E_PARSE_SYNTAX",
            ParseErrorKind::Arity { .. } => "E_PARSE_ARITY",
            ParseErrorKind::UnknownGenerator(_) => "E_PARSE_UNKNOWN_GENERATOR",
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "syntax error at offset {}: expected one of {{{}}}, found {found}",
                self.offset,
                expected.join(", ")
            ),
            ParseErrorKind::Arity { call, expected, found } => write!(
                f,
                "arity error at offset {}: `{call}` takes {expected} argument(s), got {found}",
                self.offset
            ),
            ParseErrorKind::UnknownGenerator(g) => {
                write!(f, "unknown generator `{g}` at offset {}", self.offset)
            }
        }
    }
}

impl std::error::Error for ParseError {}

const MEANS: [&str; 11] = [
    "power", "gini", "quasi", "bajrak", "dev", "gauss", "arith", "geom", "harm", "min", "max",
];
const GENERATORS: [&str; 5] = ["id", "log", "exp", "pow:", "negpow:"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn syntax<T>(&mut self, expected: &[&'static str]) -> PResult<T> {
        let found = self.found();
        Err(ParseError {
            offset: self.pos,
            kind: ParseErrorKind::Syntax {
                expected: expected.to_vec(),
                found,
            },
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, label: &'static str) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.syntax(&[label])
        }
    }

    /// Lowercase identifier; returns its start offset.
    fn ident(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(self.src.len() - start);
        self.pos += len;
        (start, &self.src[start..start + len])
    }

    fn number(&mut self) -> PResult<f64> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        if end < bytes.len() && matches!(bytes[end], b'+' | b'-') {
            end += 1;
        }
        while end < bytes.len() {
            match bytes[end] {
                b'0'..=b'9' | b'.' => end += 1,
                b'e' | b'E' => {
                    end += 1;
                    if end < bytes.len() && matches!(bytes[end], b'+' | b'-') {
                        end += 1;
                    }
                }
                _ => break,
            }
        }
        match self.src[start..end].parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = end;
                Ok(v)
            }
            _ => self.syntax(&["number"]),
        }
    }

    /// Closes a fixed-arity call: `)` expected, `,`/`)` mismatches become arity errors.
    fn close(&mut self, call: &'static str, expected: &'static str, got: usize) -> PResult<()> {
        if self.eat(')') {
            return Ok(());
        }
        if self.peek() == Some(',') {
            // count the surplus arguments for the message
            let mut depth = 0usize;
            let mut extra = 0;
            let mut end = self.pos;
            for (i, c) in self.src[self.pos..].char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' if depth == 0 => {
                        end = self.pos + i + 1;
                        break;
                    }
                    ')' => depth -= 1,
                    ',' if depth == 0 => extra += 1,
                    _ => {}
                }
            }
            if end > self.pos {
                return Err(ParseError {
                    offset: end,
                    kind: ParseErrorKind::Arity {
                        call,
                        expected,
                        found: got + extra,
                    },
                });
            }
        }
        self.syntax(&[")"])
    }

    /// Argument separator of a fixed-arity call; a premature `)` is an arity error
    /// reported just past it.
    fn separator(&mut self, call: &'static str, expected: &'static str, got: usize) -> PResult<()> {
        if self.eat(',') {
            return Ok(());
        }
        if self.peek() == Some(')') {
            return Err(ParseError {
                offset: self.pos + 1,
                kind: ParseErrorKind::Arity { call, expected, found: got },
            });
        }
        self.syntax(&[","])
    }

    fn generator(&mut self) -> PResult<Generator> {
        let (start, name) = self.ident();
        let gen = match name {
            "id" => Generator::Identity,
            "log" => Generator::Log,
            "exp" => Generator::Exp,
            "pow" | "negpow" => {
                self.expect(':', ":")?;
                let p = self.number()?;
                if name == "pow" {
                    Generator::Pow(p)
                } else {
                    Generator::NegPow(p)
                }
            }
            "" => {
                self.pos = start;
                return self.syntax(&GENERATORS);
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnknownGenerator(other.to_string()),
                })
            }
        };
        Ok(gen)
    }

    fn mean(&mut self) -> PResult<MeanExpr> {
        let (start, name) = self.ident();
        let call = match MEANS.iter().find(|&&m| m == name) {
            Some(&m) => m,
            None => {
                self.pos = start;
                return self.syntax(&MEANS);
            }
        };
        match call {
            "arith" => return Ok(MeanExpr::Arith),
            "geom" => return Ok(MeanExpr::Geom),
            "harm" => return Ok(MeanExpr::Harm),
            "min" => return Ok(MeanExpr::Min),
            "max" => return Ok(MeanExpr::Max),
            _ => {}
        }
        self.expect('(', "(")?;
        let e = match call {
            "power" => {
                let p = self.number()?;
                self.close(call, "1", 1)?;
                MeanExpr::Power(p)
            }
            "gini" => {
                let p = self.number()?;
                self.separator(call, "2", 1)?;
                let q = self.number()?;
                self.close(call, "2", 2)?;
                MeanExpr::Gini(p, q)
            }
            "quasi" => {
                let g = self.generator()?;
                self.close(call, "1", 1)?;
                MeanExpr::QuasiArithmetic(g)
            }
            "bajrak" => {
                let f = self.generator()?;
                self.separator(call, "2", 1)?;
                let g = self.generator()?;
                self.close(call, "2", 2)?;
                MeanExpr::Bajraktarevic(f, g)
            }
            "dev" => {
                let (s, kind) = self.ident();
                let d = match kind {
                    "arith" => DeviationSpec::Arithmetic,
                    "pair" => {
                        self.expect(':', ":")?;
                        let f = self.generator()?;
                        self.separator("dev", "2 generators in pair:", 1)?;
                        let g = self.generator()?;
                        DeviationSpec::FromPair { f, g }
                    }
                    _ => {
                        self.pos = s;
                        return self.syntax(&["arith", "pair:"]);
                    }
                };
                self.close(call, "1", 1)?;
                MeanExpr::Deviation(d)
            }
            "gauss" => {
                let mut children = vec![self.mean()?];
                while self.eat(',') {
                    children.push(self.mean()?);
                }
                if self.peek() != Some(')') {
                    return self.syntax(&[",", ")"]);
                }
                self.pos += 1;
                if children.len() < 2 {
                    return Err(ParseError {
                        offset: self.pos,
                        kind: ParseErrorKind::Arity {
                            call,
                            expected: "at least 2",
                            found: children.len(),
                        },
                    });
                }
                MeanExpr::Gauss(children)
            }
            _ => unreachable!(),
        };
        Ok(e)
    }
}

/// Parses a mean expression. Parameters are syntax-checked only; call
/// [`MeanExpr::validate`] for the mathematical contracts.
pub fn parse_mean_expr(text: &str) -> Result<MeanExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.mean()?;
    if p.peek().is_some() {
        return p.syntax(&["end of input"]);
    }
    Ok(e)
}

impl std::str::FromStr for MeanExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mean_expr(s)
    }
}
