// Hand-rolled tokenizer and recursive-descent parser. All offsets are byte
// offsets into the source text.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{BinOp, Builtin, Expr};

/// One entry of the "expected one of ..." set carried by syntax errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expected {
    Number,
    Variable,
    Function,
    LParen,
    RParen,
    Comma,
    Minus,
    Operator,
    End,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expected::Number => "number",
            Expected::Variable => "`t`",
            Expected::Function => "function name",
            Expected::LParen => "`(`",
            Expected::RParen => "`)`",
            Expected::Comma => "`,`",
            Expected::Minus => "`-`",
            Expected::Operator => "operator",
            Expected::End => "end of input",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        offset: usize,
        expected: Vec<Expected>,
        found: String,
    },
    UnknownIdentifier {
        offset: usize,
        name: String,
    },
    Arity {
        offset: usize,
        function: &'static str,
        expected: usize,
        found: usize,
    },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Arity { offset, .. } => *offset,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                offset,
                expected,
                found,
            } => {
                write!(f, "syntax error at byte {offset}: found {found}, expected ")?;
                for (i, e) in expected.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if i + 1 == expected.len() { " or " } else { ", " })?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            ParseError::UnknownIdentifier { offset, name } => {
                write!(f, "unknown identifier `{name}` at byte {offset}")
            }
            ParseError::Arity {
                offset,
                function,
                expected,
                found,
            } => write!(
                f,
                "`{function}` at byte {offset} takes {expected} argument(s), got {found}"
            ),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind<'a> {
    Num(f64),
    Ident(&'a str),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Invalid(char),
    Eof,
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    kind: Kind<'a>,
    offset: usize,
    text: &'a str,
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let kind = match c {
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'/' => Kind::Slash,
            b'^' => Kind::Caret,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            b',' => Kind::Comma,
            b'0'..=b'9' | b'.' => {
                let end = scan_number(bytes, i);
                if end == i {
                    Kind::Invalid('.')
                } else {
                    i = end;
                    // the scanned slice is always a valid decimal literal
                    let text = &src[start..end];
                    tokens.push(Token {
                        kind: Kind::Num(text.parse().unwrap_or(f64::NAN)),
                        offset: start,
                        text,
                    });
                    continue;
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let text = &src[start..i];
                tokens.push(Token {
                    kind: Kind::Ident(text),
                    offset: start,
                    text,
                });
                continue;
            }
            _ => Kind::Invalid(src[start..].chars().next().unwrap_or('?')),
        };
        let len = match kind {
            Kind::Invalid(ch) => ch.len_utf8(),
            _ => 1,
        };
        i += len;
        tokens.push(Token {
            kind,
            offset: start,
            text: &src[start..i],
        });
    }
    tokens.push(Token {
        kind: Kind::Eof,
        offset: src.len(),
        text: "",
    });
    tokens
}

// Returns the end of a literal `D+ (. D*)? | . D+` with an optional exponent,
// or `start` if there is none.
fn scan_number(b: &[u8], start: usize) -> usize {
    let digits = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(start);
    let int_digits = i - start;
    if i < b.len() && b[i] == b'.' {
        let frac_end = digits(i + 1);
        if int_digits == 0 && frac_end == i + 1 {
            return start;
        }
        i = frac_end;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let exp_end = digits(j);
        if exp_end > j {
            i = exp_end;
        }
    }
    i
}

struct Parser<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
}

const OPERAND_START: &[Expected] = &[
    Expected::Number,
    Expected::Variable,
    Expected::Function,
    Expected::LParen,
];

/// Parses `source` into an expression tree.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        tokens: tokenize(source),
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek().kind {
        Kind::Eof => Ok(e),
        _ => Err(p.unexpected(&[Expected::Operator, Expected::End])),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Token<'a> {
        self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token<'a> {
        let tok = self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, expected: &[Expected]) -> ParseError {
        let tok = self.peek();
        let found = match tok.kind {
            Kind::Eof => "end of input".to_string(),
            Kind::Num(_) => alloc::format!("number `{}`", tok.text),
            Kind::Ident(_) => alloc::format!("identifier `{}`", tok.text),
            _ => alloc::format!("`{}`", tok.text),
        };
        let mut expected = expected.to_vec();
        expected.sort();
        expected.dedup();
        ParseError::Syntax {
            offset: tok.offset,
            expected,
            found,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Kind::Plus => BinOp::Add,
                Kind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().kind {
                Kind::Star => BinOp::Mul,
                Kind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == Kind::Minus {
            self.bump();
            return Ok(Expr::neg(self.power(false)?));
        }
        self.power(true)
    }

    fn power(&mut self, minus_allowed: bool) -> Result<Expr, ParseError> {
        let base = self.atom(minus_allowed)?;
        if self.peek().kind == Kind::Caret {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self, minus_allowed: bool) -> Result<Expr, ParseError> {
        let tok = self.peek();
        match tok.kind {
            Kind::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Kind::Ident("t") => {
                self.bump();
                Ok(Expr::Var)
            }
            Kind::Ident(name) => {
                let func = Builtin::from_name(name).ok_or_else(|| ParseError::UnknownIdentifier {
                    offset: tok.offset,
                    name: name.to_string(),
                })?;
                self.bump();
                self.call(func, tok.offset)
            }
            Kind::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect_rparen(&[Expected::Operator, Expected::RParen])?;
                Ok(inner)
            }
            _ => {
                let mut expected = OPERAND_START.to_vec();
                if minus_allowed {
                    expected.push(Expected::Minus);
                }
                Err(self.unexpected(&expected))
            }
        }
    }

    fn call(&mut self, func: Builtin, offset: usize) -> Result<Expr, ParseError> {
        if self.peek().kind != Kind::LParen {
            return Err(self.unexpected(&[Expected::LParen]));
        }
        self.bump();
        let mut args = Vec::with_capacity(2);
        args.push(self.expr()?);
        if self.peek().kind == Kind::Comma {
            self.bump();
            args.push(self.expr()?);
            self.expect_rparen(&[Expected::Operator, Expected::RParen])?;
        } else {
            self.expect_rparen(&[Expected::Operator, Expected::Comma, Expected::RParen])?;
        }
        if args.len() != func.arity() {
            return Err(ParseError::Arity {
                offset,
                function: func.name(),
                expected: func.arity(),
                found: args.len(),
            });
        }
        Ok(Expr::call(func, args))
    }

    fn expect_rparen(&mut self, expected: &[Expected]) -> Result<(), ParseError> {
        if self.peek().kind == Kind::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }
}
