//! Parser and evaluator for integrand expressions.
//!
//! The grammar covers integer literals, the flag variables `xi_k` (with
//! `t_k` accepted as an alias), base-ring generators by name, class
//! references `s[i](E)`, `c[i](E)` and `c1(L)`, and the operators
//! `+ - * ^` with precedence `^` > unary `-` > `*` > binary `+ -`
//! (all left-associative). Exponents are non-negative integer literals.
//! There is no division.
//!
//! Every parse error carries the byte offset it was detected at.

use crate::bundle::{LineBundleClass, SegreTable, VectorBundleData};
use crate::flag::FlagSpec;
use crate::laurent::LaurentPoly;
use crate::ring::{RingDescriptor, RingElement};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("lexical error at offset {offset}: unexpected character `{found}`")]
    Lexical { offset: usize, found: char },
    #[error("dangling operator at offset {offset}")]
    DanglingOperator { offset: usize },
    #[error("unbalanced parenthesis at offset {offset}")]
    UnbalancedParen { offset: usize },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { offset: usize, name: String },
    #[error("expected {expected} at offset {offset}")]
    Unexpected {
        offset: usize,
        expected: &'static str,
    },
    #[error("exponent at offset {offset} does not fit in 32 bits")]
    ExponentRange { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Lexical { offset, .. }
            | ParseError::DanglingOperator { offset }
            | ParseError::UnbalancedParen { offset }
            | ParseError::UnknownFunction { offset, .. }
            | ParseError::Unexpected { offset, .. }
            | ParseError::ExponentRange { offset } => *offset,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
    #[error("variable index {index} out of range 1..={arity}")]
    XiIndexOutOfRange { index: usize, arity: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Segre,
    Chern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Int(BigInt),
    /// `xi_k`, 1-based.
    Xi(usize),
    /// `t_k`, accepted as an alias for `xi_k`.
    TVar(usize),
    Generator(String),
    /// `s[i](E)` or `c[i](E)`.
    ClassRef {
        kind: ClassKind,
        index: i64,
        bundle: String,
    },
    /// `c1(L)`.
    LineClass(String),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                tokens.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                tokens.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                tokens.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                tokens.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                tokens.push((Token::RParen, i));
                i += 1;
            }
            '[' => {
                tokens.push((Token::LBracket, i));
                i += 1;
            }
            ']' => {
                tokens.push((Token::RBracket, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value: BigInt = text[start..i].parse().expect("digits");
                tokens.push((Token::Int(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push((Token::Ident(text[start..i].to_string()), start));
            }
            other => {
                // report at the byte offset of the offending character
                let offset = i;
                return Err(ParseError::Lexical {
                    offset,
                    found: other,
                });
            }
        }
    }
    tokens.push((Token::Eof, text.len()));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let out = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        out
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => true,
                Token::Minus => false,
                _ => return Ok(left),
            };
            let (_, op_offset) = self.bump();
            let right = self.operand(op_offset, Self::term)?;
            left = if op {
                Expression::Add(Box::new(left), Box::new(right))
            } else {
                Expression::Sub(Box::new(left), Box::new(right))
            };
        }
    }

    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut left = self.unary()?;
        while matches!(self.peek(), Token::Star) {
            let (_, op_offset) = self.bump();
            let right = self.operand(op_offset, Self::unary)?;
            left = Expression::Mul(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    /// Parses the right operand of an operator; a failure to consume
    /// anything at all becomes a dangling-operator report at the operator.
    fn operand(
        &mut self,
        op_offset: usize,
        production: fn(&mut Self) -> Result<Expression, ParseError>,
    ) -> Result<Expression, ParseError> {
        let before = self.pos;
        production(self).map_err(|error| {
            if self.pos == before && matches!(error, ParseError::Unexpected { .. }) {
                ParseError::DanglingOperator { offset: op_offset }
            } else {
                error
            }
        })
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if matches!(self.peek(), Token::Minus) {
            let (_, op_offset) = self.bump();
            let inner = self.operand(op_offset, Self::unary)?;
            return Ok(Expression::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Token::Caret) {
            let (_, op_offset) = self.bump();
            match self.peek().clone() {
                Token::Int(value) => {
                    let exponent_offset = self.offset();
                    self.bump();
                    let exponent = value.to_u32().ok_or(ParseError::ExponentRange {
                        offset: exponent_offset,
                    })?;
                    return Ok(Expression::Pow(Box::new(base), exponent));
                }
                Token::Eof => return Err(ParseError::DanglingOperator { offset: op_offset }),
                _ => {
                    return Err(ParseError::Unexpected {
                        offset: self.offset(),
                        expected: "non-negative integer exponent",
                    })
                }
            }
        }
        Ok(base)
    }

    fn expect(&mut self, token: Token, expected: &'static str) -> Result<usize, ParseError> {
        if *self.peek() == token {
            Ok(self.bump().1)
        } else {
            Err(ParseError::Unexpected {
                offset: self.offset(),
                expected,
            })
        }
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        match self.peek().clone() {
            Token::Int(value) => {
                self.bump();
                Ok(Expression::Int(value))
            }
            Token::LParen => {
                let (_, open_offset) = self.bump();
                let inner = self.expr()?;
                if matches!(self.peek(), Token::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(ParseError::UnbalancedParen {
                        offset: open_offset,
                    })
                }
            }
            Token::Ident(name) => {
                let (_, name_offset) = self.bump();
                match self.peek() {
                    Token::LBracket => {
                        let kind = match name.as_str() {
                            "s" => ClassKind::Segre,
                            "c" => ClassKind::Chern,
                            _ => {
                                return Err(ParseError::UnknownFunction {
                                    offset: name_offset,
                                    name,
                                })
                            }
                        };
                        self.bump();
                        let negative = if matches!(self.peek(), Token::Minus) {
                            self.bump();
                            true
                        } else {
                            false
                        };
                        let index = match self.peek().clone() {
                            Token::Int(value) => {
                                let offset = self.offset();
                                self.bump();
                                value.to_i64().ok_or(ParseError::ExponentRange { offset })?
                            }
                            _ => {
                                return Err(ParseError::Unexpected {
                                    offset: self.offset(),
                                    expected: "class index",
                                })
                            }
                        };
                        let index = if negative { -index } else { index };
                        self.expect(Token::RBracket, "closing `]`")?;
                        self.expect(Token::LParen, "bundle argument")?;
                        let bundle = match self.peek().clone() {
                            Token::Ident(bundle) => {
                                self.bump();
                                bundle
                            }
                            _ => {
                                return Err(ParseError::Unexpected {
                                    offset: self.offset(),
                                    expected: "bundle name",
                                })
                            }
                        };
                        self.expect(Token::RParen, "closing `)`")?;
                        Ok(Expression::ClassRef {
                            kind,
                            index,
                            bundle,
                        })
                    }
                    Token::LParen => {
                        if name != "c1" {
                            return Err(ParseError::UnknownFunction {
                                offset: name_offset,
                                name,
                            });
                        }
                        self.bump();
                        let line = match self.peek().clone() {
                            Token::Ident(line) => {
                                self.bump();
                                line
                            }
                            _ => {
                                return Err(ParseError::Unexpected {
                                    offset: self.offset(),
                                    expected: "line-bundle name",
                                })
                            }
                        };
                        self.expect(Token::RParen, "closing `)`")?;
                        Ok(Expression::LineClass(line))
                    }
                    _ => Ok(classify_ident(name)),
                }
            }
            Token::Eof => Err(ParseError::Unexpected {
                offset: self.offset(),
                expected: "operand",
            }),
            Token::RParen => Err(ParseError::UnbalancedParen {
                offset: self.offset(),
            }),
            _ => Err(ParseError::Unexpected {
                offset: self.offset(),
                expected: "operand",
            }),
        }
    }
}

fn classify_ident(name: String) -> Expression {
    for (prefix, is_xi) in [("xi_", true), ("t_", false)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(index) = rest.parse::<usize>() {
                    return if is_xi {
                        Expression::Xi(index)
                    } else {
                        Expression::TVar(index)
                    };
                }
            }
        }
    }
    Expression::Generator(name)
}

/// Parses an expression, reporting errors with byte offsets.
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let expression = parser.expr()?;
    match parser.peek() {
        Token::Eof => Ok(expression),
        Token::RParen => Err(ParseError::UnbalancedParen {
            offset: parser.offset(),
        }),
        _ => Err(ParseError::Unexpected {
            offset: parser.offset(),
            expected: "operator or end of input",
        }),
    }
}

impl Expression {
    fn precedence(&self) -> u8 {
        match self {
            Expression::Add(..) | Expression::Sub(..) => 1,
            Expression::Mul(..) => 2,
            Expression::Neg(..) => 3,
            Expression::Pow(..) => 4,
            _ => 5,
        }
    }

    fn render_into(&self, out: &mut String, min_precedence: u8) {
        let own = self.precedence();
        let parens = own < min_precedence;
        if parens {
            out.push('(');
        }
        match self {
            Expression::Int(value) => out.push_str(&value.to_string()),
            Expression::Xi(index) => out.push_str(&format!("xi_{index}")),
            Expression::TVar(index) => out.push_str(&format!("t_{index}")),
            Expression::Generator(name) => out.push_str(name),
            Expression::ClassRef {
                kind,
                index,
                bundle,
            } => {
                let letter = match kind {
                    ClassKind::Segre => 's',
                    ClassKind::Chern => 'c',
                };
                out.push_str(&format!("{letter}[{index}]({bundle})"));
            }
            Expression::LineClass(line) => out.push_str(&format!("c1({line})")),
            Expression::Neg(inner) => {
                out.push('-');
                inner.render_into(out, 3);
            }
            Expression::Add(left, right) => {
                left.render_into(out, 1);
                out.push_str(" + ");
                right.render_into(out, 2);
            }
            Expression::Sub(left, right) => {
                left.render_into(out, 1);
                out.push_str(" - ");
                right.render_into(out, 2);
            }
            Expression::Mul(left, right) => {
                left.render_into(out, 2);
                out.push_str(" * ");
                right.render_into(out, 3);
            }
            Expression::Pow(base, exponent) => {
                base.render_into(out, 5);
                out.push_str(&format!("^{exponent}"));
            }
        }
        if parens {
            out.push(')');
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        write!(f, "{out}")
    }
}

/// Named values an expression may refer to.
pub struct Bindings {
    ring: Arc<RingDescriptor>,
    bundles: BTreeMap<String, (VectorBundleData, SegreTable)>,
    lines: BTreeMap<String, LineBundleClass>,
}

impl Bindings {
    pub fn new(ring: Arc<RingDescriptor>) -> Bindings {
        Bindings {
            ring,
            bundles: BTreeMap::new(),
            lines: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &Arc<RingDescriptor> {
        &self.ring
    }

    pub fn add_bundle(&mut self, bundle: VectorBundleData) {
        let segre = bundle.segre(&self.ring);
        self.bundles
            .insert(bundle.name().to_string(), (bundle, segre));
    }

    pub fn add_line(&mut self, name: impl Into<String>, line: LineBundleClass) {
        self.lines.insert(name.into(), line);
    }
}

/// Evaluates an expression to a Laurent polynomial in `t_1..t_arity`
/// (always a genuine polynomial: the grammar has no negative powers).
pub fn eval(
    expression: &Expression,
    bindings: &Bindings,
    arity: usize,
) -> Result<LaurentPoly, EvalError> {
    let ring = &bindings.ring;
    match expression {
        Expression::Int(value) => Ok(LaurentPoly::constant(
            RingElement::constant(ring, value.clone()),
            arity,
        )),
        Expression::Xi(index) | Expression::TVar(index) => {
            if *index == 0 || *index > arity {
                return Err(EvalError::XiIndexOutOfRange {
                    index: *index,
                    arity,
                });
            }
            Ok(LaurentPoly::variable(ring, arity, index - 1))
        }
        Expression::Generator(name) => RingElement::generator_by_name(ring, name)
            .map(|g| LaurentPoly::constant(g, arity))
            .ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
        Expression::ClassRef {
            kind,
            index,
            bundle,
        } => {
            let (data, segre) = bindings
                .bundles
                .get(bundle)
                .ok_or_else(|| EvalError::UnboundSymbol(bundle.clone()))?;
            let class = match kind {
                ClassKind::Segre => segre.get(*index),
                ClassKind::Chern => data.chern_class(ring, *index),
            };
            Ok(LaurentPoly::constant(class, arity))
        }
        Expression::LineClass(name) => bindings
            .lines
            .get(name)
            .map(|line| LaurentPoly::constant(line.c1().clone(), arity))
            .ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
        Expression::Neg(inner) => Ok(-&eval(inner, bindings, arity)?),
        Expression::Add(left, right) => {
            Ok(&eval(left, bindings, arity)? + &eval(right, bindings, arity)?)
        }
        Expression::Sub(left, right) => {
            Ok(&eval(left, bindings, arity)? - &eval(right, bindings, arity)?)
        }
        Expression::Mul(left, right) => {
            Ok(&eval(left, bindings, arity)? * &eval(right, bindings, arity)?)
        }
        Expression::Pow(base, exponent) => Ok(eval(base, bindings, arity)?.pow(*exponent)),
    }
}

/// Per-block symmetry of an integrand under permutations of the `xi`
/// variables; `vars` are 1-based inclusive ranges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryReport {
    pub blocks: Vec<BlockSymmetry>,
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSymmetry {
    pub low: usize,
    pub high: usize,
    pub symmetric: bool,
}

/// Checks whether the integrand is invariant under permutations of the
/// `xi` variables within each block of the flag data. Advisory only: the
/// extraction formulas are defined for any integrand, but only
/// block-symmetric ones represent classes on the partial flag bundle.
pub fn check_block_symmetry(
    expression: &Expression,
    bindings: &Bindings,
    spec: &FlagSpec,
) -> Result<SymmetryReport, EvalError> {
    let f = eval(expression, bindings, spec.d())?;
    Ok(check_block_symmetry_poly(&f, spec))
}

/// The same check for an already evaluated integrand.
pub fn check_block_symmetry_poly(f: &LaurentPoly, spec: &FlagSpec) -> SymmetryReport {
    let mut blocks = Vec::new();
    let mut symmetric = true;
    for range in spec.blocks() {
        let (low, high) = (*range.start(), *range.end());
        let block_symmetric = (low..high).all(|i| f.swap_vars(i - 1, i) == *f);
        symmetric &= block_symmetric;
        blocks.push(BlockSymmetry {
            low,
            high,
            symmetric: block_symmetric,
        });
    }
    SymmetryReport { blocks, symmetric }
}
