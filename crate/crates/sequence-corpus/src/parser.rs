//! Text grammar for polynomials used by fixtures and the command line.
//!
//! Grammar: integer literals; variables `x`, `y`, `z` (aliases for the first
//! three coordinates) or `x1..xk`; operators `+ - * ^`; parentheses; unary
//! minus; juxtaposition as multiplication (`3 x (x + 1)`). Whitespace is
//! insignificant. Expressions are lowered either to a `ModPoly` with
//! coefficients reduced modulo `p^α`, or to exact `i64` coefficient maps for
//! oracle use.

use diagonal_automata::modarith::ModulusSpec;
use diagonal_automata::ModPoly;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected token {0:?}")]
    UnexpectedToken(String),
    #[error("variable {0:?} is out of range for arity {1}")]
    VariableOutOfRange(String, usize),
    #[error("exponent does not fit in u32")]
    ExponentTooLarge,
    #[error("coefficient overflow during expansion")]
    CoefficientOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(u64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str, arity: usize) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: u64 = input[start..i]
                    .parse()
                    .map_err(|_| ParseError::CoefficientOverflow)?;
                tokens.push(Token::Int(n));
            }
            'x' | 'y' | 'z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let name = &input[start..i];
                let index = match name {
                    "x" => 0,
                    "y" => 1,
                    "z" => 2,
                    _ => {
                        let k: usize = name[1..]
                            .parse()
                            .map_err(|_| ParseError::UnexpectedToken(name.to_string()))?;
                        if k == 0 {
                            return Err(ParseError::UnexpectedToken(name.to_string()));
                        }
                        k - 1
                    }
                };
                if index >= arity {
                    return Err(ParseError::VariableOutOfRange(name.to_string(), arity));
                }
                tokens.push(Token::Var(index));
            }
            _ => return Err(ParseError::UnexpectedChar(c, i)),
        }
    }
    Ok(tokens)
}

/// A polynomial with exact integer coefficients, keyed by exponent vector.
pub type IntPoly = BTreeMap<Vec<u32>, i64>;

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    arity: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<IntPoly, ParseError> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                Token::Plus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add(acc, rhs, 1)?;
                }
                Token::Minus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add(acc, rhs, -1)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // term := ['-'] factor (('*' | juxtaposition) factor)*
    fn term(&mut self) -> Result<IntPoly, ParseError> {
        let mut negate = false;
        while matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            negate = !negate;
        }
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs, self.arity)?;
                }
                // juxtaposition: a factor can start here without an operator
                Some(Token::Int(_)) | Some(Token::Var(_)) | Some(Token::LParen) => {
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs, self.arity)?;
                }
                _ => break,
            }
        }
        if negate {
            for v in acc.values_mut() {
                *v = v.checked_neg().ok_or(ParseError::CoefficientOverflow)?;
            }
        }
        Ok(acc)
    }

    // power := atom ['^' integer]
    fn power(&mut self) -> Result<IntPoly, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            let e = match self.next() {
                Some(Token::Int(n)) => u32::try_from(n).map_err(|_| ParseError::ExponentTooLarge)?,
                Some(t) => return Err(ParseError::UnexpectedToken(format!("{t:?}"))),
                None => return Err(ParseError::UnexpectedEnd),
            };
            let mut acc = constant(1, self.arity);
            for _ in 0..e {
                acc = mul(&acc, &base, self.arity)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<IntPoly, ParseError> {
        match self.next() {
            Some(Token::Int(n)) => {
                let c = i64::try_from(n).map_err(|_| ParseError::CoefficientOverflow)?;
                Ok(constant(c, self.arity))
            }
            Some(Token::Var(i)) => {
                let mut e = vec![0u32; self.arity];
                e[i] = 1;
                Ok(IntPoly::from([(e, 1)]))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    Some(t) => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
                    None => Err(ParseError::UnexpectedEnd),
                }
            }
            Some(t) => Err(ParseError::UnexpectedToken(format!("{t:?}"))),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

fn constant(c: i64, arity: usize) -> IntPoly {
    if c == 0 {
        IntPoly::new()
    } else {
        IntPoly::from([(vec![0u32; arity], c)])
    }
}

fn add(mut a: IntPoly, b: IntPoly, sign: i64) -> Result<IntPoly, ParseError> {
    for (e, c) in b {
        let slot = a.entry(e).or_insert(0);
        *slot = slot
            .checked_add(c.checked_mul(sign).ok_or(ParseError::CoefficientOverflow)?)
            .ok_or(ParseError::CoefficientOverflow)?;
    }
    a.retain(|_, &mut c| c != 0);
    Ok(a)
}

fn mul(a: &IntPoly, b: &IntPoly, arity: usize) -> Result<IntPoly, ParseError> {
    let mut out = IntPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = (0..arity).map(|i| ea[i] + eb[i]).collect();
            let c = ca.checked_mul(*cb).ok_or(ParseError::CoefficientOverflow)?;
            let slot = out.entry(e).or_insert(0);
            *slot = slot.checked_add(c).ok_or(ParseError::CoefficientOverflow)?;
        }
    }
    out.retain(|_, &mut c| c != 0);
    Ok(out)
}

/// Parse to exact integer coefficients.
pub fn parse_int_poly(input: &str, arity: usize) -> Result<IntPoly, ParseError> {
    let tokens = lex(input, arity)?;
    let mut p = Parser { tokens: &tokens, pos: 0, arity };
    let poly = p.expr()?;
    if p.pos != tokens.len() {
        return Err(ParseError::UnexpectedToken(format!("{:?}", tokens[p.pos])));
    }
    Ok(poly)
}

/// Parse and reduce modulo `p^α`.
pub fn parse_mod_poly(
    input: &str,
    arity: usize,
    modulus: ModulusSpec,
) -> Result<ModPoly, ParseError> {
    let ip = parse_int_poly(input, arity)?;
    Ok(ModPoly::from_terms(
        modulus,
        arity,
        ip.into_iter().map(|(e, c)| (e, c)),
    ))
}
