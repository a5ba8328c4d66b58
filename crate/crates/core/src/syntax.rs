//! Infix expression grammar shared by field elements and functions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' exponent)?
//! exponent:= ('-' | '+') exponent | primary ('^' exponent)?
//! primary := number | ident | ident '(' expr ')' | '(' expr ')'
//!          | 'O' '(' 't' '^' '>' exponent ')'
//! ```
//!
//! Numbers are integers or decimal literals; `3/4` is a division that
//! folds to the exact rational. `O(t^>c)` marks a series known only up to
//! exponent `c`.

use crate::calculus::{FnExpr, VARIABLE_NAMES};
use crate::error::{Error, Result};
use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Sym(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut tokens = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(p, _)| *p);
            let lit = &text[pos..end];
            if lit.matches('.').count() > 1 {
                return Err(Error::parse(pos, format!("malformed number {lit:?}")));
            }
            let value: Rational = lit.parse().map_err(|_| Error::parse(pos, format!("malformed number {lit:?}")))?;
            tokens.push((Token::Number(value), chars[start].0));
        } else if c.is_alphabetic() || c == '_' {
            let start = pos;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |(p, _)| *p);
            tokens.push((Token::Ident(text[start..end].to_string()), start));
        } else if "+-*/^()>".contains(c) {
            tokens.push((Token::Sym(c), pos));
            i += 1;
        } else {
            return Err(Error::parse(pos, format!("unexpected character {c:?}")));
        }
    }
    tokens.push((Token::End, text.len()));
    Ok(tokens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Parsed expression, before it is given meaning in a field or as a
/// function.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Num(Rational),
    Ident { name: String, pos: usize },
    Neg(Box<Ast>),
    Binary { op: BinOp, lhs: Box<Ast>, rhs: Box<Ast> },
    Pow { base: Box<Ast>, exponent: Box<Ast>, pos: usize },
    Call { name: String, arg: Box<Ast>, pos: usize },
    /// `O(t^>c)`.
    BigO { cutoff: Rational, pos: usize },
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let tok = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        tok
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Token::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Sym('+') => BinOp::Add,
                Token::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Ast::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Sym('*') => BinOp::Mul,
                Token::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Ast::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) };
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        let pos = self.pos();
        if self.eat('^') {
            let exponent = self.exponent()?;
            return Ok(Ast::Pow { base: Box::new(base), exponent: Box::new(exponent), pos });
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.exponent()?)));
        }
        if self.eat('+') {
            return self.exponent();
        }
        self.power()
    }

    fn primary(&mut self) -> Result<Ast> {
        let (tok, pos) = self.bump();
        match tok {
            Token::Number(q) => Ok(Ast::Num(q)),
            Token::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Token::Ident(name) if name == "O" && *self.peek() == Token::Sym('(') => {
                self.bump();
                match self.bump() {
                    (Token::Ident(t), _) if t == "t" => {}
                    (_, p) => return Err(Error::parse(p, "expected 't' in O(t^>c)")),
                }
                self.expect('^')?;
                self.expect('>')?;
                let epos = self.pos();
                let e = self.exponent()?;
                let cutoff = fold_constant(&e)
                    .ok_or_else(|| Error::parse(epos, "cutoff exponent must be a rational constant"))?;
                self.expect(')')?;
                Ok(Ast::BigO { cutoff, pos })
            }
            Token::Ident(name) => {
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Ast::Call { name, arg: Box::new(arg), pos })
                } else {
                    Ok(Ast::Ident { name, pos })
                }
            }
            Token::End => Err(Error::parse(pos, "unexpected end of input")),
            Token::Sym(c) => Err(Error::parse(pos, format!("unexpected '{c}'"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Ast> {
    let mut p = Parser { tokens: tokenize(text)?, at: 0 };
    let ast = p.expr()?;
    match p.peek() {
        Token::End => Ok(ast),
        _ => Err(Error::parse(p.pos(), "unexpected trailing input")),
    }
}

/// Value of a constant subexpression (numbers, `+ - * /`, integer powers).
pub fn fold_constant(ast: &Ast) -> Option<Rational> {
    match ast {
        Ast::Num(q) => Some(q.clone()),
        Ast::Neg(a) => fold_constant(a).map(|q| -q),
        Ast::Binary { op, lhs, rhs } => {
            let (a, b) = (fold_constant(lhs)?, fold_constant(rhs)?);
            match op {
                BinOp::Add => Some(a + b),
                BinOp::Sub => Some(a - b),
                BinOp::Mul => Some(a * b),
                BinOp::Div => a.checked_div(&b).ok(),
            }
        }
        Ast::Pow { base, exponent, .. } => {
            let n = fold_constant(exponent)?.to_i64()?;
            fold_constant(base)?.pow(i32::try_from(n).ok()?).ok()
        }
        _ => None,
    }
}

/// Exponent of a power, which must fold to a rational constant.
pub fn exponent_value(exponent: &Ast, pos: usize) -> Result<Rational> {
    fold_constant(exponent).ok_or_else(|| Error::parse(pos, "exponent must be a rational constant"))
}

fn to_fn_expr(ast: &Ast) -> Result<FnExpr> {
    if let Some(q) = fold_constant(ast) {
        return Ok(FnExpr::Const(q));
    }
    Ok(match ast {
        Ast::Num(q) => FnExpr::Const(q.clone()),
        Ast::Ident { name, pos } => match VARIABLE_NAMES.iter().position(|v| v == name) {
            Some(i) => FnExpr::Var(i),
            None if name == "t" => {
                return Err(Error::parse(*pos, "'t' is the infinitesimal generator; functions use x, y, z"))
            }
            None => return Err(Error::parse(*pos, format!("unknown variable {name:?}"))),
        },
        Ast::Neg(a) => -to_fn_expr(a)?,
        Ast::Binary { op, lhs, rhs } => {
            let (a, b) = (to_fn_expr(lhs)?, to_fn_expr(rhs)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
            }
        }
        Ast::Pow { base, exponent, pos } => to_fn_expr(base)?.pow(exponent_value(exponent, *pos)?),
        Ast::Call { name, arg, pos } => {
            let a = to_fn_expr(arg)?;
            match name.as_str() {
                "exp" => a.exp(),
                "ln" | "log" => a.ln(),
                "sin" => a.sin(),
                "cos" => a.cos(),
                "sqrt" => a.sqrt(),
                other => return Err(Error::parse(*pos, format!("unknown function {other:?}"))),
            }
        }
        Ast::BigO { pos, .. } => return Err(Error::parse(*pos, "O(...) terms are not allowed in functions")),
    })
}

/// Parses a function of `x` (and `y`, `z`) such as `sin(x)*exp(x)`.
pub fn parse_fn(text: &str) -> Result<FnExpr> {
    to_fn_expr(&parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn function_grammar() {
        let f = parse_fn("sin(x)*exp(x)").unwrap();
        assert_eq!(f, FnExpr::x().sin() * FnExpr::x().exp());
        assert_eq!(parse_fn("x^3").unwrap(), FnExpr::x().powi(3));
        assert_eq!(parse_fn("x^(1/2)").unwrap(), FnExpr::x().pow(q("1/2")));
        assert_eq!(parse_fn("x^-2").unwrap(), FnExpr::x().powi(-2));
        assert_eq!(parse_fn("3/4").unwrap(), FnExpr::Const(q("3/4")));
        assert_eq!(parse_fn("-x").unwrap(), -FnExpr::x());
        assert_eq!(parse_fn("2^3^2").unwrap(), FnExpr::Const(q("512")));
    }

    #[test]
    fn display_reparses() {
        for text in [
            "(x^2 - 1)/(x - 1)",
            "sin(x + y) - (sin(x)*cos(y) + cos(x)*sin(y))",
            "x^(-1/2) + 3/2*x",
            "-(x - 1)^3/2",
            "sqrt(1 + x^2)*ln(1 + x)",
        ] {
            let f = parse_fn(text).unwrap();
            assert_eq!(parse_fn(&f.to_string()).unwrap(), f, "{text} -> {f}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        match parse_fn("x + * 2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_fn("foo(x)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_fn("t + 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_fn("(x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_fn("x^y"), Err(Error::Parse { .. })));
        assert!(matches!(parse_fn("1.2.3"), Err(Error::Parse { .. })));
    }

    #[test]
    fn big_o_term() {
        let ast = parse("1 + t + O(t^>(1/2))").unwrap();
        match ast {
            Ast::Binary { rhs, .. } => assert!(matches!(*rhs, Ast::BigO { ref cutoff, .. } if *cutoff == q("1/2"))),
            other => panic!("{other:?}"),
        }
        assert!(parse("O(t^>-1)").is_ok());
        assert!(parse("O(x^>1)").is_err());
    }
}
