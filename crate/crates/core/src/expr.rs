//! Class expressions: a recursive-descent parser for divisor/Chow
//! expressions over a surface model, and the evaluator that lowers them
//! to formal H-polynomials.
//!
//! Grammar (names are case-sensitive; `H` and `pt` are reserved, `K` is
//! the canonical class, the remaining names are the model's basis):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := rational | name | '(' expr ')'
//! ```
//!
//! Evaluation is formal: reduction through the bundle relation happens
//! once, after the whole expression has been expanded, so `H^3` sees the
//! mode's postulated degree value. Products that exceed degree 3
//! collapse to zero and surface as a warning, not an error.

use num_traits::{Signed, Zero};

use crate::chow::{BundleData, ChowClass, ConventionMode, HPoly};
use crate::error::{EngineError, Result};
use crate::lattice::SurfaceModel;
use crate::rat::Rat;

/// Abstract syntax for class expressions.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassExpr {
    Num(Rat),
    Name { name: String, offset: usize },
    Neg(Box<ClassExpr>),
    Add(Box<ClassExpr>, Box<ClassExpr>),
    Sub(Box<ClassExpr>, Box<ClassExpr>),
    Mul(Box<ClassExpr>, Box<ClassExpr>),
    Pow(Box<ClassExpr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rat),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(message: impl Into<String>, offset: usize) -> EngineError {
    EngineError::Syntax {
        message: message.into(),
        offset,
    }
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut text = &src[start..i];
                if i < bytes.len() && bytes[i] == b'/' {
                    let slash = i;
                    i += 1;
                    let den_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == den_start {
                        return Err(syntax("expected digits after `/`", slash));
                    }
                    text = &src[start..i];
                }
                let value: Rat = text
                    .parse()
                    .map_err(|_| syntax(format!("invalid rational literal `{text}`"), start))?;
                out.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Name(src[start..i].to_string()), start));
            }
            other => {
                return Err(syntax(format!("unexpected character `{other}`"), i));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, o)| *o)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<&(Token, usize)> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<ClassExpr> {
        let leading_minus = match self.peek() {
            Some(Token::Minus) => {
                self.next();
                true
            }
            Some(Token::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        let mut node = self.term()?;
        if leading_minus {
            node = ClassExpr::Neg(Box::new(node));
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    node = ClassExpr::Add(Box::new(node), Box::new(rhs));
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    node = ClassExpr::Sub(Box::new(node), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(node)
    }

    fn term(&mut self) -> Result<ClassExpr> {
        let mut node = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            let rhs = self.factor()?;
            node = ClassExpr::Mul(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn factor(&mut self) -> Result<ClassExpr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            let off = self.offset();
            match self.next() {
                Some((Token::Num(q), _)) if q.is_integer() && !q.is_negative() => {
                    let exp: u32 = q
                        .to_integer()
                        .try_into()
                        .map_err(|_| syntax("exponent too large", off))?;
                    if exp > 999 {
                        return Err(syntax("exponent too large", off));
                    }
                    Ok(ClassExpr::Pow(Box::new(base), exp))
                }
                _ => Err(syntax("expected a small non-negative integer exponent", off)),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ClassExpr> {
        let off = self.offset();
        match self.next() {
            Some((Token::Num(q), _)) => Ok(ClassExpr::Num(q.clone())),
            Some((Token::Name(n), o)) => Ok(ClassExpr::Name {
                name: n.clone(),
                offset: *o,
            }),
            Some((Token::LParen, open)) => {
                let open = *open;
                let inner = self.expr()?;
                match self.next() {
                    Some((Token::RParen, _)) => Ok(inner),
                    _ => Err(syntax("unclosed `(`", open)),
                }
            }
            Some((_, o)) => Err(syntax("expected a rational, a name, or `(`", *o)),
            None => Err(syntax("unexpected end of input", off)),
        }
    }
}

/// Parses a class expression and resolves every name against the model.
pub fn parse_class(src: &str, model: &SurfaceModel) -> Result<ClassExpr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(syntax("empty expression", 0));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end: src.len(),
    };
    let expr = parser.expr()?;
    if parser.pos != tokens.len() {
        let (_, off) = tokens[parser.pos];
        return Err(syntax("trailing input after expression", off));
    }
    resolve_names(&expr, model)?;
    Ok(expr)
}

fn resolve_names(expr: &ClassExpr, model: &SurfaceModel) -> Result<()> {
    match expr {
        ClassExpr::Num(_) => Ok(()),
        ClassExpr::Name { name, offset } => {
            if name == "H" || name == "pt" || name == "K" {
                return Ok(());
            }
            if model.basis_names().iter().any(|b| b == name) {
                return Ok(());
            }
            Err(EngineError::UnknownName {
                name: name.clone(),
                offset: *offset,
            })
        }
        ClassExpr::Neg(inner) | ClassExpr::Pow(inner, _) => resolve_names(inner, model),
        ClassExpr::Add(a, b) | ClassExpr::Sub(a, b) | ClassExpr::Mul(a, b) => {
            resolve_names(a, model)?;
            resolve_names(b, model)
        }
    }
}

/// Result of evaluating an expression: the unreduced polynomial, its
/// normal form under the requested mode, the degree-3 value, and any
/// truncation warnings.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub formal: HPoly,
    pub normal: ChowClass,
    pub degree: Rat,
    pub warnings: Vec<String>,
}

/// Lowers the expression to a formal H-polynomial (no bundle relation
/// applied yet) and reduces once at the end.
pub fn eval_class(
    expr: &ClassExpr,
    model: &SurfaceModel,
    bundle: &BundleData,
    mode: ConventionMode,
) -> Result<EvalOutcome> {
    let mut overflow = false;
    let formal = eval_formal(expr, model, &mut overflow)?;
    let normal = formal.reduce(model, bundle, mode)?;
    let degree = normal.a3().clone();
    let warnings = if overflow {
        vec!["degree overflow: products beyond degree 3 collapsed to zero".to_string()]
    } else {
        Vec::new()
    };
    Ok(EvalOutcome {
        formal,
        normal,
        degree,
        warnings,
    })
}

/// Convenience: parse then evaluate.
pub fn parse_and_eval(
    src: &str,
    model: &SurfaceModel,
    bundle: &BundleData,
    mode: ConventionMode,
) -> Result<EvalOutcome> {
    let expr = parse_class(src, model)?;
    eval_class(&expr, model, bundle, mode)
}

fn eval_formal(expr: &ClassExpr, model: &SurfaceModel, overflow: &mut bool) -> Result<HPoly> {
    let rank = model.rank();
    match expr {
        ClassExpr::Num(q) => Ok(HPoly::scalar(q.clone(), rank)),
        ClassExpr::Name { name, offset } => match name.as_str() {
            "H" => Ok(HPoly::h(rank)),
            "pt" => Ok(HPoly::pt(rank)),
            "K" => Ok(HPoly::divisor(model.canonical().clone())),
            other => {
                let idx = model
                    .basis_names()
                    .iter()
                    .position(|b| b == other)
                    .ok_or_else(|| EngineError::UnknownName {
                        name: other.to_string(),
                        offset: *offset,
                    })?;
                Ok(HPoly::divisor(model.basis_divisor(idx)))
            }
        },
        ClassExpr::Neg(inner) => Ok(eval_formal(inner, model, overflow)?.neg()),
        ClassExpr::Add(a, b) => {
            Ok(eval_formal(a, model, overflow)?.add(&eval_formal(b, model, overflow)?))
        }
        ClassExpr::Sub(a, b) => {
            Ok(eval_formal(a, model, overflow)?.sub(&eval_formal(b, model, overflow)?))
        }
        ClassExpr::Mul(a, b) => {
            let lhs = eval_formal(a, model, overflow)?;
            let rhs = eval_formal(b, model, overflow)?;
            let (prod, o) = lhs.mul_tracked(&rhs, model)?;
            *overflow |= o;
            Ok(prod)
        }
        ClassExpr::Pow(inner, k) => {
            let base = eval_formal(inner, model, overflow)?;
            let (p, o) = base.pow_tracked(*k, model)?;
            *overflow |= o;
            Ok(p)
        }
    }
}

/// Evaluates an expression that must be a pure divisor class (degree-1
/// surface part only); used for CLI flags like the cover divisor.
pub fn eval_divisor(src: &str, model: &SurfaceModel) -> Result<crate::lattice::DivisorClass> {
    let bundle = BundleData::new(crate::lattice::DivisorClass::zero(model.rank()), Rat::zero());
    let outcome = parse_and_eval(src, model, &bundle, ConventionMode::Geometric)?;
    let c = &outcome.normal;
    if !c.a0().is_zero()
        || !c.h1().is_zero()
        || !c.a2().is_zero()
        || !c.h2().is_zero()
        || !c.a3().is_zero()
    {
        return Err(EngineError::invalid(format!(
            "`{src}` is not a pure divisor class on the surface"
        )));
    }
    Ok(c.a1().clone())
}
