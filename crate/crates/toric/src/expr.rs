//! Parser and AST for the class-expression language.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor ("*" factor)* ;
//! factor := atom ("^" UINT)? ;
//! atom   := RATIONAL | SYMBOL | "I" "[" innerexpr "]" | "(" expr ")" ;
//! SYMBOL := "c" UINT | "p" UINT | "eu" | "Omega" | "omegatilde" ;
//! RATIONAL := INT ("/" UINT)? ;
//! ```
//!
//! Integral atoms `I[...]` may not nest, and their inner expressions carry
//! class symbols only.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::charclass::ClassSymbol;
use crate::exactalg::{MPoly, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassExpr {
    Rational(Rat),
    Symbol(ClassSymbol),
    /// Fiber-integral atom `I[inner]`.
    Integral(Box<ClassExpr>),
    Pow(Box<ClassExpr>, u32),
    Product(Vec<ClassExpr>),
    /// Terms with their signs; the first sign is always positive.
    Sum(Vec<(bool, ClassExpr)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("nested integral at position {pos}")]
    NestedIntegral { pos: usize },
}

impl ClassExpr {
    pub fn contains_integral(&self) -> bool {
        match self {
            ClassExpr::Rational(_) | ClassExpr::Symbol(_) => false,
            ClassExpr::Integral(_) => true,
            ClassExpr::Pow(inner, _) => inner.contains_integral(),
            ClassExpr::Product(fs) => fs.iter().any(|f| f.contains_integral()),
            ClassExpr::Sum(ts) => ts.iter().any(|(_, t)| t.contains_integral()),
        }
    }

    /// True when a class symbol occurs outside every integral atom.
    pub fn has_bare_symbol(&self) -> bool {
        match self {
            ClassExpr::Rational(_) => false,
            ClassExpr::Symbol(_) => true,
            ClassExpr::Integral(_) => false,
            ClassExpr::Pow(inner, _) => inner.has_bare_symbol(),
            ClassExpr::Product(fs) => fs.iter().any(|f| f.has_bare_symbol()),
            ClassExpr::Sum(ts) => ts.iter().any(|(_, t)| t.has_bare_symbol()),
        }
    }

    /// Inner expressions of every integral atom, left to right.
    pub fn integral_atoms<'a>(&'a self, out: &mut Vec<&'a ClassExpr>) {
        match self {
            ClassExpr::Rational(_) | ClassExpr::Symbol(_) => {}
            ClassExpr::Integral(inner) => out.push(inner),
            ClassExpr::Pow(inner, _) => inner.integral_atoms(out),
            ClassExpr::Product(fs) => {
                for f in fs {
                    f.integral_atoms(out);
                }
            }
            ClassExpr::Sum(ts) => {
                for (_, t) in ts {
                    t.integral_atoms(out);
                }
            }
        }
    }

    /// Every class symbol occurring anywhere in the expression.
    pub fn symbols(&self, out: &mut BTreeSet<ClassSymbol>) {
        match self {
            ClassExpr::Rational(_) => {}
            ClassExpr::Symbol(s) => {
                out.insert(*s);
            }
            ClassExpr::Integral(inner) => inner.symbols(out),
            ClassExpr::Pow(inner, _) => inner.symbols(out),
            ClassExpr::Product(fs) => {
                for f in fs {
                    f.symbols(out);
                }
            }
            ClassExpr::Sum(ts) => {
                for (_, t) in ts {
                    t.symbols(out);
                }
            }
        }
    }

    /// Homogeneous cohomological degree, with `n` the complex dimension of
    /// the fiber. An integral atom of inner degree d contributes d - 2n,
    /// which may be negative. Returns None for inhomogeneous sums.
    pub fn coh_degree(&self, n: usize) -> Option<i64> {
        match self {
            ClassExpr::Rational(_) => Some(0),
            ClassExpr::Symbol(s) => Some(s.coh_degree(n) as i64),
            ClassExpr::Integral(inner) => Some(inner.coh_degree(n)? - 2 * n as i64),
            ClassExpr::Pow(inner, e) => Some(inner.coh_degree(n)? * *e as i64),
            ClassExpr::Product(fs) => {
                let mut total = 0;
                for f in fs {
                    total += f.coh_degree(n)?;
                }
                Some(total)
            }
            ClassExpr::Sum(ts) => {
                let mut degree = None;
                for (_, t) in ts {
                    let d = t.coh_degree(n)?;
                    match degree {
                        None => degree = Some(d),
                        Some(existing) if existing == d => {}
                        Some(_) => return None,
                    }
                }
                degree
            }
        }
    }

    /// Evaluate in the polynomial ring, resolving symbols and integral atoms
    /// through the supplied callbacks.
    pub fn eval<E>(
        &self,
        symbol: &mut dyn FnMut(ClassSymbol) -> Result<MPoly, E>,
        integral: &mut dyn FnMut(&ClassExpr) -> Result<MPoly, E>,
    ) -> Result<MPoly, E> {
        match self {
            ClassExpr::Rational(r) => Ok(MPoly::constant(r.clone())),
            ClassExpr::Symbol(s) => symbol(*s),
            ClassExpr::Integral(inner) => integral(inner),
            ClassExpr::Pow(inner, e) => Ok(inner.eval(symbol, integral)?.pow(*e)),
            ClassExpr::Product(fs) => {
                let mut acc = MPoly::one();
                for f in fs {
                    acc = &acc * &f.eval(symbol, integral)?;
                }
                Ok(acc)
            }
            ClassExpr::Sum(ts) => {
                let mut acc = MPoly::zero();
                for (negate, t) in ts {
                    let v = t.eval(symbol, integral)?;
                    acc = if *negate { &acc - &v } else { &acc + &v };
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Rational(r) => write!(f, "{}", crate::exactalg::rat_to_string(r)),
            ClassExpr::Symbol(s) => write!(f, "{s}"),
            ClassExpr::Integral(inner) => write!(f, "I[{inner}]"),
            ClassExpr::Pow(inner, e) => match **inner {
                ClassExpr::Rational(_) | ClassExpr::Symbol(_) | ClassExpr::Integral(_) => {
                    write!(f, "{inner}^{e}")
                }
                _ => write!(f, "({inner})^{e}"),
            },
            ClassExpr::Product(fs) => {
                for (i, factor) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    match factor {
                        ClassExpr::Sum(_) => write!(f, "({factor})")?,
                        _ => write!(f, "{factor}")?,
                    }
                }
                Ok(())
            }
            ClassExpr::Sum(ts) => {
                for (i, (negate, t)) in ts.iter().enumerate() {
                    if i == 0 {
                        if *negate {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if *negate { "-" } else { "+" })?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parse a class expression; errors carry byte positions.
pub fn parse_class_expr(src: &str) -> Result<ClassExpr, ParseError> {
    let mut parser = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let expr = parser.expr(false)?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(ParseError::Syntax {
            pos: parser.pos,
            expected: "end of input or an operator".into(),
        });
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self, in_integral: bool) -> Result<ClassExpr, ParseError> {
        let mut terms = vec![(false, self.term(in_integral)?)];
        while let Some(op) = self.peek() {
            if op == b'+' || op == b'-' {
                self.pos += 1;
                terms.push((op == b'-', self.term(in_integral)?));
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            Ok(terms.pop().unwrap().1)
        } else {
            Ok(ClassExpr::Sum(terms))
        }
    }

    fn term(&mut self, in_integral: bool) -> Result<ClassExpr, ParseError> {
        let mut factors = vec![self.factor(in_integral)?];
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            factors.push(self.factor(in_integral)?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().unwrap())
        } else {
            Ok(ClassExpr::Product(factors))
        }
    }

    fn factor(&mut self, in_integral: bool) -> Result<ClassExpr, ParseError> {
        let atom = self.atom(in_integral)?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            let e = self.uint()?;
            return Ok(ClassExpr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn atom(&mut self, in_integral: bool) -> Result<ClassExpr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(in_integral)?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let word = self.word();
                if word == "I" {
                    if in_integral {
                        return Err(ParseError::NestedIntegral { pos: start });
                    }
                    self.expect(b'[')?;
                    let inner = self.expr(true)?;
                    self.expect(b']')?;
                    return Ok(ClassExpr::Integral(Box::new(inner)));
                }
                self.symbol(&word, start)
            }
            _ => Err(ParseError::Syntax {
                pos: self.pos,
                expected: "a rational, a class symbol, I[...], or (".into(),
            }),
        }
    }

    fn symbol(&mut self, word: &str, start: usize) -> Result<ClassExpr, ParseError> {
        let sym = match word {
            "eu" => ClassSymbol::EulerClass,
            "Omega" => ClassSymbol::Omega,
            "omegatilde" => ClassSymbol::OmegaTilde,
            _ => {
                let (head, digits) = word.split_at(1);
                let index: Option<u32> =
                    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
                        .then(|| digits.parse().ok())
                        .flatten();
                match (head, index) {
                    ("c", Some(i)) if i >= 1 => ClassSymbol::Chern(i),
                    ("p", Some(i)) if i >= 1 => ClassSymbol::Pontryagin(i),
                    _ => {
                        return Err(ParseError::Syntax {
                            pos: start,
                            expected: "one of c<i>, p<i>, eu, Omega, omegatilde".into(),
                        })
                    }
                }
            }
        };
        Ok(ClassExpr::Symbol(sym))
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn rational(&mut self) -> Result<ClassExpr, ParseError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = self.uint_str()?;
        let mut den = String::from("1");
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            den = self.uint_str()?;
        }
        let p: num_bigint::BigInt = num.parse().expect("digits");
        let q: num_bigint::BigInt = den.parse().expect("digits");
        if q == num_bigint::BigInt::from(0) {
            return Err(ParseError::Syntax {
                pos: self.pos,
                expected: "a nonzero denominator".into(),
            });
        }
        let r = Rat::new(if neg { -p } else { p }, q);
        Ok(ClassExpr::Rational(r))
    }

    fn uint_str(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::Syntax {
                pos: start,
                expected: "digits".into(),
            });
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let s = self.uint_str()?;
        s.parse().map_err(|_| ParseError::Syntax {
            pos: start,
            expected: "a small nonnegative exponent".into(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos,
                expected: format!("`{}`", c as char),
            })
        }
    }
}
