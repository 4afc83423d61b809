//! Text format: a sum of terms `coeff * x1^a1 * ... * xk^ak`.
//!
//! Coefficients are integers, decimals or fractions (`-3/2`, `0.25`), read
//! exactly. `*` between factors is optional. Columns in errors are 1-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MultiPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Var(usize),
    Caret,
    Star,
    Plus,
    Minus,
    End,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[s..*i].iter().collect::<String>()
    };
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '*' => {
                out.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, col));
                i += 1;
            }
            '+' => {
                out.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, col));
                i += 1;
            }
            'x' | 'X' => {
                i += 1;
                let d = digits(&mut i);
                if d.is_empty() {
                    return Err(err(col, "expected a variable index after 'x'"));
                }
                let k: usize = d.parse().map_err(|_| err(col + 1, "variable index too large"))?;
                if k == 0 {
                    return Err(err(col + 1, "variables are numbered from x1"));
                }
                out.push((Tok::Var(k), col));
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let int = digits(&mut i);
                let mut frac = String::new();
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    frac = digits(&mut i);
                    if int.is_empty() && frac.is_empty() {
                        return Err(err(col, "malformed number"));
                    }
                }
                let num: BigInt = format!("{int}{frac}")
                    .parse()
                    .map_err(|_| err(col, "malformed number"))?;
                let mut den = num_traits::pow(BigInt::from(10), frac.len());
                if i < chars.len() && chars[i] == '/' {
                    let slash = i + 1;
                    i += 1;
                    let d = digits(&mut i);
                    if d.is_empty() {
                        return Err(err(slash + 1, "expected a denominator after '/'"));
                    }
                    let d: BigInt = d.parse().map_err(|_| err(slash + 1, "malformed denominator"))?;
                    if d.is_zero() {
                        return Err(err(slash + 1, "zero denominator"));
                    }
                    den *= d;
                }
                out.push((Tok::Num(BigRational::new(num, den)), col));
            }
            _ => return Err(err(col, format!("unexpected character '{c}'"))),
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: Option<usize>,
    max_var: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    /// One factor, folded into (coefficient, exponents by 1-based index).
    fn factor(&mut self, coeff: &mut BigRational, exps: &mut Vec<(usize, u32)>) -> Result<()> {
        match self.bump() {
            (Tok::Num(c), _) => {
                if self.peek() == &Tok::Caret {
                    return Err(err(self.col(), "powers of numbers are not supported"));
                }
                *coeff *= c;
            }
            (Tok::Var(k), col) => {
                if let Some(n) = self.n {
                    if k > n {
                        return Err(err(col, format!("x{k} exceeds the {n} declared variables")));
                    }
                }
                self.max_var = self.max_var.max(k);
                let mut a = 1u32;
                if self.peek() == &Tok::Caret {
                    self.bump();
                    let col = self.col();
                    match self.bump().0 {
                        Tok::Num(e) if e.is_integer() => {
                            a = e
                                .to_integer()
                                .try_into()
                                .map_err(|_| err(col, "exponent must be a small non-negative integer"))?;
                        }
                        _ => return Err(err(col, "expected an integer exponent after '^'")),
                    }
                }
                exps.push((k, a));
            }
            (_, col) => return Err(err(col, "expected a number or a variable")),
        }
        Ok(())
    }

    fn term(&mut self) -> Result<(BigRational, Vec<(usize, u32)>)> {
        let mut coeff = BigRational::one();
        let mut exps = Vec::new();
        self.factor(&mut coeff, &mut exps)?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    self.factor(&mut coeff, &mut exps)?;
                }
                Tok::Num(_) | Tok::Var(_) => self.factor(&mut coeff, &mut exps)?,
                _ => break,
            }
        }
        Ok((coeff, exps))
    }
}

/// Parse a polynomial. With `n = None` the variable count is the largest index used.
pub fn parse(text: &str, n: Option<usize>) -> Result<MultiPoly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, n, max_var: 0 };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match p.peek() {
            Tok::End if first => return Err(err(p.col(), "empty polynomial")),
            Tok::End => break,
            Tok::Plus | Tok::Minus => {
                while matches!(p.peek(), Tok::Plus | Tok::Minus) {
                    if p.bump().0 == Tok::Minus {
                        sign = -sign;
                    }
                }
            }
            _ if first => {}
            _ => return Err(err(p.col(), "expected '+' or '-' between terms")),
        }
        let (c, e) = p.term()?;
        terms.push((sign * c, e));
        first = false;
    }
    let n = n.unwrap_or(p.max_var.max(1));
    let mut out = MultiPoly::zero(n);
    for (c, factors) in terms {
        let mut e = vec![0u32; n];
        for (k, a) in factors {
            e[k - 1] += a;
        }
        out.add_term(e, c);
    }
    Ok(out)
}
