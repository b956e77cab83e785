//! Superfunction literals: a small recursive-descent parser and its printer.
//!
//! Expressions use `z` for the even coordinate and `t1..tn` for the odd ones.
//! Odd factors written directly in one term must have strictly increasing
//! indices, so the sign of every term is visible in the source.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::grassmann::{ChartId, OddMultiIndex, SuperFunction};
use crate::scalar::{GaussianRational, RationalFunction};
use crate::{Error, Result};

/// Parses `text` as a chart-0 superfunction with `odd_dim` odd variables.
pub fn parse_superfunction(text: &str, odd_dim: usize) -> Result<SuperFunction> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        n: odd_dim,
    };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.err("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.err(format!("unexpected '{}'", c as char)));
    }
    Ok(v)
}

/// Canonical text in the chart-0 variables; parses back to the same value.
pub fn print_superfunction(f: &SuperFunction) -> String {
    f.to_string_vars("z", "t")
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SuperFunction> {
        let negate = self.eat(b'-');
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SuperFunction> {
        let mut last_odd: Option<usize> = None;
        let mut acc = self.factor(&mut last_odd)?;
        while self.eat(b'*') {
            let f = self.factor(&mut last_odd)?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    /// `atom ('/' atom)*`; every divisor must be free of odd variables.
    fn factor(&mut self, last_odd: &mut Option<usize>) -> Result<SuperFunction> {
        let mut acc = self.atom(Some(last_odd))?;
        loop {
            self.skip_ws();
            let at = self.pos;
            if !self.eat(b'/') {
                return Ok(acc);
            }
            let d = self.atom(None)?;
            if d.terms().any(|(idx, _)| !idx.is_empty()) {
                return Err(Error::OddDenominator { pos: at });
            }
            let d = d.reduced();
            if d.is_zero() {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "division by zero".into(),
                });
            }
            acc = acc.mul_rf(&d.recip()?);
        }
    }

    /// One primary. `last_odd` tracks bare odd factors of the current term;
    /// it is `None` inside a denominator, where odd variables are rejected.
    fn atom(&mut self, last_odd: Option<&mut Option<usize>>) -> Result<SuperFunction> {
        self.skip_ws();
        let start = self.pos;
        let n = self.n;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(b'z') => {
                self.pos += 1;
                let mut e = 1i64;
                if self.eat(b'^') {
                    self.skip_ws();
                    let neg = self.peek() == Some(b'-');
                    if neg {
                        self.pos += 1;
                    }
                    let mag = self.integer()?;
                    let mag: i64 = mag.try_into().map_err(|_| self.err("exponent too large"))?;
                    e = if neg { -mag } else { mag };
                }
                let c = RationalFunction::laurent_monomial(GaussianRational::from_int(1), e);
                Ok(SuperFunction::from_rf(ChartId::Zero, n, c))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(SuperFunction::constant(ChartId::Zero, n, GaussianRational::i()))
            }
            Some(b't') => {
                self.pos += 1;
                let Some(last) = last_odd else {
                    return Err(Error::OddDenominator { pos: start });
                };
                let j: usize = self
                    .integer()?
                    .try_into()
                    .map_err(|_| self.err("odd index too large"))?;
                if j == 0 || j > n {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("t{j} is not one of t1..t{n}"),
                    });
                }
                match *last {
                    Some(prev) if prev == j => return Err(Error::RepeatedOddVariable { pos: start, var: j }),
                    Some(prev) if prev > j => {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: format!("t{j} after t{prev}: odd factors must have increasing indices"),
                        })
                    }
                    _ => *last = Some(j),
                }
                Ok(SuperFunction::monomial(
                    ChartId::Zero,
                    n,
                    RationalFunction::one(),
                    OddMultiIndex::single(j - 1),
                ))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                if self.peek() == Some(b'.') {
                    return Err(self.err("decimal numbers are not supported; write a fraction"));
                }
                let q = GaussianRational::from_rational(BigRational::from_integer(v));
                Ok(SuperFunction::constant(ChartId::Zero, n, q))
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }
}
