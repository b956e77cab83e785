use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::GaussianRational;

/// Univariate polynomial over Q(i), stored sparsely with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    coeffs: BTreeMap<u32, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Polynomial::monomial(c, 0)
    }

    pub fn monomial(c: GaussianRational, exp: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Polynomial { coeffs }
    }

    /// The polynomial `z`.
    pub fn var() -> Self {
        Polynomial::monomial(GaussianRational::one(), 1)
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (u32, GaussianRational)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<u32, GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            let slot = coeffs.entry(e).or_default();
            *slot = &*slot + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Polynomial { coeffs }
    }

    /// Dense coefficients `c_0 + c_1 z + ...` given as integers.
    pub fn from_ints(cs: &[i64]) -> Self {
        Polynomial::from_terms(
            cs.iter()
                .enumerate()
                .map(|(e, &c)| (e as u32, GaussianRational::from_int(c))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// `None` stands for the degree of the zero polynomial (minus infinity).
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.values().next_back()
    }

    pub fn coeff(&self, exp: u32) -> GaussianRational {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &GaussianRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_constant(&self) -> bool {
        self.degree().unwrap_or(0) == 0
    }

    /// `Some((exp, coeff))` when the polynomial is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(u32, &GaussianRational)> {
        if self.coeffs.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: u32) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|(e, a)| (e + k, a.clone())).collect(),
        }
    }

    /// Divides by `z^k`; every exponent must be at least `k`.
    pub fn unshift(&self, k: u32) -> Self {
        debug_assert!(self.lowest_degree().unwrap_or(k) >= k);
        Polynomial {
            coeffs: self.coeffs.iter().map(|(e, a)| (e - k, a.clone())).collect(),
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Polynomial::zero(),
            Some(lc) => {
                let inv = lc.checked_inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.leading_coeff().unwrap().checked_inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = BTreeMap::new();
        while let Some((&e, c)) = rem.iter().next_back() {
            if e < dd {
                break;
            }
            let factor = c * &lc_inv;
            let shift = e - dd;
            for (de, dc) in divisor.coeffs.iter() {
                let slot = rem.entry(de + shift).or_default();
                *slot = &*slot - &(&factor * dc);
                if slot.is_zero() {
                    rem.remove(&(de + shift));
                }
            }
            quot.insert(shift, factor);
        }
        (Polynomial { coeffs: quot }, Polynomial { coeffs: rem })
    }

    /// Exact quotient; panics (debug) if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Polynomial) -> Polynomial {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return Polynomial::one();
        }
        // both monomial-divisible parts are handled by the general loop, but
        // pure monomials are common enough to short-circuit
        if let (Some((ea, _)), Some((eb, _))) = (a.as_monomial(), b.as_monomial()) {
            return Polynomial::monomial(GaussianRational::one(), ea.min(eb));
        }
        let (mut x, mut y) = (a.monic(), b.monic());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn derivative(&self) -> Self {
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| **e > 0)
                .map(|(e, c)| (e - 1, c * &GaussianRational::from_int(*e as i64)))
                .collect(),
        }
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        // Horner over the sparse exponents
        let mut acc = GaussianRational::zero();
        let mut prev: Option<u32> = None;
        for (e, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc = &acc * &x.pow(p - e);
            }
            acc = &acc + c;
            prev = Some(*e);
        }
        if let Some(p) = prev {
            acc = &acc * &x.pow(p);
        }
        acc
    }

    /// Multiplicity of `p` as a root.
    pub fn root_multiplicity(&self, p: &GaussianRational) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let lin = Polynomial::from_terms([(1, GaussianRational::one()), (0, -p)]);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = cur.div_rem(&lin);
            if !r.is_zero() {
                return m;
            }
            cur = q;
            m += 1;
        }
    }

    /// Substitutes a scalar into the variable and returns the value as a
    /// polynomial in another variable: `p(a + b*x)`.
    pub fn compose_linear(&self, a: &GaussianRational, b: &GaussianRational) -> Polynomial {
        let lin = Polynomial::from_terms([(0, a.clone()), (1, b.clone())]);
        let mut acc = Polynomial::zero();
        for (e, c) in self.coeffs.iter() {
            acc = &acc + &lin.pow(*e).scale(c);
        }
        acc
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in o.coeffs.iter() {
            let slot = coeffs.entry(*e).or_default();
            *slot = &*slot + c;
            if slot.is_zero() {
                coeffs.remove(e);
            }
        }
        Polynomial { coeffs }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs: BTreeMap<u32, GaussianRational> = BTreeMap::new();
        for (ea, ca) in self.coeffs.iter() {
            for (eb, cb) in o.coeffs.iter() {
                let slot = coeffs.entry(ea + eb).or_default();
                *slot = &*slot + &(ca * cb);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Polynomial { coeffs }
    }
}

/// Splits a scalar into a sign and a magnitude suitable for `a - b` printing.
pub(crate) fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    let negative = if c.im().is_zero() {
        c.re().is_negative()
    } else {
        c.re().is_zero() && c.im().is_negative()
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

/// Writes `coeff * var^exp` with a positive-looking coefficient.
pub(crate) fn write_monomial(
    f: &mut impl fmt::Write,
    mag: &GaussianRational,
    var: &str,
    exp: i64,
) -> fmt::Result {
    if exp == 0 {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        write!(f, "{mag}*")?;
    }
    if exp == 1 {
        write!(f, "{var}")
    } else {
        write!(f, "{var}^{exp}")
    }
}

impl Polynomial {
    /// Prints in ascending degree using `var` for the indeterminate.
    pub fn write_with(&self, f: &mut impl fmt::Write, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (neg, mag) = split_sign(c);
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_monomial(f, &mag, var, e as i64)?;
        }
        Ok(())
    }

    pub fn to_string_with(&self, var: &str) -> String {
        let mut s = String::new();
        self.write_with(&mut s, var).unwrap();
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, "z")
    }
}
