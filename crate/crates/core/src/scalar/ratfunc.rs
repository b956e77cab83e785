use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{split_sign, write_monomial};
use super::{Field, GaussianRational, Polynomial};
use crate::{Error, Result};

/// Quotient `num/den` of polynomials over Q(i), always in canonical form:
/// `gcd(num, den) = 1` and `den` monic. The zero function is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction::zero();
        }
        if den.is_constant() {
            let inv = den.leading_coeff().unwrap().checked_inv().unwrap();
            return RationalFunction {
                num: num.scale(&inv),
                den: Polynomial::one(),
            };
        }
        let g = match den.as_monomial() {
            // only z divides a monomial denominator
            Some((e, _)) => {
                let k = e.min(num.lowest_degree().unwrap_or(0));
                Polynomial::monomial(GaussianRational::one(), k)
            }
            None => Polynomial::gcd(&num, &den),
        };
        let (num, den) = if g.is_one() {
            (num, den)
        } else if let Some((k, _)) = g.as_monomial() {
            (num.unshift(k), den.unshift(k))
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let inv = den.leading_coeff().unwrap().checked_inv().unwrap();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RationalFunction::constant(GaussianRational::from_int(n))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// The coordinate function `z`.
    pub fn var() -> Self {
        RationalFunction::from_poly(Polynomial::var())
    }

    /// `c * z^e` for any integer `e`.
    pub fn laurent_monomial(c: GaussianRational, e: i64) -> Self {
        if e >= 0 {
            RationalFunction::from_poly(Polynomial::monomial(c, e as u32))
        } else {
            RationalFunction::canonical(
                Polynomial::constant(c),
                Polynomial::monomial(GaussianRational::one(), (-e) as u32),
            )
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Multiplicity of `p` as a pole; zero where the function is regular.
    pub fn pole_order_at(&self, p: &GaussianRational) -> u32 {
        let d = self.den.root_multiplicity(p);
        let n = self.num.root_multiplicity(p);
        d.saturating_sub(n)
    }

    /// Laurent expansion `Σ c_e z^e` when the denominator is a power of `z`.
    pub fn laurent_terms(&self) -> Option<BTreeMap<i64, GaussianRational>> {
        let shift = match self.den.as_monomial() {
            Some((e, _)) => e as i64,
            None => return None,
        };
        Some(
            self.num
                .terms()
                .map(|(e, c)| (e as i64 - shift, c.clone()))
                .collect(),
        )
    }

    /// Whether every pole lies at `z = 0`.
    pub fn is_laurent(&self) -> bool {
        self.den.as_monomial().is_some()
    }

    /// Largest pole order at `z = 0` (0 if regular there).
    pub fn pole_order_at_zero(&self) -> u32 {
        self.pole_order_at(&GaussianRational::zero())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction::canonical(
            &self.num * &o.den,
            &self.den * &o.num,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFunction::one().checked_div(self)
    }

    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Quotient-rule derivative.
    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return RationalFunction::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RationalFunction::canonical(n, &self.den * &self.den)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RationalFunction) -> Result<Self> {
        // homogenize: N(p/q) = Σ n_i p^i q^(deg N - i) / q^(deg N)
        let homog = |poly: &Polynomial| -> (Polynomial, u32) {
            let d = poly.degree().unwrap_or(0);
            let mut acc = Polynomial::zero();
            for (e, c) in poly.terms() {
                let term = &g.num.pow(e) * &g.den.pow(d - e);
                acc = &acc + &term.scale(c);
            }
            (acc, d)
        };
        let (n, dn) = homog(&self.num);
        let (d, dd) = homog(&self.den);
        if d.is_zero() {
            return Err(Error::UndefinedComposition);
        }
        let num = &n * &g.den.pow(dd);
        let den = &d * &g.den.pow(dn);
        Ok(RationalFunction::canonical(num, den))
    }

    /// Evaluates at a point that is not a pole.
    pub fn eval(&self, x: &GaussianRational) -> Result<GaussianRational> {
        let d = self.den.eval(x);
        self.num.eval(x).checked_div(&d)
    }

    /// Single-term Laurent form `c * z^e` if applicable.
    pub fn as_laurent_monomial(&self) -> Option<(i64, GaussianRational)> {
        let (nd, c) = self.num.as_monomial()?;
        let (dd, _) = self.den.as_monomial()?;
        Some((nd as i64 - dd as i64, c.clone()))
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            if self.den.is_one() {
                return RationalFunction::from_poly(&self.num + &o.num);
            }
            return RationalFunction::canonical(&self.num + &o.num, self.den.clone());
        }
        RationalFunction::canonical(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        if self.is_zero() || o.is_zero() {
            return RationalFunction::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RationalFunction::from_poly(&self.num * &o.num);
        }
        RationalFunction::canonical(&self.num * &o.num, &self.den * &o.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Field for RationalFunction {
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn recip(&self) -> Option<Self> {
        RationalFunction::recip(self).ok()
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Printed form of a coefficient used as the leading factor of a term.
pub(crate) struct CoeffText {
    pub negative: bool,
    /// `None` when the magnitude is exactly 1 (so the factor can be dropped).
    pub body: Option<String>,
}

impl RationalFunction {
    pub(crate) fn coeff_text(&self, var: &str) -> CoeffText {
        if let Some((e, c)) = self.as_laurent_monomial() {
            let (negative, mag) = split_sign(&c);
            if e == 0 && mag.is_one() {
                return CoeffText {
                    negative,
                    body: None,
                };
            }
            let mut s = String::new();
            write_monomial(&mut s, &mag, var, e).unwrap();
            return CoeffText {
                negative,
                body: Some(s),
            };
        }
        let num = self.num.to_string_with(var);
        let body = if self.den.is_one() {
            format!("({num})")
        } else if let Some((e, c)) = self.den.as_monomial() {
            debug_assert!(c.is_one());
            let mut d = String::new();
            write_monomial(&mut d, c, var, e as i64).unwrap();
            format!("({num})/{d}")
        } else {
            format!("({num})/({})", self.den.to_string_with(var))
        };
        CoeffText {
            negative: false,
            body: Some(body),
        }
    }

    pub fn to_string_with(&self, var: &str) -> String {
        let t = self.coeff_text(var);
        let body = t.body.unwrap_or_else(|| "1".to_string());
        if t.negative {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("z"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Polynomial {
        Polynomial::from_ints(cs)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    fn zpow(e: i64) -> RationalFunction {
        RationalFunction::laurent_monomial(GaussianRational::one(), e)
    }

    #[test]
    fn monomial_product() {
        assert_eq!(&zpow(-1) * &zpow(-2), zpow(-3));
    }

    #[test]
    fn gcd_cancellation() {
        // (z^2 - 1)/(z - 1) = z + 1
        let f = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(f, RationalFunction::from_poly(p(&[1, 1])));
        assert!(f.is_polynomial());
        assert_eq!(f.pole_order_at(&GaussianRational::one()), 0);
    }

    #[test]
    fn sum_by_cross_multiplication() {
        let a = rf(&[1], &[1, 1]);
        let b = rf(&[1], &[1, -1]);
        let s = &a + &b;
        // oracle: a*d + c*b over b*d, compared by cross-multiplying against 2/(1 - z^2)
        let expected = rf(&[2], &[1, 0, -1]);
        assert_eq!(&s.num * &expected.den, &expected.num * &s.den);
        assert_eq!(s, expected);
        assert!(s.den().leading_coeff().unwrap().is_one());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RationalFunction::one().checked_div(&RationalFunction::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(RationalFunction::new(p(&[1]), Polynomial::zero()).is_err());
    }

    #[test]
    fn compose_monomials() {
        let f = RationalFunction::from_poly(p(&[0, 0, 1]));
        assert_eq!(f.compose(&zpow(-1)).unwrap(), zpow(-2));
        let g = rf(&[3, 1], &[2, 5]);
        assert_eq!(RationalFunction::var().compose(&g).unwrap(), g);
        assert_eq!(g.compose(&RationalFunction::var()).unwrap(), g);
    }

    #[test]
    fn compose_hits_pole() {
        // 1/z composed with the constant 0
        assert_eq!(
            zpow(-1).compose(&RationalFunction::zero()),
            Err(Error::UndefinedComposition)
        );
    }

    #[test]
    fn derivatives() {
        assert_eq!(zpow(5).derivative(), zpow(4).scale(&GaussianRational::from_int(5)));
        assert_eq!(zpow(-1).derivative(), -&zpow(-2));
        // 1/(a + b z)^k -> -k b/(a + b z)^(k+1), with a = 2, b = 3, k = 4
        let base = RationalFunction::from_poly(p(&[2, 3]));
        let f = base.powi(-4).unwrap();
        let expected = base.powi(-5).unwrap().scale(&GaussianRational::from_int(-12));
        assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn pole_orders() {
        assert_eq!(zpow(-1).pole_order_at_zero(), 1);
        assert_eq!(zpow(-3).pole_order_at_zero(), 3);
        assert_eq!(zpow(2).pole_order_at_zero(), 0);
    }

    #[test]
    fn laurent_expansion() {
        let f = &zpow(-3) + &zpow(1);
        let t = f.laurent_terms().unwrap();
        assert_eq!(t.keys().copied().collect::<Vec<_>>(), vec![-3, 1]);
        assert!(rf(&[1], &[1, 1]).laurent_terms().is_none());
    }

    #[test]
    fn printing() {
        assert_eq!(zpow(-3).to_string(), "z^-3");
        assert_eq!(zpow(-1).scale(&GaussianRational::from_int(-2)).to_string(), "-2*z^-1");
        assert_eq!(rf(&[1, 1], &[0, 0, 0, 1]).to_string(), "(1 + z)/z^3");
        assert_eq!(rf(&[1], &[1, 1]).to_string(), "(1)/(1 + z)");
    }
}
