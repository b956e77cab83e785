//! Super vector fields on a chart.
//!
//! A derivation is stored by its values on the coordinates: `D(z)` and
//! `D(θ_j)`, so `D = D(z) ∂/∂z + Σ_j D(θ_j) ∂/∂θ_j` with left derivatives.

mod rothstein;

use std::fmt;

use crate::grassmann::{ChartId, Parity, PullbackData, SuperFunction};
use crate::scalar::{GaussianRational, RationalFunction};
use crate::{Error, Result};

pub use rothstein::{invert_degree_preserving, pullback_invert, rothstein_decompose, MobiusMap, RothsteinParts};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SuperDerivation {
    chart: ChartId,
    odd_dim: usize,
    even_coeff: SuperFunction,
    odd_coeffs: Vec<SuperFunction>,
}

impl SuperDerivation {
    pub fn new(even_coeff: SuperFunction, odd_coeffs: Vec<SuperFunction>) -> Result<Self> {
        let (chart, odd_dim) = (even_coeff.chart(), even_coeff.odd_dim());
        if odd_coeffs.len() != odd_dim {
            return Err(Error::ChartMismatch(format!(
                "{} odd coefficients for odd dimension {odd_dim}",
                odd_coeffs.len()
            )));
        }
        for c in &odd_coeffs {
            if c.chart() != chart || c.odd_dim() != odd_dim {
                return Err(Error::ChartMismatch(format!(
                    "coefficient on {}(n={})",
                    c.chart(),
                    c.odd_dim()
                )));
            }
        }
        Ok(SuperDerivation {
            chart,
            odd_dim,
            even_coeff,
            odd_coeffs,
        })
    }

    pub fn zero(chart: ChartId, odd_dim: usize) -> Self {
        SuperDerivation {
            chart,
            odd_dim,
            even_coeff: SuperFunction::zero(chart, odd_dim),
            odd_coeffs: vec![SuperFunction::zero(chart, odd_dim); odd_dim],
        }
    }

    /// `f ∂/∂z`.
    pub fn along_even(f: SuperFunction) -> Self {
        let mut d = SuperDerivation::zero(f.chart(), f.odd_dim());
        d.even_coeff = f;
        d
    }

    /// `f ∂/∂θ_j`.
    pub fn along_odd(j: usize, f: SuperFunction) -> Self {
        let mut d = SuperDerivation::zero(f.chart(), f.odd_dim());
        d.odd_coeffs[j] = f;
        d
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    /// `D(z)`.
    pub fn even_coeff(&self) -> &SuperFunction {
        &self.even_coeff
    }

    /// `D(θ_j)` for each `j`.
    pub fn odd_coeffs(&self) -> &[SuperFunction] {
        &self.odd_coeffs
    }

    /// Coefficient slots: index 0 is `∂/∂z`, index `j+1` is `∂/∂θ_j`.
    pub fn slots(&self) -> impl Iterator<Item = &SuperFunction> {
        std::iter::once(&self.even_coeff).chain(self.odd_coeffs.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.slots().all(|c| c.is_zero())
    }

    /// `None` for mixed parity. The zero derivation counts as even.
    pub fn parity(&self) -> Option<Parity> {
        [Parity::Even, Parity::Odd].into_iter().find(|&p| {
            self.even_coeff.is_pure(p) && self.odd_coeffs.iter().all(|c| c.is_pure(p.flip()))
        })
    }

    pub fn pure_parity(&self) -> Result<Parity> {
        self.parity().ok_or(Error::MixedParity)
    }

    fn check_chart(&self, chart: ChartId, odd_dim: usize) -> Result<()> {
        if self.chart != chart || self.odd_dim != odd_dim {
            return Err(Error::ChartMismatch(format!(
                "derivation on {}(n={}) applied on {chart}(n={odd_dim})",
                self.chart, self.odd_dim
            )));
        }
        Ok(())
    }

    /// `D(f) = D(z) ∂f/∂z + Σ_j D(θ_j) ∂f/∂θ_j`.
    pub fn apply(&self, f: &SuperFunction) -> Result<SuperFunction> {
        self.check_chart(f.chart(), f.odd_dim())?;
        let mut out = if self.even_coeff.is_zero() {
            SuperFunction::zero(self.chart, self.odd_dim)
        } else {
            &self.even_coeff * &f.partial_even()
        };
        for (j, c) in self.odd_coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = &out + &(c * &f.partial_odd(j));
            }
        }
        Ok(out)
    }

    /// Builds the derivation whose values on the coordinates are given by `f`.
    pub fn from_coordinate_values(
        chart: ChartId,
        odd_dim: usize,
        f: impl Fn(&SuperFunction) -> Result<SuperFunction>,
    ) -> Result<Self> {
        let even = f(&SuperFunction::even_coordinate(chart, odd_dim))?;
        let odd = (0..odd_dim)
            .map(|j| f(&SuperFunction::odd_coordinate(chart, odd_dim, j)))
            .collect::<Result<Vec<_>>>()?;
        SuperDerivation::new(even, odd)
    }

    /// Super bracket `XY - (-1)^{|X||Y|} YX`.
    pub fn bracket(&self, other: &SuperDerivation) -> Result<SuperDerivation> {
        other.check_chart(self.chart, self.odd_dim)?;
        let sign = self.pure_parity()?.sign_with(other.pure_parity()?);
        SuperDerivation::from_coordinate_values(self.chart, self.odd_dim, |u| {
            let xy = self.apply(&other.apply(u)?)?;
            let yx = other.apply(&self.apply(u)?)?;
            Ok(if sign < 0 { &xy + &yx } else { &xy - &yx })
        })
    }

    /// Largest `k` with `D(z) ∈ I^k` and `D(θ_j) ∈ I^(k+1)`; `n+1` for zero.
    pub fn filtration_level(&self) -> Result<i32> {
        self.pure_parity()?;
        let top = self.odd_dim as i32 + 1;
        let mut level = top;
        if let Some(d) = self.even_coeff.min_degree() {
            level = level.min(d as i32);
        }
        for c in &self.odd_coeffs {
            if let Some(d) = c.min_degree() {
                level = level.min(d as i32 - 1);
            }
        }
        Ok(level)
    }

    /// `exp(scale·Y)` as a pullback, for even `Y` of filtration level at least 2.
    pub fn exp_nilpotent(&self, scale: &GaussianRational) -> Result<PullbackData> {
        if self.pure_parity()? != Parity::Even {
            return Err(Error::NotNilpotent(self.filtration_level()?));
        }
        let level = self.filtration_level()?;
        if level < 2 {
            return Err(Error::NotNilpotent(level));
        }
        // iterates of a level-2 derivation die after ⌊n/2⌋+1 steps
        let (p, _) = self
            .exp_series(scale, self.odd_dim / 2 + 2)?
            .expect("exponential series of a level-2 derivation terminates");
        Ok(p)
    }

    /// `exp(scale·Y)` for an even `Y` whose iterates vanish on every
    /// coordinate, such as `∂/∂z` or `θ₂∂/∂θ₁`. Also returns the largest
    /// number of nonzero iterates, which bounds the degree of the images in
    /// `scale`.
    pub fn exp_coordinatewise(&self, scale: &GaussianRational) -> Result<(PullbackData, usize)> {
        const MAX_ITERATES: usize = 64;
        if self.pure_parity()? != Parity::Even {
            return Err(Error::NotNilpotent(self.filtration_level()?));
        }
        self.exp_series(scale, MAX_ITERATES)?
            .ok_or(Error::NotNilpotent(self.filtration_level()?))
    }

    /// Truncated exponential on the coordinates; `None` if some series has
    /// not terminated after `bound` terms.
    fn exp_series(&self, scale: &GaussianRational, bound: usize) -> Result<Option<(PullbackData, usize)>> {
        let y = self.scale(scale);
        let mut order = 0;
        let mut exp_of = |u: SuperFunction| -> Result<Option<SuperFunction>> {
            let mut acc = u.clone();
            let mut term = u;
            for k in 1..=bound {
                term = y.apply(&term)?.scale(&GaussianRational::ratio(1, k as i64));
                if term.is_zero() {
                    order = order.max(k - 1);
                    return Ok(Some(acc));
                }
                acc = &acc + &term;
            }
            Ok(None)
        };
        let (c, n) = (self.chart, self.odd_dim);
        let Some(even) = exp_of(SuperFunction::even_coordinate(c, n))? else {
            return Ok(None);
        };
        let mut odd = Vec::with_capacity(n);
        for j in 0..n {
            match exp_of(SuperFunction::odd_coordinate(c, n, j))? {
                Some(f) => odd.push(f),
                None => return Ok(None),
            }
        }
        Ok(Some((PullbackData::new(c, c, even, odd)?, order)))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map_slots(|f| f.scale(c))
    }

    /// Left multiplication by a function: `(g·D)(f) = g·D(f)`.
    pub fn left_mul(&self, g: &SuperFunction) -> Result<Self> {
        self.check_chart(g.chart(), g.odd_dim())?;
        Ok(self.map_slots(|f| g * f))
    }

    pub fn mul_rf(&self, g: &RationalFunction) -> Self {
        self.map_slots(|f| f.mul_rf(g))
    }

    pub fn try_add(&self, other: &SuperDerivation) -> Result<Self> {
        other.check_chart(self.chart, self.odd_dim)?;
        SuperDerivation::new(
            self.even_coeff.try_add(&other.even_coeff)?,
            self.odd_coeffs
                .iter()
                .zip(&other.odd_coeffs)
                .map(|(a, b)| a.try_add(b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn map_slots(&self, f: impl Fn(&SuperFunction) -> SuperFunction) -> Self {
        SuperDerivation {
            chart: self.chart,
            odd_dim: self.odd_dim,
            even_coeff: f(&self.even_coeff),
            odd_coeffs: self.odd_coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_map_slots(&self, f: impl Fn(&SuperFunction) -> Result<SuperFunction>) -> Result<Self> {
        SuperDerivation::new(
            f(&self.even_coeff)?,
            self.odd_coeffs.iter().map(f).collect::<Result<_>>()?,
        )
    }

    pub fn relabel(&self, chart: ChartId) -> Self {
        self.map_slots(|f| f.relabel(chart))
    }

    pub fn to_string_vars(&self, even: &str, odd_prefix: &str) -> String {
        let mut parts = Vec::new();
        for (slot, c) in self.slots().enumerate() {
            if c.is_zero() {
                continue;
            }
            let dname = if slot == 0 {
                format!("d/d{even}")
            } else {
                format!("d/d{odd_prefix}{slot}")
            };
            parts.push(format!("({})*{dname}", c.to_string_vars(even, odd_prefix)));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for SuperDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.to_string_vars(self.chart.even_var(), self.chart.odd_prefix())
        )
    }
}

impl std::ops::Add<&SuperDerivation> for &SuperDerivation {
    type Output = SuperDerivation;
    fn add(self, o: &SuperDerivation) -> SuperDerivation {
        self.try_add(o).expect("derivation chart mismatch")
    }
}

impl std::ops::Sub<&SuperDerivation> for &SuperDerivation {
    type Output = SuperDerivation;
    fn sub(self, o: &SuperDerivation) -> SuperDerivation {
        self + &o.scale(&GaussianRational::from_int(-1))
    }
}
