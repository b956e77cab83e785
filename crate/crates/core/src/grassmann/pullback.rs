use std::collections::HashMap;

use super::{ChartId, OddMultiIndex, Parity, SuperFunction};
use crate::scalar::{GaussianRational, RationalFunction};
use crate::{Error, Result};

/// A morphism between charts, recorded as its pullback: the images of the
/// target chart's coordinates, written in the source chart's coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PullbackData {
    source: ChartId,
    target: ChartId,
    even_image: SuperFunction,
    odd_images: Vec<SuperFunction>,
}

impl PullbackData {
    /// Validates parity and chart consistency of the coordinate images.
    pub fn new(
        source: ChartId,
        target: ChartId,
        even_image: SuperFunction,
        odd_images: Vec<SuperFunction>,
    ) -> Result<Self> {
        let n = even_image.odd_dim();
        if even_image.chart() != source {
            return Err(Error::ChartMismatch(format!(
                "even image lives on {}, source is {source}",
                even_image.chart()
            )));
        }
        if !even_image.is_pure(Parity::Even) {
            return Err(Error::InvalidPullback(format!(
                "even image {even_image} is not pure even"
            )));
        }
        for (j, img) in odd_images.iter().enumerate() {
            if img.chart() != source || img.odd_dim() != n {
                return Err(Error::ChartMismatch(format!(
                    "odd image {} lives on {}(n={})",
                    j + 1,
                    img.chart(),
                    img.odd_dim()
                )));
            }
            if !img.is_pure(Parity::Odd) {
                return Err(Error::InvalidPullback(format!(
                    "odd image {} = {img} is not pure odd",
                    j + 1
                )));
            }
        }
        Ok(PullbackData {
            source,
            target,
            even_image,
            odd_images,
        })
    }

    pub fn identity(chart: ChartId, odd_dim: usize) -> Self {
        PullbackData {
            source: chart,
            target: chart,
            even_image: SuperFunction::even_coordinate(chart, odd_dim),
            odd_images: (0..odd_dim)
                .map(|j| SuperFunction::odd_coordinate(chart, odd_dim, j))
                .collect(),
        }
    }

    pub fn source_chart(&self) -> ChartId {
        self.source
    }

    pub fn target_chart(&self) -> ChartId {
        self.target
    }

    pub fn even_image(&self) -> &SuperFunction {
        &self.even_image
    }

    pub fn odd_images(&self) -> &[SuperFunction] {
        &self.odd_images
    }

    /// Odd dimension of the source chart.
    pub fn source_odd_dim(&self) -> usize {
        self.even_image.odd_dim()
    }

    /// Odd dimension of the target chart.
    pub fn target_odd_dim(&self) -> usize {
        self.odd_images.len()
    }

    /// The reduced map `z ↦ g(z)` of the underlying manifolds.
    pub fn reduced_map(&self) -> RationalFunction {
        self.even_image.reduced()
    }

    /// Matrix `B` of the Z-degree-1 part: `φ*(θ_j)_1 = Σ_k B[j][k] θ_k`.
    pub fn odd_linear_matrix(&self) -> Vec<Vec<RationalFunction>> {
        let n = self.source_odd_dim();
        self.odd_images
            .iter()
            .map(|img| {
                (0..n)
                    .map(|k| img.coeff(OddMultiIndex::single(k)))
                    .collect()
            })
            .collect()
    }

    /// Keeps the Z-degree-preserving part: degree 0 of the even image and
    /// degree 1 of each odd image.
    pub fn degree_preserving_part(&self) -> Self {
        PullbackData {
            source: self.source,
            target: self.target,
            even_image: self.even_image.degree_component(0),
            odd_images: self.odd_images.iter().map(|f| f.degree_component(1)).collect(),
        }
    }

    pub fn is_degree_preserving(&self) -> bool {
        *self == self.degree_preserving_part()
    }

    /// Applies the pullback to a function on the target chart.
    ///
    /// Each coefficient is expanded around the reduced part of the even image;
    /// the Taylor series is finite because the nilpotent part of an even
    /// function satisfies `n^(⌊odd_dim/2⌋+1) = 0`.
    pub fn substitute(&self, f: &SuperFunction) -> Result<SuperFunction> {
        if f.chart() != self.target || f.odd_dim() != self.target_odd_dim() {
            return Err(Error::ChartMismatch(format!(
                "function on {}(n={}) but pullback targets {}(n={})",
                f.chart(),
                f.odd_dim(),
                self.target,
                self.target_odd_dim()
            )));
        }
        let (chart, n) = (self.source, self.source_odd_dim());
        let g_red = self.even_image.reduced();
        let g_nil = self.even_image.nilpotent_part();

        let max_power = (n / 2 + 1) as u32;
        let mut nil_powers = vec![SuperFunction::one(chart, n)];
        while !g_nil.is_zero() {
            let next = nil_powers.last().unwrap() * &g_nil;
            if next.is_zero() {
                break;
            }
            nil_powers.push(next);
            assert!(nil_powers.len() as u32 <= max_power, "nilpotency bound exceeded");
        }

        let mut odd_products: HashMap<OddMultiIndex, SuperFunction> = HashMap::new();
        let mut out = SuperFunction::zero(chart, n);
        for (idx, coeff) in f.terms() {
            let mut expanded = SuperFunction::zero(chart, n);
            let mut deriv = coeff.clone();
            let mut factorial = GaussianRational::from_int(1);
            for (k, power) in nil_powers.iter().enumerate() {
                if k > 0 {
                    deriv = deriv.derivative();
                    factorial = &factorial * &GaussianRational::from_int(k as i64);
                    if deriv.is_zero() {
                        break;
                    }
                }
                let at = deriv.compose(&g_red)?;
                let c = at.scale(&factorial.checked_inv().unwrap());
                expanded = &expanded + &power.mul_rf(&c);
            }
            let odd = odd_products
                .entry(idx)
                .or_insert_with(|| {
                    idx.indices().fold(SuperFunction::one(chart, n), |acc, j| {
                        &acc * &self.odd_images[j]
                    })
                })
                .clone();
            out = &out + &(&expanded * &odd);
        }
        Ok(out)
    }

    /// Pullback of the composite morphism `self ∘ other`: first `other`, then
    /// `self`, so `(self ∘ other)* = other* ∘ self*`.
    pub fn compose(&self, other: &PullbackData) -> Result<PullbackData> {
        if self.source != other.target || self.source_odd_dim() != other.target_odd_dim() {
            return Err(Error::ChartMismatch(format!(
                "cannot compose: {} -> {} after {} -> {}",
                self.source, self.target, other.source, other.target
            )));
        }
        Ok(PullbackData {
            source: other.source,
            target: self.target,
            even_image: other.substitute(&self.even_image)?,
            odd_images: self
                .odd_images
                .iter()
                .map(|f| other.substitute(f))
                .collect::<Result<_>>()?,
        })
    }

    /// Applies `f` to every coordinate image (used by conjugation formulas).
    pub fn map_images(&self, f: impl Fn(&SuperFunction) -> Result<SuperFunction>) -> Result<Self> {
        PullbackData::new(
            self.source,
            self.target,
            f(&self.even_image)?,
            self.odd_images.iter().map(&f).collect::<Result<_>>()?,
        )
    }

    /// All coefficient functions appearing in the images.
    pub fn coefficients(&self) -> impl Iterator<Item = &RationalFunction> {
        std::iter::once(&self.even_image)
            .chain(self.odd_images.iter())
            .flat_map(|f| f.terms().map(|(_, c)| c))
    }
}
