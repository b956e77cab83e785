//! Splitting a chart morphism into its degree-preserving part and the
//! exponential of an even nilpotent vector field.

use super::SuperDerivation;
use crate::grassmann::{PullbackData, SuperFunction};
use crate::scalar::{linalg, GaussianRational, Polynomial, RationalFunction};
use crate::{Error, Result};

/// `z ↦ (αz + β)/(γz + δ)` with `αδ - βγ ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusMap {
    pub alpha: GaussianRational,
    pub beta: GaussianRational,
    pub gamma: GaussianRational,
    pub delta: GaussianRational,
}

impl MobiusMap {
    pub fn from_rational_function(g: &RationalFunction) -> Result<Self> {
        let (num, den) = (g.num(), g.den());
        if num.degree().unwrap_or(0) > 1 || den.degree().unwrap_or(0) > 1 {
            return Err(Error::UnsupportedReducedMap(g.to_string()));
        }
        let m = MobiusMap {
            alpha: num.coeff(1),
            beta: num.coeff(0),
            gamma: den.coeff(1),
            delta: den.coeff(0),
        };
        if m.det() == GaussianRational::from_int(0) {
            return Err(Error::UnsupportedReducedMap(g.to_string()));
        }
        Ok(m)
    }

    pub fn det(&self) -> GaussianRational {
        &(&self.alpha * &self.delta) - &(&self.beta * &self.gamma)
    }

    pub fn inverse(&self) -> Self {
        MobiusMap {
            alpha: self.delta.clone(),
            beta: -&self.beta,
            gamma: -&self.gamma,
            delta: self.alpha.clone(),
        }
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let lin = |a: &GaussianRational, b: &GaussianRational| {
            Polynomial::from_terms([(1, a.clone()), (0, b.clone())])
        };
        RationalFunction::new(lin(&self.alpha, &self.beta), lin(&self.gamma, &self.delta))
            .expect("nonzero denominator")
    }
}

/// `p = exp(Y) ∘ φ₀`, with `Y` an even field of filtration level ≥ 2 on the
/// target chart and `φ₀` degree preserving.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RothsteinParts {
    pub degree_zero: PullbackData,
    pub nilpotent_generator: SuperDerivation,
}

impl RothsteinParts {
    /// Rebuilds the original pullback.
    pub fn recombine(&self) -> Result<PullbackData> {
        let one = GaussianRational::from_int(1);
        self.nilpotent_generator.exp_nilpotent(&one)?.compose(&self.degree_zero)
    }
}

/// Inverse of a degree-preserving pullback with Möbius reduced map.
pub fn invert_degree_preserving(phi0: &PullbackData) -> Result<PullbackData> {
    let n = phi0.source_odd_dim();
    if phi0.target_odd_dim() != n {
        return Err(Error::NotInvertible(format!(
            "odd dimensions {} and {}",
            n,
            phi0.target_odd_dim()
        )));
    }
    let m = MobiusMap::from_rational_function(&phi0.reduced_map())?;
    let m_inv = m.inverse().to_rational_function();
    let b_inv = linalg::inverse(&phi0.odd_linear_matrix())
        .ok_or_else(|| Error::NotInvertible("odd linear part is singular".into()))?;

    let chart = phi0.target_chart();
    let even = SuperFunction::from_rf(chart, n, m_inv.clone());
    let odd = b_inv
        .iter()
        .map(|row| {
            let mut acc = SuperFunction::zero(chart, n);
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let eta = SuperFunction::odd_coordinate(chart, n, j);
                    acc = &acc + &eta.mul_rf(&c.compose(&m_inv)?);
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    PullbackData::new(chart, phi0.source_chart(), even, odd)
}

/// Writes `p` as `exp(Y) ∘ φ₀`.
pub fn rothstein_decompose(p: &PullbackData) -> Result<RothsteinParts> {
    let phi0 = p.degree_preserving_part();
    let psi = invert_degree_preserving(&phi0)?;
    // q = p ∘ φ₀⁻¹ is an automorphism of the target chart equal to exp(Y)
    let q = p.compose(&psi)?;
    let (chart, n) = (q.source_chart(), q.source_odd_dim());
    let one = GaussianRational::from_int(1);

    let mut y = SuperDerivation::zero(chart, n);
    // each pass fixes one even excess degree, of which there are at most n/2
    for _ in 0..=n / 2 + 1 {
        let e = y.exp_nilpotent(&one)?;
        let r_even = q.even_image() - e.even_image();
        let r_odd: Vec<SuperFunction> = q
            .odd_images()
            .iter()
            .zip(e.odd_images())
            .map(|(a, b)| a - b)
            .collect();
        let excess = std::iter::once(r_even.min_degree())
            .chain(r_odd.iter().map(|f| f.min_degree().map(|d| d.saturating_sub(1))))
            .flatten()
            .min();
        let Some(d) = excess else {
            return Ok(RothsteinParts {
                degree_zero: phi0,
                nilpotent_generator: y,
            });
        };
        debug_assert!(d >= 2, "degree-preserving part was not removed");
        let step = SuperDerivation::new(
            r_even.degree_component(d),
            r_odd.iter().map(|f| f.degree_component(d + 1)).collect(),
        )?;
        y = &y + &step;
    }
    unreachable!("nilpotent field did not converge")
}

/// Inverse of an invertible chart morphism, as a pullback.
pub fn pullback_invert(p: &PullbackData) -> Result<PullbackData> {
    let parts = rothstein_decompose(p)?;
    let psi = invert_degree_preserving(&parts.degree_zero)?;
    let back = parts
        .nilpotent_generator
        .exp_nilpotent(&GaussianRational::from_int(-1))?;
    psi.compose(&back)
}
