//! Two-chart supermanifolds over the projective line.

mod families;

use crate::derivation::{pullback_invert, MobiusMap, SuperDerivation};
use crate::grassmann::{ChartId, Parity, PullbackData};
use crate::scalar::{linalg, GaussianRational, Polynomial, RationalFunction};
use crate::{Error, Result};

pub use families::{
    lift_tangent, mat2, mat2_det, mat2_mul, mat2_trace, Ex1Family, Ex2Family, Ex3Family, FamilyRegistry,
    LiftFamily, Mat2,
};
pub(crate) use families::lift_is_global;

/// A (1|n) supermanifold glued from the standard charts `z` and `w = 1/z`,
/// or the single-chart odd point C^{0|n} when `transition` is `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperManifoldData {
    name: String,
    odd_dim: usize,
    transition: Option<PullbackData>,
}

impl SuperManifoldData {
    pub fn odd_point(name: impl Into<String>, odd_dim: usize) -> Self {
        SuperManifoldData {
            name: name.into(),
            odd_dim,
            transition: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    /// Chart-1 coordinates written in chart-0 coordinates.
    pub fn transition(&self) -> Option<&PullbackData> {
        self.transition.as_ref()
    }

    pub fn is_odd_point(&self) -> bool {
        self.transition.is_none()
    }

    pub fn is_split(&self) -> bool {
        self.transition.as_ref().map_or(true, |t| t.is_degree_preserving())
    }

    pub fn with_name(&self, name: impl Into<String>) -> Self {
        SuperManifoldData {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Transition `χ` and its inverse. Fails on the odd point.
    pub(crate) fn transition_pair(&self) -> Result<(PullbackData, PullbackData)> {
        let chi = self
            .transition
            .clone()
            .ok_or_else(|| Error::Format("single-chart manifold has no transition".into()))?;
        let inv = pullback_invert(&chi)?;
        Ok((chi, inv))
    }
}

/// Validates transition data and builds the manifold.
pub fn manifold_from_transition(
    name: impl Into<String>,
    odd_dim: usize,
    transition: PullbackData,
) -> Result<SuperManifoldData> {
    if transition.source_chart() != ChartId::Zero
        || transition.target_chart() != ChartId::One
        || transition.source_odd_dim() != odd_dim
        || transition.target_odd_dim() != odd_dim
    {
        return Err(Error::ChartMismatch(format!(
            "transition must map chart 1 (n={odd_dim}) into chart 0"
        )));
    }
    let inv_z = RationalFunction::laurent_monomial(GaussianRational::from_int(1), -1);
    if transition.reduced_map() != inv_z {
        return Err(Error::BadReducedMap(transition.reduced_map().to_string()));
    }
    for c in transition.coefficients() {
        if !c.is_laurent() {
            return Err(Error::NotLaurent(c.to_string()));
        }
    }
    if linalg::determinant(&transition.odd_linear_matrix()).is_zero() {
        return Err(Error::DegenerateOddPart);
    }
    Ok(SuperManifoldData {
        name: name.into(),
        odd_dim,
        transition: Some(transition),
    })
}

/// The split model: the transition reduced to its degree-preserving part.
pub fn gr_manifold(m: &SuperManifoldData) -> SuperManifoldData {
    SuperManifoldData {
        name: format!("gr({})", m.name),
        odd_dim: m.odd_dim,
        transition: m.transition.as_ref().map(|t| t.degree_preserving_part()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GlobalVerdict {
    Global,
    Chart0Only,
}

impl GlobalVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GlobalVerdict::Global => "global",
            GlobalVerdict::Chart0Only => "chart0_only",
        }
    }
}

/// The four chart representations of a chart-0 self pullback `p`, indexed
/// `[source][target]`.
pub fn chart_representations(m: &SuperManifoldData, p: &PullbackData) -> Result<[[PullbackData; 2]; 2]> {
    let (chi, chi_inv) = m.transition_pair()?;
    let p01 = chi.compose(p)?;
    let p10 = p.compose(&chi_inv)?;
    let p11 = p01.compose(&chi_inv)?;
    Ok([[p.clone(), p01], [p10, p11]])
}

/// Strips from `d` every root it shares with `allowed`; a constant remainder
/// means all poles of `d` lie in the allowed locus.
fn poles_within(d: &Polynomial, allowed: &Polynomial) -> bool {
    let mut rest = d.clone();
    loop {
        if rest.is_constant() {
            return true;
        }
        let g = Polynomial::gcd(&rest, allowed);
        if g.is_constant() {
            return false;
        }
        rest = rest.div_exact(&g);
    }
}

/// Whether the chart-0 pullback `p` extends to a morphism of all of `m`.
///
/// Each chart representation may only have poles where its reduced map leaves
/// the target chart.
pub fn morphism_check_global(m: &SuperManifoldData, p: &PullbackData) -> Result<GlobalVerdict> {
    if p.source_chart() != ChartId::Zero || p.target_chart() != ChartId::Zero {
        return Err(Error::ChartMismatch("expected a chart-0 self pullback".into()));
    }
    MobiusMap::from_rational_function(&p.reduced_map())?;
    let reps: Vec<PullbackData> = match m.transition {
        Some(_) => chart_representations(m, p)?.into_iter().flatten().collect(),
        // no even coordinate: z stays fixed and the odd images are constant
        None => {
            let ok = *p.even_image() == crate::grassmann::SuperFunction::even_coordinate(ChartId::Zero, m.odd_dim)
                && p.odd_images().iter().all(|f| f.terms().all(|(_, c)| c.is_constant()));
            return Ok(if ok { GlobalVerdict::Global } else { GlobalVerdict::Chart0Only });
        }
    };
    for rep in &reps {
        let allowed = rep.reduced_map().den().clone();
        if !rep.coefficients().all(|c| poles_within(c.den(), &allowed)) {
            return Ok(GlobalVerdict::Chart0Only);
        }
    }
    Ok(GlobalVerdict::Global)
}

/// Flow of an even nilpotent field: `exp(t X)`.
pub fn nilpotent_flow(m: &SuperManifoldData, x: &SuperDerivation, t: &GaussianRational) -> Result<PullbackData> {
    if x.odd_dim() != m.odd_dim() {
        return Err(Error::ChartMismatch(format!(
            "field has odd dimension {}, manifold {}",
            x.odd_dim(),
            m.odd_dim()
        )));
    }
    x.exp_nilpotent(t)
}

/// A vector field given on both charts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlobalVectorField {
    pub chart0: SuperDerivation,
    /// `None` on the single-chart odd point.
    pub chart1: Option<SuperDerivation>,
    pub parity: Parity,
}

impl GlobalVectorField {
    /// `χ* ∘ X₁ = X₀ ∘ χ*` on every chart-1 coordinate, and polynomial coefficients.
    pub fn check_compatible(&self, m: &SuperManifoldData) -> Result<bool> {
        let polys = |d: &SuperDerivation| d.slots().all(|f| f.terms().all(|(_, c)| c.is_polynomial()));
        if !polys(&self.chart0) {
            return Ok(false);
        }
        let (Some(chi), Some(x1)) = (m.transition(), self.chart1.as_ref()) else {
            return Ok(m.is_odd_point() && self.chart1.is_none());
        };
        if !polys(x1) {
            return Ok(false);
        }
        let n = m.odd_dim();
        let coords = std::iter::once(crate::grassmann::SuperFunction::even_coordinate(ChartId::One, n))
            .chain((0..n).map(|j| crate::grassmann::SuperFunction::odd_coordinate(ChartId::One, n, j)));
        for u in coords {
            let lhs = chi.substitute(&x1.apply(&u)?)?;
            let rhs = self.chart0.apply(&chi.substitute(&u)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Builds the chart-1 form of a chart-0 field by transport through `χ⁻¹`.
    pub fn from_chart0(m: &SuperManifoldData, x0: SuperDerivation) -> Result<Self> {
        let parity = x0.pure_parity()?;
        let chart1 = match m.transition() {
            None => None,
            Some(_) => {
                let (chi, chi_inv) = m.transition_pair()?;
                let x1 = SuperDerivation::from_coordinate_values(ChartId::One, m.odd_dim(), |u| {
                    chi_inv.substitute(&x0.apply(&chi.substitute(u)?)?)
                })?;
                Some(x1)
            }
        };
        Ok(GlobalVectorField { chart0: x0, chart1, parity })
    }
}
