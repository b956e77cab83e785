//! The Lie superalgebra `Vec(M)` of global vector fields and its structure.

mod report;
mod structure;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;

use crate::derivation::SuperDerivation;
use crate::geometry::{GlobalVectorField, SuperManifoldData};
use crate::grassmann::{ChartId, OddMultiIndex, Parity, SuperFunction};
use crate::scalar::{linalg, GaussianRational, Polynomial, RationalFunction};
use crate::{Error, Result};

pub use report::{
    conjugation_action, flow_conjugation_tangent, gr_comparison, hc_pair_report, ker_psi, ConjugationCheck,
    GrComparison, HcPairReport,
};
pub use structure::{
    adjoint_matrix, ad_matrix_full, express, jacobi_check, odd_derived_span, structure_constants,
    weight_decomposition, StructureConstants,
};

/// Ordered basis of `Vec(M)`, even part first.
#[derive(Clone, Debug)]
pub struct SuperalgebraBasis {
    pub manifold: SuperManifoldData,
    pub even_basis: Vec<GlobalVectorField>,
    pub odd_basis: Vec<GlobalVectorField>,
    pub cap_used: u32,
    /// Largest power of `z` needed to clear denominators in the equations.
    pub clearing_exponent: u32,
}

impl SuperalgebraBasis {
    pub fn dim_even(&self) -> usize {
        self.even_basis.len()
    }

    pub fn dim_odd(&self) -> usize {
        self.odd_basis.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_even() + self.dim_odd()
    }

    /// Even elements, then odd elements.
    pub fn elements(&self) -> impl Iterator<Item = &GlobalVectorField> {
        self.even_basis.iter().chain(&self.odd_basis)
    }

    pub fn element(&self, i: usize) -> Result<&GlobalVectorField> {
        self.elements()
            .nth(i)
            .ok_or(Error::IndexOutOfRange { index: i, len: self.dim() })
    }

    pub fn parity(&self, i: usize) -> Parity {
        if i < self.dim_even() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One unknown: the coefficient of `z^exp θ^idx` in slot `slot` on `chart`.
#[derive(Clone, Copy, Debug)]
struct Column {
    chart: ChartId,
    slot: usize,
    idx: OddMultiIndex,
    exp: u32,
}

fn columns(n: usize, parity: Parity, cap: u32, odd_point: bool) -> Vec<Column> {
    let charts: &[ChartId] = if odd_point { &[ChartId::Zero] } else { &[ChartId::One, ChartId::Zero] };
    let top = if odd_point { 0 } else { cap };
    let first_slot = usize::from(odd_point);
    let mut out = Vec::new();
    for &chart in charts {
        for slot in first_slot..=n {
            let want = if slot == 0 { parity } else { parity.flip() };
            for idx in OddMultiIndex::all(n).into_iter().filter(|i| i.parity() == want) {
                out.extend((0..=top).map(|exp| Column { chart, slot, idx, exp }));
            }
        }
    }
    out
}

fn column_field(n: usize, c: &Column) -> SuperDerivation {
    let z = RationalFunction::from_poly(Polynomial::monomial(GaussianRational::from_int(1), c.exp));
    let f = SuperFunction::monomial(c.chart, n, z, c.idx);
    if c.slot == 0 {
        SuperDerivation::along_even(f)
    } else {
        SuperDerivation::along_odd(c.slot - 1, f)
    }
}

/// Sum of the maximal pole orders at 0 over all transition images, plus 2.
pub fn default_cap(m: &SuperManifoldData) -> u32 {
    let Some(chi) = m.transition() else { return 0 };
    let images = std::iter::once(chi.even_image()).chain(chi.odd_images());
    2 + images
        .map(|f| f.terms().map(|(_, c)| c.pole_order_at_zero()).max().unwrap_or(0))
        .sum::<u32>()
}

struct RawSolution {
    even: Vec<GlobalVectorField>,
    odd: Vec<GlobalVectorField>,
    clearing_exponent: u32,
}

fn solve_parity(m: &SuperManifoldData, parity: Parity, cap: u32) -> Result<(Vec<GlobalVectorField>, u32)> {
    let n = m.odd_dim();
    let cols = columns(n, parity, cap, m.is_odd_point());
    let fields: Vec<SuperDerivation> = cols.iter().map(|c| column_field(n, c)).collect();

    let mut rows: BTreeMap<(usize, OddMultiIndex, i64), Vec<(usize, GaussianRational)>> = BTreeMap::new();
    let mut clearing = 0u32;
    if let Some(chi) = m.transition() {
        let coords: Vec<SuperFunction> = std::iter::once(SuperFunction::even_coordinate(ChartId::One, n))
            .chain((0..n).map(|j| SuperFunction::odd_coordinate(ChartId::One, n, j)))
            .collect();
        let pulled: Vec<SuperFunction> = coords.iter().map(|u| chi.substitute(u)).collect::<Result<_>>()?;
        for (ci, (col, x)) in cols.iter().zip(&fields).enumerate() {
            // χ*(X₁(u)) - X₀(χ*(u)) for every chart-1 coordinate u
            let contributions: Vec<(usize, SuperFunction)> = match col.chart {
                ChartId::One => vec![(col.slot, chi.substitute(&x.apply(&coords[col.slot])?)?)],
                ChartId::Zero => pulled
                    .iter()
                    .enumerate()
                    .map(|(u, f)| Ok((u, -&x.apply(f)?)))
                    .collect::<Result<_>>()?,
            };
            for (u, f) in contributions {
                for (idx, c) in f.terms() {
                    let laurent = c.laurent_terms().ok_or_else(|| Error::NotLaurent(c.to_string()))?;
                    for (e, v) in laurent {
                        if e < 0 {
                            clearing = clearing.max((-e) as u32);
                        }
                        rows.entry((u, idx, e)).or_default().push((ci, v));
                    }
                }
            }
        }
    }
    let dense: Vec<Vec<GaussianRational>> = rows
        .into_values()
        .map(|entries| {
            let mut r = vec![GaussianRational::zero(); cols.len()];
            for (c, v) in entries {
                r[c] = &r[c] + &v;
            }
            r
        })
        .collect();
    let kernel = linalg::kernel_basis(&dense, cols.len());

    let chart0_start = cols.iter().position(|c| c.chart == ChartId::Zero).unwrap_or(cols.len());
    let mut out: Vec<(Vec<GaussianRational>, GlobalVectorField)> = Vec::with_capacity(kernel.len());
    for v in kernel {
        let build = |chart: ChartId| -> Result<SuperDerivation> {
            let mut acc = SuperDerivation::zero(chart, n);
            for ((c, x), coef) in cols.iter().zip(&fields).zip(&v) {
                if c.chart == chart && !coef.is_zero() {
                    acc = &acc + &x.scale(coef);
                }
            }
            Ok(acc)
        };
        let chart0 = build(ChartId::Zero)?;
        let chart1 = if m.is_odd_point() { None } else { Some(build(ChartId::One)?) };
        out.push((v[chart0_start..].to_vec(), GlobalVectorField { chart0, chart1, parity }));
    }
    let theta_degree = |g: &GlobalVectorField| g.chart0.even_coeff().min_degree().unwrap_or(n as u32 + 1);
    out.sort_by(|(va, a), (vb, b)| match theta_degree(a).cmp(&theta_degree(b)) {
        Ordering::Equal => vb.cmp(va),
        o => o,
    });
    Ok((out.into_iter().map(|(_, g)| g).collect(), clearing))
}

fn solve_raw(m: &SuperManifoldData, cap: u32) -> Result<RawSolution> {
    let (even, ne) = solve_parity(m, Parity::Even, cap)?;
    let (odd, no) = solve_parity(m, Parity::Odd, cap)?;
    Ok(RawSolution {
        even,
        odd,
        clearing_exponent: ne.max(no),
    })
}

/// Basis of global vector fields with coefficients of degree at most `cap`
/// (default: [`default_cap`]), checked against a re-solve at `cap + 2`.
pub fn solve_global_fields(m: &SuperManifoldData, cap: Option<u32>) -> Result<SuperalgebraBasis> {
    let cap = cap.unwrap_or_else(|| default_cap(m));
    let sol = solve_raw(m, cap)?;
    if !m.is_odd_point() {
        let next = solve_raw(m, cap + 2)?;
        let (dim, dim_next) = (sol.even.len() + sol.odd.len(), next.even.len() + next.odd.len());
        if dim != dim_next {
            return Err(Error::CapNotSaturated {
                cap: cap as usize,
                next_cap: cap as usize + 2,
                dim,
                dim_next,
            });
        }
    }
    Ok(SuperalgebraBasis {
        manifold: m.clone(),
        even_basis: sol.even,
        odd_basis: sol.odd,
        cap_used: cap,
        clearing_exponent: sol.clearing_exponent,
    })
}
