use num_traits::{One, Zero};

use super::structure::{Matrix, SpanSolver};
use super::{jacobi_check, odd_derived_span, solve_global_fields, structure_constants, StructureConstants};
use super::SuperalgebraBasis;
use crate::derivation::{pullback_invert, SuperDerivation};
use crate::geometry::{gr_manifold, morphism_check_global, FamilyRegistry, GlobalVerdict, Mat2, SuperManifoldData};
use crate::grassmann::{ChartId, PullbackData, SuperFunction};
use crate::scalar::{linalg, GaussianRational};
use crate::{Error, Result};

/// Even fields whose underlying vector field on the base vanishes, as
/// coefficient vectors over the even basis.
pub fn ker_psi(b: &SuperalgebraBasis) -> Matrix {
    let reduced: Vec<_> = b.even_basis.iter().map(|g| g.chart0.even_coeff().reduced()).collect();
    let top = reduced
        .iter()
        .filter_map(|r| r.num().degree())
        .max()
        .unwrap_or(0);
    let rows: Matrix = (0..=top)
        .map(|e| reduced.iter().map(|r| r.num().coeff(e)).collect())
        .collect();
    linalg::kernel_basis(&rows, b.dim_even())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrComparison {
    /// (even, odd) dimensions of `Vec(M)`.
    pub dims: (usize, usize),
    /// (even, odd) dimensions of `Vec(gr M)`.
    pub gr_dims: (usize, usize),
    pub inequality_holds: bool,
    pub split: bool,
}

pub fn gr_comparison(m: &SuperManifoldData, cap: Option<u32>) -> Result<GrComparison> {
    let b = solve_global_fields(m, cap)?;
    let g = solve_global_fields(&gr_manifold(m), cap)?;
    let dims = (b.dim_even(), b.dim_odd());
    let gr_dims = (g.dim_even(), g.dim_odd());
    Ok(GrComparison {
        dims,
        gr_dims,
        inequality_holds: b.dim() <= g.dim(),
        split: dims == gr_dims && m.is_split(),
    })
}

/// Matrix of `X ↦ (p⁻¹)* ∘ X ∘ p*` in the basis.
pub fn conjugation_action(b: &SuperalgebraBasis, p: &PullbackData) -> Result<Matrix> {
    if morphism_check_global(&b.manifold, p)? != GlobalVerdict::Global {
        return Err(Error::NotGlobal);
    }
    let p_inv = pullback_invert(p)?;
    let solver = SpanSolver::new(b);
    let n = b.manifold.odd_dim();
    let cols = b
        .elements()
        .map(|g| {
            let moved = SuperDerivation::from_coordinate_values(ChartId::Zero, n, |u| {
                p_inv.substitute(&g.chart0.apply(&p.substitute(u)?)?)
            })?;
            solver.express(&moved).ok_or(Error::NotInSpan)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(transpose(&cols, b.dim()))
}

fn transpose(cols: &[Vec<GaussianRational>], rows: usize) -> Matrix {
    (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
}

/// The `t`-linear coefficient of `conjugation_action(exp(tX))` for an even
/// global field `x` whose iterates vanish on the coordinates, by exact
/// interpolation in `t` at integer nodes plus one check node.
pub fn flow_conjugation_tangent(b: &SuperalgebraBasis, x: &SuperDerivation) -> Result<Matrix> {
    let n = b.manifold.odd_dim();
    let (_, order) = x.exp_coordinatewise(&GaussianRational::one())?;
    let z_degree = b
        .elements()
        .map(|g| &g.chart0)
        .chain(std::iter::once(x))
        .flat_map(|d| d.slots().flat_map(|f| f.terms().map(|(_, c)| c.num().degree().unwrap_or(0))).collect::<Vec<_>>())
        .max()
        .unwrap_or(0) as usize;
    // conjugated coefficients are polynomials in t; this bounds their degree
    let bound = 2 * (order + 1) * (z_degree + n + 2);
    let nodes: Vec<GaussianRational> = (0..=bound as i64).map(GaussianRational::from_int).collect();
    let samples: Vec<Matrix> = (0..=bound as i64 + 1)
        .map(|t| conjugation_action(b, &x.exp_coordinatewise(&GaussianRational::from_int(t))?.0))
        .collect::<Result<_>>()?;

    let check = GaussianRational::from_int(bound as i64 + 1);
    let at_check: Vec<GaussianRational> = (0..nodes.len())
        .map(|i| {
            let mut acc = GaussianRational::one();
            for (j, xj) in nodes.iter().enumerate() {
                if i != j {
                    acc = &acc * &(&(&check - xj) / &(&nodes[i] - xj));
                }
            }
            acc
        })
        .collect();
    // derivative at 0 of the i-th Lagrange basis polynomial
    let slope: Vec<GaussianRational> = (0..nodes.len())
        .map(|i| {
            let mut sum = GaussianRational::zero();
            for (m, xm) in nodes.iter().enumerate() {
                if m == i {
                    continue;
                }
                let mut term = &GaussianRational::one() / &(&nodes[i] - xm);
                for (j, xj) in nodes.iter().enumerate() {
                    if j != i && j != m {
                        term = &term * &(&(-xj) / &(&nodes[i] - xj));
                    }
                }
                sum = &sum + &term;
            }
            sum
        })
        .collect();

    let d = b.dim();
    let mut out = vec![vec![GaussianRational::zero(); d]; d];
    for r in 0..d {
        for c in 0..d {
            let mut predicted = GaussianRational::zero();
            for i in 0..nodes.len() {
                let y = &samples[i][r][c];
                if y.is_zero() {
                    continue;
                }
                out[r][c] = &out[r][c] + &(y * &slope[i]);
                predicted = &predicted + &(y * &at_check[i]);
            }
            if predicted != samples[nodes.len()][r][c] {
                return Err(Error::DegreeBoundExceeded(bound));
            }
        }
    }
    Ok(out)
}

/// Finite witnesses for the adjoint action of automorphisms on `Vec(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationCheck {
    /// Which automorphisms were used.
    pub witnesses: String,
    pub parity_preserving: bool,
    pub multiplicative: bool,
    pub brackets_preserved: bool,
}

impl ConjugationCheck {
    pub fn passed(&self) -> bool {
        self.parity_preserving && self.multiplicative && self.brackets_preserved
    }
}

fn witness_pair(m: &SuperManifoldData) -> Result<(String, PullbackData, PullbackData)> {
    let g = GaussianRational::from_int;
    if let Some(fam) = FamilyRegistry::standard().detect(m) {
        let a: Mat2 = [[g(1), g(1)], [g(0), g(1)]];
        let b: Mat2 = [[g(2), g(1)], [g(3), g(2)]];
        return Ok((
            format!("{} lifts of [[1,1],[0,1]] and [[2,1],[3,2]]", fam.name()),
            fam.mobius_lift(m, &a, None)?,
            fam.mobius_lift(m, &b, None)?,
        ));
    }
    let n = m.odd_dim();
    let scaling = |c: i64| {
        let z0 = ChartId::Zero;
        PullbackData::new(
            z0,
            z0,
            SuperFunction::even_coordinate(z0, n),
            (0..n).map(|j| SuperFunction::odd_coordinate(z0, n, j).scale(&g(c))).collect(),
        )
    };
    Ok(("odd scalings by 2 and 3".into(), scaling(2)?, scaling(3)?))
}

/// `[Σ_a x_a b_a, Σ_b y_b b_b]` through the table.
fn bracket_vectors(s: &StructureConstants, x: &[GaussianRational], y: &[GaussianRational]) -> Vec<GaussianRational> {
    let d = s.dim();
    let mut out = vec![GaussianRational::zero(); d];
    for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let c = xa * yb;
            for (o, t) in out.iter_mut().zip(&s.table[a][b]) {
                if !t.is_zero() {
                    *o = &*o + &(&c * t);
                }
            }
        }
    }
    out
}

pub(crate) fn check_conjugation(s: &StructureConstants) -> Result<ConjugationCheck> {
    let b = &s.basis;
    let (witnesses, p, q) = witness_pair(&b.manifold)?;
    let cp = conjugation_action(b, &p)?;
    let cq = conjugation_action(b, &q)?;
    let cpq = conjugation_action(b, &p.compose(&q)?)?;
    let d = b.dim();
    let parity_preserving = [&cp, &cq]
        .iter()
        .all(|c| (0..d).all(|r| (0..d).all(|k| b.parity(r) == b.parity(k) || c[r][k].is_zero())));
    let multiplicative = linalg::mat_mul(&cp, &cq) == cpq;
    let column = |c: &Matrix, i: usize| -> Vec<GaussianRational> { (0..d).map(|r| c[r][i].clone()).collect() };
    let brackets_preserved = (0..d).all(|i| {
        (0..d).all(|j| {
            let lhs = linalg::mat_vec(&cp, &s.table[i][j]);
            lhs == bracket_vectors(s, &column(&cp, i), &column(&cp, j))
        })
    });
    Ok(ConjugationCheck {
        witnesses,
        parity_preserving,
        multiplicative,
        brackets_preserved,
    })
}

/// Everything the infinitesimal half of the Harish-Chandra pair provides.
#[derive(Clone, Debug)]
pub struct HcPairReport {
    pub constants: StructureConstants,
    pub jacobi: bool,
    pub derived_span_dim: usize,
    /// `[Vec₁, Vec₁] = 0`.
    pub split_supergroup: bool,
    pub ker_psi_dim: usize,
    /// Whether `Lie(ker Ψ)` commutes with the sl₂ image, when a family applies.
    pub ker_psi_commutes_with_sl2: Option<bool>,
    pub gr: GrComparison,
    pub conjugation: ConjugationCheck,
}

impl HcPairReport {
    pub fn basis(&self) -> &SuperalgebraBasis {
        &self.constants.basis
    }
}

fn sl2_commutation(b: &SuperalgebraBasis, kernel: &Matrix) -> Result<Option<bool>> {
    let registry = FamilyRegistry::standard();
    let Some(fam) = registry.detect(&b.manifold) else {
        return Ok(None);
    };
    let g = GaussianRational::from_int;
    let sl2: [Mat2; 3] = [
        [[g(1), g(0)], [g(0), g(-1)]],
        [[g(0), g(1)], [g(0), g(0)]],
        [[g(0), g(0)], [g(1), g(0)]],
    ];
    let n = b.manifold.odd_dim();
    for v in kernel {
        let mut k = SuperDerivation::zero(ChartId::Zero, n);
        for (c, e) in v.iter().zip(&b.even_basis) {
            if !c.is_zero() {
                k = &k + &e.chart0.scale(c);
            }
        }
        for e in &sl2 {
            let sigma = fam.sl2_embedding(&b.manifold, e, &g(0))?;
            if !k.bracket(&sigma)?.is_zero() {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

pub fn hc_pair_report(m: &SuperManifoldData, cap: Option<u32>) -> Result<HcPairReport> {
    let b = solve_global_fields(m, cap)?;
    let constants = structure_constants(&b)?;
    let jacobi = jacobi_check(&constants);
    let derived_span_dim = odd_derived_span(&constants).0;
    let kernel = ker_psi(&b);
    let ker_psi_commutes_with_sl2 = sl2_commutation(&b, &kernel)?;
    let gr = gr_comparison(m, cap)?;
    let conjugation = check_conjugation(&constants)?;
    Ok(HcPairReport {
        jacobi,
        derived_span_dim,
        split_supergroup: derived_span_dim == 0,
        ker_psi_dim: kernel.len(),
        ker_psi_commutes_with_sl2,
        gr,
        conjugation,
        constants,
    })
}
