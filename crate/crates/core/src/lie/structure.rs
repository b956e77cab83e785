use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::SuperalgebraBasis;
use crate::derivation::SuperDerivation;
use crate::grassmann::{OddMultiIndex, Parity};
use crate::scalar::{linalg, GaussianRational, Polynomial};
use crate::{Error, Result};

type Key = (usize, OddMultiIndex, i64);
type Vector = Vec<GaussianRational>;
pub(crate) type Matrix = Vec<Vec<GaussianRational>>;

/// Coordinates of a chart-0 field keyed by (slot, odd index, power of z);
/// `None` if some coefficient is not a Laurent polynomial.
fn flatten(d: &SuperDerivation) -> Option<BTreeMap<Key, GaussianRational>> {
    let mut out = BTreeMap::new();
    for (slot, f) in d.slots().enumerate() {
        for (idx, c) in f.terms() {
            for (e, v) in c.laurent_terms()? {
                out.insert((slot, idx, e), v);
            }
        }
    }
    Some(out)
}

/// Flattened basis, reusable for many span membership queries.
pub(crate) struct SpanSolver {
    keys: Vec<Key>,
    basis: Vec<Vector>,
}

impl SpanSolver {
    pub(crate) fn new(b: &SuperalgebraBasis) -> Self {
        let flat: Vec<BTreeMap<Key, GaussianRational>> = b
            .elements()
            .map(|g| flatten(&g.chart0).expect("basis coefficients are polynomial"))
            .collect();
        let keys: Vec<Key> = flat
            .iter()
            .flat_map(|m| m.keys().copied())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let basis = flat
            .iter()
            .map(|m| keys.iter().map(|k| m.get(k).cloned().unwrap_or_default()).collect())
            .collect();
        SpanSolver { keys, basis }
    }

    pub(crate) fn express(&self, d: &SuperDerivation) -> Option<Vector> {
        let mut target = flatten(d)?;
        let v: Vector = self.keys.iter().map(|k| target.remove(k).unwrap_or_default()).collect();
        if !target.is_empty() {
            return None;
        }
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        linalg::express_in_span(&self.basis, &v)
    }
}

/// Coefficients of a chart-0 field in the basis, or `NotInSpan`.
pub fn express(b: &SuperalgebraBasis, d: &SuperDerivation) -> Result<Vector> {
    SpanSolver::new(b).express(d).ok_or(Error::NotInSpan)
}

/// `table[i][j]` holds the coefficients of `[b_i, b_j]`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub basis: SuperalgebraBasis,
    pub table: Vec<Vec<Vector>>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.table.len()
    }

    fn parity(&self, i: usize) -> Parity {
        self.basis.parity(i)
    }

    /// `[b_i, v]` for a coefficient vector `v`.
    fn bracket_with(&self, i: usize, v: &[GaussianRational]) -> Vector {
        let mut out = vec![GaussianRational::zero(); self.dim()];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, t) in out.iter_mut().zip(&self.table[i][k]) {
                if !t.is_zero() {
                    *o = &*o + &(c * t);
                }
            }
        }
        out
    }
}

pub fn structure_constants(b: &SuperalgebraBasis) -> Result<StructureConstants> {
    let solver = SpanSolver::new(b);
    let elems: Vec<&SuperDerivation> = b.elements().map(|g| &g.chart0).collect();
    let d = elems.len();
    let mut table = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in i..d {
            let br = elems[i].bracket(elems[j])?;
            let v = solver.express(&br).ok_or(Error::NotClosed(i, j))?;
            // graded antisymmetry fills the lower triangle
            let sign = b.parity(i).sign_with(b.parity(j));
            table[j][i] = if sign < 0 { v.clone() } else { v.iter().map(|x| -x).collect() };
            table[i][j] = v;
        }
    }
    Ok(StructureConstants { basis: b.clone(), table })
}

/// Graded antisymmetry, parity additivity and super-Jacobi on the table.
pub fn jacobi_check(s: &StructureConstants) -> bool {
    let d = s.dim();
    let sgn = |a: usize, b: usize| s.parity(a).sign_with(s.parity(b));
    for i in 0..d {
        for j in 0..d {
            let sign = sgn(i, j);
            for k in 0..d {
                let (x, y) = (&s.table[i][j][k], &s.table[j][i][k]);
                let ok = if sign < 0 { x == y } else { *x == -y };
                if !ok {
                    return false;
                }
                if !x.is_zero() && s.parity(k) != s.parity(i).add(s.parity(j)) {
                    return false;
                }
            }
        }
    }
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let terms = [
                    (sgn(x, z), x, s.table[y][z].clone()),
                    (sgn(y, x), y, s.table[z][x].clone()),
                    (sgn(z, y), z, s.table[x][y].clone()),
                ];
                let mut acc = vec![GaussianRational::zero(); d];
                for (sign, a, inner) in terms {
                    let t = s.bracket_with(a, &inner);
                    for (o, v) in acc.iter_mut().zip(&t) {
                        *o = if sign < 0 { &*o - v } else { &*o + v };
                    }
                }
                if acc.iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Matrix of `ad(b_i)` on the odd part, in the odd basis.
pub fn adjoint_matrix(s: &StructureConstants, i: usize) -> Result<Matrix> {
    if i >= s.dim() {
        return Err(Error::IndexOutOfRange { index: i, len: s.dim() });
    }
    if s.parity(i) == Parity::Odd {
        return Err(Error::OddCartan(i));
    }
    let de = s.basis.dim_even();
    let odd = de..s.dim();
    Ok(odd
        .clone()
        .map(|r| odd.clone().map(|c| s.table[i][c][r].clone()).collect())
        .collect())
}

/// Matrix of `ad(Σ x_i b_i)` on the whole algebra.
pub fn ad_matrix_full(s: &StructureConstants, x: &[GaussianRational]) -> Matrix {
    let d = s.dim();
    let mut m = vec![vec![GaussianRational::zero(); d]; d];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for c in 0..d {
            for r in 0..d {
                let t = &s.table[i][c][r];
                if !t.is_zero() {
                    m[r][c] = &m[r][c] + &(xi * t);
                }
            }
        }
    }
    m
}

/// Characteristic polynomial `det(λ - A)` by the Faddeev–LeVerrier recursion.
fn char_poly(a: &Matrix) -> Polynomial {
    let n = a.len();
    let mut coeffs = vec![GaussianRational::zero(); n + 1];
    coeffs[n] = GaussianRational::one();
    let mut m: Matrix = vec![vec![GaussianRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = linalg::mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &coeffs[n - k + 1];
        }
        m = next;
        let am = linalg::mat_mul(a, &m);
        let tr = (0..n).fold(GaussianRational::zero(), |acc, i| &acc + &am[i][i]);
        coeffs[n - k] = -&(&tr * &GaussianRational::ratio(1, k as i64));
    }
    Polynomial::from_terms(coeffs.into_iter().enumerate().map(|(e, c)| (e as u32, c)))
}

/// Best rational approximation with denominator at most `max_den`.
fn nearby_rational(x: f64, max_den: i64) -> BigRational {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(h1), BigInt::from(k1))
}

/// Exact roots of a square-free polynomial, found numerically and confirmed
/// by exact evaluation. Roots that do not round to a Gaussian rational are
/// dropped.
fn gaussian_roots(p: &Polynomial) -> Vec<GaussianRational> {
    let deg = p.degree().unwrap_or(0) as usize;
    if deg == 0 {
        return Vec::new();
    }
    let p = p.monic();
    if deg == 1 {
        return vec![-&p.coeff(0)];
    }
    let coeffs: Vec<Complex64> = (0..=deg)
        .map(|e| {
            let (re, im) = p.coeff(e as u32).to_f64_pair();
            Complex64::new(re, im)
        })
        .collect();
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|i| seed.powu(i as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::one();
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 {
            break;
        }
    }
    let mut found: Vec<GaussianRational> = Vec::new();
    for z in roots {
        let r = GaussianRational::new(nearby_rational(z.re, 10_000), nearby_rational(z.im, 10_000));
        if p.eval(&r).is_zero() && !found.contains(&r) {
            found.push(r);
        }
    }
    found
}

/// Eigenvalues of `ad(h)` on the odd part with multiplicities, descending.
pub fn weight_decomposition(s: &StructureConstants, h: &[GaussianRational]) -> Result<Vec<(GaussianRational, usize)>> {
    let de = s.basis.dim_even();
    if h.len() != s.dim() {
        return Err(Error::IndexOutOfRange { index: h.len(), len: s.dim() });
    }
    if let Some(i) = (de..s.dim()).find(|&i| !h[i].is_zero()) {
        return Err(Error::OddCartan(i));
    }
    let d_odd = s.dim() - de;
    let mut a: Matrix = vec![vec![GaussianRational::zero(); d_odd]; d_odd];
    for (i, hi) in h.iter().enumerate().take(de) {
        if hi.is_zero() {
            continue;
        }
        let m = adjoint_matrix(s, i)?;
        for r in 0..d_odd {
            for c in 0..d_odd {
                a[r][c] = &a[r][c] + &(hi * &m[r][c]);
            }
        }
    }
    if d_odd == 0 {
        return Ok(Vec::new());
    }
    let chi = char_poly(&a);
    let square_free = chi.div_exact(&Polynomial::gcd(&chi, &chi.derivative()));
    let roots = gaussian_roots(&square_free);
    if roots.len() != square_free.degree().unwrap_or(0) as usize {
        return Err(Error::NotDiagonalizable);
    }
    let mut out = Vec::new();
    for r in roots {
        let mult = chi.root_multiplicity(&r) as usize;
        let shifted: Matrix = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { x - &r } else { x.clone() })
                    .collect()
            })
            .collect();
        if d_odd - linalg::rank(&shifted, d_odd) != mult {
            return Err(Error::NotDiagonalizable);
        }
        out.push((r, mult));
    }
    out.sort_by(|x, y| y.0.cmp(&x.0));
    Ok(out)
}

/// Dimension and an echelon basis of the span of all `[odd, odd]` brackets.
pub fn odd_derived_span(s: &StructureConstants) -> (usize, Matrix) {
    let de = s.basis.dim_even();
    let vecs: Matrix = (de..s.dim())
        .flat_map(|i| (i..s.dim()).map(move |j| (i, j)))
        .map(|(i, j)| s.table[i][j].clone())
        .collect();
    let (rows, pivots) = linalg::rref(&vecs, s.dim());
    (pivots.len(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::SuperManifoldData;
    use crate::lie::solve_global_fields;
    use crate::lie::tests::split;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_int(n)
    }

    #[test]
    fn odd_point_table() {
        let b = solve_global_fields(&SuperManifoldData::odd_point("pt", 1), None).unwrap();
        let s = structure_constants(&b).unwrap();
        // b0 = xi d/dxi, b1 = d/dxi
        assert_eq!(s.table[0][1], vec![g(0), g(-1)]);
        assert_eq!(s.table[1][1], vec![g(0), g(0)]);
        assert!(jacobi_check(&s));
    }

    #[test]
    fn corrupted_table_fails() {
        let b = solve_global_fields(&split(&[1]), None).unwrap();
        let mut s = structure_constants(&b).unwrap();
        assert!(jacobi_check(&s));
        let d = s.dim();
        let (i, j, k) = (0..d)
            .flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| (i, j, k))))
            .find(|&(i, j, k)| i != j && !s.table[i][j][k].is_zero())
            .unwrap();
        s.table[i][j][k] = -&s.table[i][j][k];
        assert!(!jacobi_check(&s));
    }

    #[test]
    fn derived_spans() {
        for (k, dim) in [(-1, 0), (0, 3), (1, 4), (2, 3), (3, 0), (5, 0)] {
            let s = structure_constants(&solve_global_fields(&split(&[k]), None).unwrap()).unwrap();
            assert_eq!(odd_derived_span(&s).0, dim, "k={k}");
        }
    }

    #[test]
    fn zero_cartan_has_single_weight() {
        let s = structure_constants(&solve_global_fields(&split(&[2]), None).unwrap()).unwrap();
        let w = weight_decomposition(&s, &vec![g(0); s.dim()]).unwrap();
        assert_eq!(w, vec![(g(0), s.basis.dim_odd())]);
        assert!(matches!(adjoint_matrix(&s, s.dim() - 1), Err(Error::OddCartan(_))));
    }

    #[test]
    fn irrational_eigenvalues_rejected() {
        assert_eq!(gaussian_roots(&Polynomial::from_ints(&[-2, 0, 1])), Vec::<GaussianRational>::new());
        let r = gaussian_roots(&Polynomial::from_ints(&[1, 0, 1]));
        assert_eq!(r.len(), 2);
        assert!(r.contains(&GaussianRational::i()));
    }

    #[test]
    fn char_poly_of_triangular() {
        let a = vec![vec![g(2), g(1)], vec![g(0), g(-3)]];
        assert_eq!(char_poly(&a), Polynomial::from_ints(&[-6, 1, 1]));
    }
}
