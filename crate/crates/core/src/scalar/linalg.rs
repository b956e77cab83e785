//! Exact dense linear algebra over any [`Field`].
//!
//! Row reduction pivots on the leftmost available column and the kernel basis
//! is ordered by free-column index, so outputs are reproducible.

use super::Field;

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref<F: Field>(rows: &[Vec<F>], cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut m: Vec<Vec<F>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("nonzero pivot");
        if !m[r][c].is_unit_one() {
            for x in m[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x = x.times(&inv);
                }
            }
        }
        let support: Vec<usize> = (c..cols).filter(|&j| !m[r][j].is_zero()).collect();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j] = row[j].minus(&factor.times(&pivot_row[j]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Basis of the right null space `{v : M v = 0}`, one vector per free column,
/// in increasing free-column order.
pub fn kernel_basis<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let (red, pivots) = rref(rows, cols);
    let mut is_pivot = vec![None; cols];
    for (i, &p) in pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    (0..cols)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut v = vec![F::zero(); cols];
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = red[i][free].negated();
            }
            v
        })
        .collect()
}

pub fn mat_vec<F: Field>(rows: &[Vec<F>], v: &[F]) -> Vec<F> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(F::zero(), |acc, (a, b)| acc.plus(&a.times(b)))
        })
        .collect()
}

pub fn mat_mul<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.plus(&row[k].times(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn identity<F: Field>(n: usize) -> Vec<Vec<F>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

/// Determinant by Gaussian elimination.
pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = det.negated();
        }
        det = det.times(&a[c][c]);
        let inv = a[c][c].recip().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].times(&inv);
            for j in c..n {
                let t = f.times(&a[c][j]);
                a[i][j] = a[i][j].minus(&t);
            }
        }
    }
    det
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coefficients `c` with `Σ c_i basis_i = target`, or `None` if the target is
/// outside the span. Basis vectors must be linearly independent.
pub fn express_in_span<F: Field>(basis: &[Vec<F>], target: &[F]) -> Option<Vec<F>> {
    let k = basis.len();
    let len = target.len();
    let rows: Vec<Vec<F>> = (0..len)
        .map(|r| {
            let mut row: Vec<F> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(&rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut out = vec![F::zero(); k];
    for (i, &p) in pivots.iter().enumerate() {
        out[p] = red[i][k].clone();
    }
    Some(out)
}
