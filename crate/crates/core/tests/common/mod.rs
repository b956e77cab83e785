//! Shared helpers for the integration suites: bundled files, seeded random
//! generators, and oracles that do not go through the library solvers.
#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use supervec::derivation::SuperDerivation;
use supervec::geometry::{Mat2, SuperManifoldData};
use supervec::grassmann::{ChartId, OddMultiIndex, Parity, PullbackData, SuperFunction};
use supervec::io::parse_manifold_file;
use supervec::scalar::{GaussianRational, Polynomial, RationalFunction};

pub type G = GaussianRational;
pub const Z0: ChartId = ChartId::Zero;

pub fn g(n: i64) -> G {
    G::from_int(n)
}

pub fn q(a: i64, b: i64) -> G {
    G::ratio(a, b)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

pub fn load(name: &str) -> SuperManifoldData {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    parse_manifold_file(&text).unwrap()
}

pub fn split_file(k: i64) -> String {
    format!("split_k{k}.smf")
}

pub fn poly(cs: &[i64]) -> RationalFunction {
    RationalFunction::from_poly(Polynomial::from_ints(cs))
}

pub fn zpow(e: i64) -> RationalFunction {
    RationalFunction::laurent_monomial(g(1), e)
}

pub fn mono(n: usize, c: RationalFunction, idx: &[usize]) -> SuperFunction {
    SuperFunction::monomial(Z0, n, c, OddMultiIndex::from_indices(idx))
}

pub fn theta(n: usize, j: usize) -> SuperFunction {
    SuperFunction::odd_coordinate(Z0, n, j)
}

pub fn zvar(n: usize) -> SuperFunction {
    SuperFunction::even_coordinate(Z0, n)
}

pub fn dz(f: SuperFunction) -> SuperDerivation {
    SuperDerivation::along_even(f)
}

pub fn dt(j: usize, f: SuperFunction) -> SuperDerivation {
    SuperDerivation::along_odd(j, f)
}

// ---- random data -------------------------------------------------------

pub fn rand_q(rng: &mut ChaCha8Rng, span: i64) -> G {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=4))
}

pub fn rand_nonzero_q(rng: &mut ChaCha8Rng, span: i64) -> G {
    loop {
        let x = rand_q(rng, span);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn rand_poly(rng: &mut ChaCha8Rng, max_deg: u32) -> RationalFunction {
    let deg = rng.gen_range(0..=max_deg);
    RationalFunction::from_poly(Polynomial::from_terms((0..=deg).map(|e| (e, rand_q(rng, 5)))))
}

/// Rational function with a small denominator, never identically zero.
pub fn rand_rf(rng: &mut ChaCha8Rng) -> RationalFunction {
    let num = loop {
        let p = rand_poly(rng, 3);
        if !p.is_zero() {
            break p;
        }
    };
    if rng.gen_bool(0.5) {
        return num;
    }
    let den = Polynomial::from_terms([(0, rand_nonzero_q(rng, 3)), (1, g(1))]);
    num.checked_div(&RationalFunction::from_poly(den)).unwrap()
}

/// Random superfunction on chart 0, optionally of a fixed parity.
pub fn rand_sf(rng: &mut ChaCha8Rng, n: usize, parity: Option<Parity>) -> SuperFunction {
    let mut terms = Vec::new();
    for i in OddMultiIndex::all(n) {
        if parity.map_or(true, |p| i.parity() == p) && rng.gen_bool(0.6) {
            terms.push((i, rand_rf(rng)));
        }
    }
    SuperFunction::from_terms(Z0, n, terms)
}

/// Random element of SL₂ over the rationals.
pub fn rand_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
    let a = rand_nonzero_q(rng, 4);
    let b = rand_q(rng, 4);
    let c = rand_q(rng, 4);
    let d = &(&G::one() + &(&b * &c)) / &a;
    [[a, b], [c, d]]
}

/// Random chart-0 automorphism pullback: Möbius reduced map, invertible
/// constant odd part, random nilpotent corrections of the allowed parities.
pub fn rand_automorphism(rng: &mut ChaCha8Rng, n: usize) -> PullbackData {
    let m = rand_sl2(rng);
    let num = Polynomial::from_terms([(0, m[1][0].clone()), (1, m[1][1].clone())]);
    let den = Polynomial::from_terms([(0, m[0][0].clone()), (1, m[0][1].clone())]);
    let reduced = RationalFunction::new(num, den).unwrap();
    let nilpotent = |rng: &mut ChaCha8Rng, p: Parity, min: u32| {
        let mut terms = Vec::new();
        for i in OddMultiIndex::all(n) {
            if i.parity() == p && i.weight() >= min && rng.gen_bool(0.7) {
                terms.push((i, rand_poly(rng, 2)));
            }
        }
        SuperFunction::from_terms(Z0, n, terms)
    };
    let even = &SuperFunction::from_rf(Z0, n, reduced) + &nilpotent(rng, Parity::Even, 2);
    let b = loop {
        let b: Vec<Vec<G>> = (0..n).map(|_| (0..n).map(|_| rand_q(rng, 3)).collect()).collect();
        if !supervec::scalar::linalg::determinant(&b).is_zero() {
            break b;
        }
    };
    let odd = (0..n)
        .map(|j| {
            let linear = (0..n).fold(SuperFunction::zero(Z0, n), |acc, k| &acc + &theta(n, k).scale(&b[j][k]));
            &linear + &nilpotent(rng, Parity::Odd, 3)
        })
        .collect();
    PullbackData::new(Z0, Z0, even, odd).unwrap()
}

/// Random even derivation with filtration level at least 2.
pub fn rand_nilpotent_field(rng: &mut ChaCha8Rng, n: usize) -> SuperDerivation {
    let part = |rng: &mut ChaCha8Rng, p: Parity, min: u32| {
        let terms = OddMultiIndex::all(n)
            .into_iter()
            .filter(|i| i.parity() == p && i.weight() >= min)
            .map(|i| (i, rand_poly(rng, 2)))
            .collect::<Vec<_>>();
        SuperFunction::from_terms(Z0, n, terms)
    };
    let even = part(rng, Parity::Even, 2);
    let odd = (0..n).map(|_| part(rng, Parity::Odd, 3)).collect();
    SuperDerivation::new(even, odd).unwrap()
}

// ---- exact elimination independent of the library ----------------------

/// Rank by plain Gaussian elimination.
pub fn oracle_rank(mut rows: Vec<Vec<G>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = &G::one() / &rows[rank][c];
        let pivot: Vec<G> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in rank + 1..rows.len() {
            let f = rows[r][c].clone();
            if !f.is_zero() {
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

// ---- dimension oracle --------------------------------------------------

/// Inverse transition `ψ` (chart-0 coordinates written in chart-1 ones),
/// entered by hand for the bundled shapes.
pub enum InverseTransition {
    /// `z = 1/w`, `θ_j = w^{-k_j} η_j` for `η_j = z^{-k_j} θ_j`.
    Split(Vec<i64>),
    /// `z = w⁻¹ + w⁻³ η₁η₂`, `θ_j = w⁻² η_j`.
    Example3,
}

impl InverseTransition {
    fn pullback(&self) -> PullbackData {
        let one = ChartId::One;
        match self {
            InverseTransition::Split(ks) => {
                let n = ks.len();
                let even = SuperFunction::from_rf(one, n, zpow(-1));
                let odd = ks
                    .iter()
                    .enumerate()
                    .map(|(j, &k)| SuperFunction::monomial(one, n, zpow(-k), OddMultiIndex::single(j)))
                    .collect();
                PullbackData::new(one, Z0, even, odd).unwrap()
            }
            InverseTransition::Example3 => {
                let even = SuperFunction::from_terms(
                    one,
                    2,
                    [
                        (OddMultiIndex::EMPTY, zpow(-1)),
                        (OddMultiIndex::from_indices(&[0, 1]), zpow(-3)),
                    ],
                );
                let odd = (0..2)
                    .map(|j| SuperFunction::monomial(one, 2, zpow(-2), OddMultiIndex::single(j)))
                    .collect();
                PullbackData::new(one, Z0, even, odd).unwrap()
            }
        }
    }
}

/// Dimensions (even, odd) of the space of chart-0 fields with polynomial
/// coefficients of degree at most `cap` whose chart-1 expression
/// `ψ* ∘ X ∘ χ*` has no negative powers of `w`.
pub fn oracle_vec_dims(m: &SuperManifoldData, inv: &InverseTransition, cap: u32) -> (usize, usize) {
    let chi = m.transition().expect("two-chart manifold");
    let psi = inv.pullback();
    let n = m.odd_dim();
    let one = ChartId::One;
    let coords: Vec<SuperFunction> = std::iter::once(SuperFunction::even_coordinate(one, n))
        .chain((0..n).map(|j| SuperFunction::odd_coordinate(one, n, j)))
        .collect();
    let pulled: Vec<SuperFunction> = coords.iter().map(|u| chi.substitute(u).unwrap()).collect();
    // sanity: ψ really inverts χ
    for (u, f) in coords.iter().zip(&pulled) {
        assert_eq!(&psi.substitute(f).unwrap(), u, "hand-entered inverse is wrong");
    }
    let dim_for = |parity: Parity| {
        let mut fields = Vec::new();
        for slot in 0..=n {
            let want = if slot == 0 { parity } else { parity.flip() };
            for idx in OddMultiIndex::all(n).into_iter().filter(|i| i.parity() == want) {
                for e in 0..=cap as i64 {
                    let f = SuperFunction::monomial(Z0, n, zpow(e), idx);
                    fields.push(if slot == 0 { dz(f) } else { dt(slot - 1, f) });
                }
            }
        }
        // one row per (coordinate, θ-monomial, negative power of w)
        let mut keys: Vec<(usize, u32, i64)> = Vec::new();
        let mut cols: Vec<Vec<(usize, G)>> = Vec::new();
        for x in &fields {
            let mut col = Vec::new();
            for (u, f) in pulled.iter().enumerate() {
                let image = psi.substitute(&x.apply(f).unwrap()).unwrap();
                for (idx, c) in image.terms() {
                    for (e, v) in c.laurent_terms().expect("Laurent in w") {
                        if e < 0 {
                            let key = (u, idx.bits(), e);
                            let pos = keys.iter().position(|k| *k == key).unwrap_or_else(|| {
                                keys.push(key);
                                keys.len() - 1
                            });
                            col.push((pos, v));
                        }
                    }
                }
            }
            cols.push(col);
        }
        let mut rows = vec![vec![G::zero(); fields.len()]; keys.len()];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col {
                rows[*r][c] = &rows[*r][c] + v;
            }
        }
        fields.len() - oracle_rank(rows)
    };
    (dim_for(Parity::Even), dim_for(Parity::Odd))
}
