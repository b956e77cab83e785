use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{GaussianRational, RationalFunction};
use crate::{Error, Result};

/// Which of the two standard charts of the projective line a value lives on.
/// Chart 0 has coordinates `z, t1..tn`; chart 1 has `w, eta1..etan`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ChartId {
    Zero,
    One,
}

impl ChartId {
    pub fn even_var(self) -> &'static str {
        match self {
            ChartId::Zero => "z",
            ChartId::One => "w",
        }
    }

    pub fn odd_prefix(self) -> &'static str {
        match self {
            ChartId::Zero => "t",
            ChartId::One => "eta",
        }
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartId::Zero => write!(f, "chart0"),
            ChartId::One => write!(f, "chart1"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u32) -> Parity {
        if b % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        Parity::from_bit(self.bit() + 1)
    }

    /// `(-1)^(self * other)`.
    pub fn sign_with(self, other: Parity) -> i64 {
        if self == Parity::Odd && other == Parity::Odd {
            -1
        } else {
            1
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// A set of odd indices `ν ⊂ {0..n-1}`, standing for the increasing product
/// `θ^ν = θ_{i1} θ_{i2} ...` with `i1 < i2 < ...`.
///
/// Ordered by weight first, then lexicographically by index sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct OddMultiIndex(u32);

impl OddMultiIndex {
    pub const EMPTY: OddMultiIndex = OddMultiIndex(0);

    pub fn from_bits(bits: u32) -> Self {
        OddMultiIndex(bits)
    }

    pub fn single(j: usize) -> Self {
        OddMultiIndex(1 << j)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        OddMultiIndex(idx.iter().fold(0, |b, &j| b | (1 << j)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn parity(self) -> Parity {
        Parity::from_bit(self.weight())
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |j| self.0 & (1 << j) != 0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// All `2^n` indices in canonical order.
    pub fn all(n: usize) -> Vec<OddMultiIndex> {
        let mut v: Vec<_> = (0..(1u32 << n)).map(OddMultiIndex).collect();
        v.sort();
        v
    }

    /// `θ^self · θ^other = sign · θ^(self ∪ other)`, or `None` if they overlap.
    pub fn merge(self, other: OddMultiIndex) -> Option<(i64, OddMultiIndex)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, OddMultiIndex(self.0 | other.0)))
    }

    /// Left derivative `∂θ^self/∂θ_j`.
    pub fn remove(self, j: usize) -> Option<(i64, OddMultiIndex)> {
        if !self.contains(j) {
            return None;
        }
        let before = (self.0 & ((1 << j) - 1)).count_ones();
        let sign = if before % 2 == 0 { 1 } else { -1 };
        Some((sign, OddMultiIndex(self.0 & !(1 << j))))
    }
}

impl Ord for OddMultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.indices().cmp(other.indices()))
    }
}

impl PartialOrd for OddMultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Grassmann-valued function `Σ_ν f_ν(z) θ^ν` on one chart.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SuperFunction {
    chart: ChartId,
    odd_dim: usize,
    terms: BTreeMap<OddMultiIndex, RationalFunction>,
}

impl SuperFunction {
    pub fn zero(chart: ChartId, odd_dim: usize) -> Self {
        assert!(odd_dim < 31, "odd dimension too large");
        SuperFunction {
            chart,
            odd_dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(chart: ChartId, odd_dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (OddMultiIndex, RationalFunction)>,
    {
        let mut f = SuperFunction::zero(chart, odd_dim);
        for (idx, c) in terms {
            assert!(idx.bits() < (1 << odd_dim), "index outside odd dimension");
            f.add_term(idx, &c);
        }
        f
    }

    pub fn monomial(chart: ChartId, odd_dim: usize, coeff: RationalFunction, idx: OddMultiIndex) -> Self {
        SuperFunction::from_terms(chart, odd_dim, [(idx, coeff)])
    }

    pub fn from_rf(chart: ChartId, odd_dim: usize, f: RationalFunction) -> Self {
        SuperFunction::monomial(chart, odd_dim, f, OddMultiIndex::EMPTY)
    }

    pub fn constant(chart: ChartId, odd_dim: usize, c: GaussianRational) -> Self {
        SuperFunction::from_rf(chart, odd_dim, RationalFunction::constant(c))
    }

    pub fn one(chart: ChartId, odd_dim: usize) -> Self {
        SuperFunction::from_rf(chart, odd_dim, RationalFunction::one())
    }

    /// The even coordinate of the chart.
    pub fn even_coordinate(chart: ChartId, odd_dim: usize) -> Self {
        SuperFunction::from_rf(chart, odd_dim, RationalFunction::var())
    }

    /// The odd coordinate `θ_j` (0-based).
    pub fn odd_coordinate(chart: ChartId, odd_dim: usize, j: usize) -> Self {
        assert!(j < odd_dim);
        SuperFunction::monomial(chart, odd_dim, RationalFunction::one(), OddMultiIndex::single(j))
    }

    pub fn chart(&self) -> ChartId {
        self.chart
    }

    pub fn odd_dim(&self) -> usize {
        self.odd_dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (OddMultiIndex, &RationalFunction)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, idx: OddMultiIndex) -> RationalFunction {
        self.terms.get(&idx).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, idx: OddMultiIndex, c: &RationalFunction) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&idx) {
            Some(slot) => {
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.terms.remove(&idx);
                }
            }
            None => {
                self.terms.insert(idx, c.clone());
            }
        }
    }

    /// Same data on another chart (used when a formula is transported verbatim).
    pub fn relabel(&self, chart: ChartId) -> Self {
        SuperFunction {
            chart,
            ..self.clone()
        }
    }

    /// Embeds into an algebra with more odd generators (extra indices unused).
    pub fn widen(&self, odd_dim: usize) -> Self {
        assert!(odd_dim >= self.odd_dim);
        SuperFunction {
            odd_dim,
            ..self.clone()
        }
    }

    /// `Some(p)` when all terms share parity `p`; the zero function counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|i| i.parity());
        let first = it.next().unwrap_or(Parity::Even);
        it.all(|p| p == first).then_some(first)
    }

    pub fn is_pure(&self, p: Parity) -> bool {
        self.terms.keys().all(|i| i.parity() == p)
    }

    /// Smallest `‖ν‖` among stored terms, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|i| i.weight()).min()
    }

    /// Homogeneous part of Z-degree `k`.
    pub fn degree_component(&self, k: u32) -> Self {
        self.filter(|i| i.weight() == k)
    }

    /// Part with `‖ν‖ >= k`.
    pub fn degree_at_least(&self, k: u32) -> Self {
        self.filter(|i| i.weight() >= k)
    }

    pub fn filter(&self, pred: impl Fn(OddMultiIndex) -> bool) -> Self {
        SuperFunction {
            chart: self.chart,
            odd_dim: self.odd_dim,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| pred(**i))
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of `θ^∅`.
    pub fn reduced(&self) -> RationalFunction {
        self.coeff(OddMultiIndex::EMPTY)
    }

    pub fn nilpotent_part(&self) -> Self {
        self.degree_at_least(1)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.mul_rf(&RationalFunction::constant(c.clone()))
    }

    /// Multiplies every coefficient by an even function of the even coordinate.
    pub fn mul_rf(&self, f: &RationalFunction) -> Self {
        if f.is_zero() {
            return SuperFunction::zero(self.chart, self.odd_dim);
        }
        SuperFunction {
            chart: self.chart,
            odd_dim: self.odd_dim,
            terms: self.terms.iter().map(|(i, c)| (*i, c * f)).collect(),
        }
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&RationalFunction) -> Result<RationalFunction>) -> Result<Self> {
        let mut out = SuperFunction::zero(self.chart, self.odd_dim);
        for (i, c) in &self.terms {
            out.add_term(*i, &f(c)?);
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &SuperFunction) -> Result<()> {
        if self.chart != other.chart || self.odd_dim != other.odd_dim {
            return Err(Error::ChartMismatch(format!(
                "{}(n={}) vs {}(n={})",
                self.chart, self.odd_dim, other.chart, other.odd_dim
            )));
        }
        Ok(())
    }

    /// Grassmann product with the increasing-index sign convention.
    pub fn mul(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check_compatible(other)?;
        let mut out = SuperFunction::zero(self.chart, self.odd_dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((sign, idx)) = a.merge(*b) {
                    let c = ca * cb;
                    let c = if sign < 0 { -&c } else { c };
                    out.add_term(idx, &c);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &SuperFunction) -> Result<SuperFunction> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (i, c) in &other.terms {
            out.add_term(*i, c);
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> SuperFunction {
        let mut acc = SuperFunction::one(self.chart, self.odd_dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂z` applied coefficient-wise.
    pub fn partial_even(&self) -> SuperFunction {
        let mut out = SuperFunction::zero(self.chart, self.odd_dim);
        for (i, c) in &self.terms {
            out.add_term(*i, &c.derivative());
        }
        out
    }

    /// Left derivative `∂/∂θ_j`.
    pub fn partial_odd(&self, j: usize) -> SuperFunction {
        let mut out = SuperFunction::zero(self.chart, self.odd_dim);
        for (i, c) in &self.terms {
            if let Some((sign, rest)) = i.remove(j) {
                out.add_term(rest, &if sign < 0 { -c } else { c.clone() });
            }
        }
        out
    }

    /// Inverse of an even function whose reduced part is nonzero:
    /// `(r + n)^-1 = r^-1 Σ_k (-n/r)^k`, a finite sum.
    pub fn inverse_even(&self) -> Result<SuperFunction> {
        if !self.is_pure(Parity::Even) {
            return Err(Error::MixedParity);
        }
        let r = self.reduced();
        let r_inv = r
            .recip()
            .map_err(|_| Error::NotInvertible("reduced part vanishes".into()))?;
        let u = self.nilpotent_part().mul_rf(&(-&r_inv));
        let mut acc = SuperFunction::one(self.chart, self.odd_dim);
        let mut power = acc.clone();
        loop {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.mul_rf(&r_inv))
    }

    /// Integer power of an even function; negative powers go through [`Self::inverse_even`].
    pub fn powi(&self, k: i64) -> Result<SuperFunction> {
        let base = if k < 0 { self.inverse_even()? } else { self.clone() };
        Ok(base.pow(k.unsigned_abs() as u32))
    }

    pub fn to_string_vars(&self, even: &str, odd_prefix: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let text = c.coeff_text(even);
            let odd: Vec<String> = idx.indices().map(|j| format!("{odd_prefix}{}", j + 1)).collect();
            let mut body = Vec::new();
            if let Some(b) = text.body {
                body.push(b);
            }
            body.extend(odd);
            if body.is_empty() {
                body.push("1".to_string());
            }
            match (n, text.negative) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body.join("*"));
        }
        s
    }
}

impl fmt::Display for SuperFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            self.to_string_vars(self.chart.even_var(), self.chart.odd_prefix())
        )
    }
}

// Operator forms panic on chart mismatch; they are for internal arithmetic on
// values already known to share a chart. Use `try_add` / `mul` otherwise.
impl<'a> Add<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn add(self, o: &SuperFunction) -> SuperFunction {
        self.try_add(o).expect("superfunction chart mismatch")
    }
}

impl<'a> Sub<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn sub(self, o: &SuperFunction) -> SuperFunction {
        self + &(-o)
    }
}

impl Neg for &SuperFunction {
    type Output = SuperFunction;
    fn neg(self) -> SuperFunction {
        SuperFunction {
            chart: self.chart,
            odd_dim: self.odd_dim,
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a SuperFunction> for &'a SuperFunction {
    type Output = SuperFunction;
    fn mul(self, o: &SuperFunction) -> SuperFunction {
        SuperFunction::mul(self, o).expect("superfunction chart mismatch")
    }
}
