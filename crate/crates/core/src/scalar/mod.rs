//! Exact scalars: Gaussian rationals, univariate polynomials and rational
//! functions over them, and the linear algebra used by the solvers.

mod gaussian;
pub mod linalg;
mod poly;
mod ratfunc;

pub use gaussian::GaussianRational;
pub use poly::Polynomial;
pub(crate) use poly::split_sign;
pub use ratfunc::RationalFunction;

/// The field operations the generic linear algebra needs.
pub trait Field: Clone + PartialEq + std::fmt::Debug + num_traits::Zero + num_traits::One {
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn negated(&self) -> Self;

    fn is_unit_one(&self) -> bool {
        *self == <Self as num_traits::One>::one()
    }
}
