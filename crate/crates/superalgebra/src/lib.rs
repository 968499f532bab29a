//! Exact symbolic Grassmann superalgebra over a finite set of sites.
//!
//! Each site `i` carries two bosonic variables `x_i`, `y_i`, a radical
//! `r_i` with `r_i^2 = 1 + x_i^2 + y_i^2`, and two Grassmann generators
//! `xi_i`, `eta_i`. Coefficients are exact rational functions whose
//! denominators are monomials in `r_i` and `1 + r_i`; no floating point
//! enters any identity computed here. On top of the graded ring sit the
//! left fermionic derivative, Berezin integration, the supersymmetry
//! operator `Q`, and closed-form flat Gaussian moments, which together are
//! enough to replay localization and integration-by-parts arguments
//! exactly.

pub mod coeff;
pub mod fermion;
pub mod gaussian;
pub mod poly;
pub mod supernum;

pub use coeff::{CoeffError, CoeffExpr, Denom, DenomExp};
pub use fermion::{FermionIndex, FermionMonomial, Species};
pub use gaussian::{fermionic_weight, gaussian_flat_integrate, GaussianError};
pub use poly::{rat, rat_int, Monomial, Poly, Var, VarKind};
pub use supernum::{AlgebraError, Parity, SuperNumber};
