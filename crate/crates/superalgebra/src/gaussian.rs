//! Exact flat Gaussian-Berezin integration.
//!
//! Integrates a polynomial-coefficient supernumber against the flat form
//! `prod_i (1/2pi) dx_i dy_i d_xi_i d_eta_i` weighted by
//! `exp(-sum_i w_i (x_i^2 + y_i^2) / 2)`. The bosonic exponential is never
//! materialized: it lives here as closed-form centered moments
//! `E[x^(2k)] = (2k-1)!! / w^k`, so results are exact rationals. The
//! fermionic factor of a supersymmetric weight, `prod_i (1 - w_i xi_i
//! eta_i)`, is the caller's to include in the integrand.

use num::{BigInt, BigRational, One, Zero};
use thiserror::Error;

use crate::fermion::FermionMonomial;

use crate::supernum::SuperNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GaussianError {
    #[error("integrand coefficients must be polynomials in x and y only")]
    NonPolynomialCoefficient,
    #[error("need one positive weight per site: got {0} for {1} sites")]
    WeightCount(usize, u32),
    #[error("weights must be positive")]
    NonPositiveWeight,
}

/// `(2k - 1)!! = 1 * 3 * ... * (2k-1)`, the 2k-th centered moment of a
/// unit-variance Gaussian.
fn double_factorial_odd(k: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut f = BigInt::one();
    for _ in 0..k {
        acc *= &f;
        f += 2;
    }
    acc
}

/// Moment of `x^e` under the centered Gaussian with precision `w`
/// (variance `1/w`), zero for odd `e`.
fn gaussian_moment(e: u32, w: &BigRational) -> BigRational {
    if e % 2 == 1 {
        return BigRational::zero();
    }
    let k = e / 2;
    BigRational::from(double_factorial_odd(k)) / num::pow::pow(w.clone(), k as usize)
}

/// The supersymmetric fermionic weight `prod_i (1 - w_i xi_i eta_i)`.
pub fn fermionic_weight(n_sites: u32, w: &[BigRational]) -> SuperNumber {
    let mut out = SuperNumber::one(n_sites);
    for site in 1..=n_sites {
        let xi_eta = SuperNumber::xi(n_sites, site)
            .mul(&SuperNumber::eta(n_sites, site))
            .expect("same engine");
        let factor = SuperNumber::one(n_sites)
            .sub(&xi_eta.scale(&w[(site - 1) as usize]))
            .expect("same engine");
        out = out.mul(&factor).expect("same engine");
    }
    out
}

/// Exact value of
/// `int prod_i (1/2pi) dx_i dy_i d_xi_i d_eta_i  a * exp(-sum w_i (x_i^2 + y_i^2)/2)`.
///
/// Fermions are removed by Berezin pairs; the surviving coefficient is a
/// polynomial in `x, y` integrated monomial by monomial against the
/// closed-form moments. Each site contributes an extra `1/w_i` from the
/// `(1/2pi) dx dy` normalization of its Gaussian factor.
pub fn gaussian_flat_integrate(
    a: &SuperNumber,
    w: &[BigRational],
) -> Result<BigRational, GaussianError> {
    let n = a.n_sites();
    if w.len() != n as usize {
        return Err(GaussianError::WeightCount(w.len(), n));
    }
    if w.iter().any(|wi| *wi <= BigRational::zero()) {
        return Err(GaussianError::NonPositiveWeight);
    }
    if a.terms().any(|(_, c)| !c.is_xy_polynomial()) {
        return Err(GaussianError::NonPolynomialCoefficient);
    }

    let mut reduced = a.clone();
    for site in 1..=n {
        reduced = reduced.berezin_pair(site).expect("site in range");
    }
    let poly = reduced.coefficient(&FermionMonomial::one());

    let mut total = BigRational::zero();
    'terms: for (mono, c) in poly.num().terms() {
        let mut term = c.clone();
        // Collect per-site exponents; absent sites integrate as x^0 y^0.
        for site in 1..=n {
            let ex = mono.exponent(crate::poly::Var::x(site));
            let ey = mono.exponent(crate::poly::Var::y(site));
            if ex % 2 == 1 || ey % 2 == 1 {
                continue 'terms;
            }
            let wi = &w[(site - 1) as usize];
            term *= gaussian_moment(ex, wi) * gaussian_moment(ey, wi) / wi.clone();
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    fn w1(v: BigRational) -> Vec<BigRational> {
        vec![v]
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), BigInt::from(1));
        assert_eq!(double_factorial_odd(1), BigInt::from(1));
        assert_eq!(double_factorial_odd(2), BigInt::from(3));
        assert_eq!(double_factorial_odd(3), BigInt::from(15));
        assert_eq!(double_factorial_odd(4), BigInt::from(105));
    }

    #[test]
    fn susy_normalization_is_one() {
        // integrand (1 - w xi eta): fermionic w cancels the bosonic 1/w
        for w in [rat(1, 2), rat_int(1), rat_int(3)] {
            let e_f = fermionic_weight(1, &w1(w.clone()));
            assert_eq!(gaussian_flat_integrate(&e_f, &w1(w)).unwrap(), rat_int(1));
        }
    }

    #[test]
    fn second_moment() {
        // int x^2 (1 - w xi eta) = 1/w
        let w = rat_int(4);
        let x2 = SuperNumber::x(1, 1).mul(&SuperNumber::x(1, 1)).unwrap();
        let a = x2.mul(&fermionic_weight(1, &w1(w.clone()))).unwrap();
        assert_eq!(gaussian_flat_integrate(&a, &w1(w)).unwrap(), rat(1, 4));
    }

    #[test]
    fn odd_integrand_vanishes() {
        let a = SuperNumber::xi(1, 1);
        assert_eq!(
            gaussian_flat_integrate(&a, &w1(rat_int(1))).unwrap(),
            rat_int(0)
        );
        let b = SuperNumber::x(1, 1);
        assert_eq!(
            gaussian_flat_integrate(&b, &w1(rat_int(1))).unwrap(),
            rat_int(0)
        );
    }

    #[test]
    fn r_coefficients_are_rejected() {
        let a = SuperNumber::r(1, 1);
        assert_eq!(
            gaussian_flat_integrate(&a, &w1(rat_int(1))).unwrap_err(),
            GaussianError::NonPolynomialCoefficient
        );
    }

    #[test]
    fn multi_site_factorizes() {
        // int x1^2 y2^4 E_f = (1/w1) * (3/w2^2) * (1/w1 * 1/w2) fermionic-cancelled
        let w = vec![rat_int(2), rat_int(3)];
        let x1 = SuperNumber::x(2, 1);
        let y2 = SuperNumber::y(2, 2);
        let integrand = x1.mul(&x1).unwrap()
            .mul(&y2.mul(&y2).unwrap().mul(&y2.mul(&y2).unwrap()).unwrap()).unwrap()
            .mul(&fermionic_weight(2, &w)).unwrap();
        // E[x1^2] = 1/2, E[y2^4] = 3/9 = 1/3
        assert_eq!(
            gaussian_flat_integrate(&integrand, &w).unwrap(),
            rat(1, 2) * rat(1, 3)
        );
    }
}
