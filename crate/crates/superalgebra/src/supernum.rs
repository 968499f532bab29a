//! Supernumbers: finite maps from fermion monomials to coefficient
//! expressions, together with the graded product, left fermionic
//! derivatives, Berezin pairs, the supersymmetry operator `Q`, and exact
//! inversion of even elements with unit body.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Zero};
use thiserror::Error;

use crate::coeff::{CoeffError, CoeffExpr, Denom};
use crate::fermion::{FermionIndex, FermionMonomial};
use crate::poly::{Poly, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("site count mismatch: {0} vs {1}")]
    SiteMismatch(u32, u32),
    #[error("site {0} out of range 1..={1}")]
    SiteOutOfRange(u32, u32),
    #[error("operand must have homogeneous Grassmann parity")]
    MixedParity,
    #[error("operand must be even")]
    NotEven,
    #[error("body is not invertible: {0}")]
    BodyNotInvertible(CoeffError),
    #[error("body must vanish for a nilpotent exponential")]
    NotNilpotent,
}

/// Grassmann parity of a homogeneous supernumber.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

/// An element of the Grassmann algebra over `2 * n_sites` generators with
/// [`CoeffExpr`] coefficients. Zero coefficients are never stored, so two
/// supernumbers are equal iff their term maps are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperNumber {
    n_sites: u32,
    terms: BTreeMap<FermionMonomial, CoeffExpr>,
}

impl SuperNumber {
    pub fn zero(n_sites: u32) -> Self {
        SuperNumber { n_sites, terms: BTreeMap::new() }
    }

    pub fn one(n_sites: u32) -> Self {
        SuperNumber::scalar(n_sites, BigRational::one())
    }

    pub fn scalar(n_sites: u32, c: BigRational) -> Self {
        SuperNumber::from_coeff(n_sites, CoeffExpr::from_rational(c))
    }

    pub fn from_int(n_sites: u32, c: i64) -> Self {
        SuperNumber::scalar(n_sites, BigRational::from(num::BigInt::from(c)))
    }

    pub fn from_coeff(n_sites: u32, c: CoeffExpr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(FermionMonomial::one(), c);
        }
        SuperNumber { n_sites, terms }
    }

    pub fn from_term(n_sites: u32, m: FermionMonomial, c: CoeffExpr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperNumber { n_sites, terms }
    }

    /// The bosonic variable `x_site`.
    pub fn x(n_sites: u32, site: u32) -> Self {
        SuperNumber::from_coeff(n_sites, CoeffExpr::var(Var::x(site)))
    }

    /// The bosonic variable `y_site`.
    pub fn y(n_sites: u32, site: u32) -> Self {
        SuperNumber::from_coeff(n_sites, CoeffExpr::var(Var::y(site)))
    }

    /// The radical `r_site = sqrt(1 + x^2 + y^2)`, the body of `z_site`.
    pub fn r(n_sites: u32, site: u32) -> Self {
        SuperNumber::from_coeff(n_sites, CoeffExpr::var(Var::r(site)))
    }

    pub fn xi(n_sites: u32, site: u32) -> Self {
        SuperNumber::from_term(
            n_sites,
            FermionMonomial::generator(FermionIndex::xi(site)),
            CoeffExpr::one(),
        )
    }

    pub fn eta(n_sites: u32, site: u32) -> Self {
        SuperNumber::from_term(
            n_sites,
            FermionMonomial::generator(FermionIndex::eta(site)),
            CoeffExpr::one(),
        )
    }

    pub fn n_sites(&self) -> u32 {
        self.n_sites
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FermionMonomial, &CoeffExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FermionMonomial) -> CoeffExpr {
        self.terms.get(m).cloned().unwrap_or_else(CoeffExpr::zero)
    }

    /// The coefficient of the empty monomial.
    pub fn body(&self) -> CoeffExpr {
        self.coefficient(&FermionMonomial::one())
    }

    /// Everything of positive fermion degree.
    pub fn soul(&self) -> SuperNumber {
        let mut out = SuperNumber::zero(self.n_sites);
        for (m, c) in &self.terms {
            if !m.is_one() {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }

    /// Grassmann parity when homogeneous, `None` otherwise.
    pub fn parity(&self) -> Option<Parity> {
        let mut parity = None;
        for m in self.terms.keys() {
            let p = if m.parity() == 0 { Parity::Even } else { Parity::Odd };
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        // The zero supernumber is even by convention.
        Some(parity.unwrap_or(Parity::Even))
    }

    fn check_sites(&self, other: &SuperNumber) -> Result<(), AlgebraError> {
        if self.n_sites != other.n_sites {
            Err(AlgebraError::SiteMismatch(self.n_sites, other.n_sites))
        } else {
            Ok(())
        }
    }

    fn check_site_in_range(&self, site: u32) -> Result<(), AlgebraError> {
        if site == 0 || site > self.n_sites {
            Err(AlgebraError::SiteOutOfRange(site, self.n_sites))
        } else {
            Ok(())
        }
    }

    fn insert(&mut self, m: FermionMonomial, c: CoeffExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(cur) => {
                let sum = cur + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &SuperNumber) -> Result<SuperNumber, AlgebraError> {
        self.check_sites(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperNumber) -> Result<SuperNumber, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperNumber {
        let mut out = SuperNumber::zero(self.n_sites);
        for (m, c) in &self.terms {
            out.terms.insert(*m, -c.clone());
        }
        out
    }

    /// Graded product. Signs come from sorting concatenated generator
    /// sequences; repeated generators annihilate the term.
    pub fn mul(&self, other: &SuperNumber) -> Result<SuperNumber, AlgebraError> {
        self.check_sites(other)?;
        let mut out = SuperNumber::zero(self.n_sites);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb) {
                    let mut c = ca.clone() * cb.clone();
                    if sign < 0 {
                        c = -c;
                    }
                    out.insert(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> SuperNumber {
        let mut out = SuperNumber::zero(self.n_sites);
        if c.is_zero() {
            return out;
        }
        for (m, coeff) in &self.terms {
            out.terms.insert(*m, coeff.scale(c));
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> SuperNumber {
        self.scale(&BigRational::from(num::BigInt::from(c)))
    }

    /// Left fermionic derivative: each monomial containing `g` has `g`
    /// commuted to the front (accumulating signs) and removed; monomials
    /// without `g` are annihilated.
    pub fn fermion_derive_left(&self, g: FermionIndex) -> SuperNumber {
        let mut out = SuperNumber::zero(self.n_sites);
        for (m, c) in &self.terms {
            if let Some((rest, sign)) = m.left_derive(g) {
                let c = if sign < 0 { -c.clone() } else { c.clone() };
                out.insert(rest, c);
            }
        }
        out
    }

    /// The Berezin pair for one site, applying the measure symbol
    /// `d_xi d_eta` in its written order: `d_eta` acts first (innermost),
    /// then `d_xi`.
    pub fn berezin_pair(&self, site: u32) -> Result<SuperNumber, AlgebraError> {
        self.check_site_in_range(site)?;
        Ok(self
            .fermion_derive_left(FermionIndex::eta(site))
            .fermion_derive_left(FermionIndex::xi(site)))
    }

    /// Coefficient-wise bosonic partial derivative; the chain rule through
    /// `r_site` is applied inside the coefficient field.
    pub fn boson_derive(&self, v: Var) -> Result<SuperNumber, AlgebraError> {
        self.check_site_in_range(v.site)?;
        let mut out = SuperNumber::zero(self.n_sites);
        for (m, c) in &self.terms {
            out.insert(*m, c.derive(v));
        }
        Ok(out)
    }

    /// The supersymmetry operator
    /// `Q = sum_i (xi_i d/dx_i + eta_i d/dy_i + x_i d/deta_i - y_i d/dxi_i)`,
    /// with fermionic factors multiplied on the left.
    pub fn apply_q(&self) -> SuperNumber {
        let n = self.n_sites;
        let mut out = SuperNumber::zero(n);
        for site in 1..=n {
            let dx = self.boson_derive(Var::x(site)).expect("site in range");
            let dy = self.boson_derive(Var::y(site)).expect("site in range");
            let deta = self.fermion_derive_left(FermionIndex::eta(site));
            let dxi = self.fermion_derive_left(FermionIndex::xi(site));
            let term = SuperNumber::xi(n, site).mul(&dx).expect("same engine")
                .add(&SuperNumber::eta(n, site).mul(&dy).expect("same engine"))
                .and_then(|t| t.add(&SuperNumber::x(n, site).mul(&deta).expect("same engine")))
                .and_then(|t| t.sub(&SuperNumber::y(n, site).mul(&dxi).expect("same engine")))
                .expect("same engine");
            out = out.add(&term).expect("same engine");
        }
        out
    }

    /// The generator of simultaneous rotation in the `(x_i, y_i)` and
    /// `(xi_i, eta_i)` planes; `Q` squares to it.
    pub fn rotation_generator(&self) -> SuperNumber {
        let n = self.n_sites;
        let mut out = SuperNumber::zero(n);
        for site in 1..=n {
            let dx = self.boson_derive(Var::x(site)).expect("site in range");
            let dy = self.boson_derive(Var::y(site)).expect("site in range");
            let deta = self.fermion_derive_left(FermionIndex::eta(site));
            let dxi = self.fermion_derive_left(FermionIndex::xi(site));
            let term = SuperNumber::x(n, site).mul(&dy).expect("same engine")
                .sub(&SuperNumber::y(n, site).mul(&dx).expect("same engine"))
                .and_then(|t| t.add(&SuperNumber::xi(n, site).mul(&deta).expect("same engine")))
                .and_then(|t| t.sub(&SuperNumber::eta(n, site).mul(&dxi).expect("same engine")))
                .expect("same engine");
            out = out.add(&term).expect("same engine");
        }
        out
    }

    /// `z_site = r + xi eta / r`, the terminating expansion of
    /// `sqrt(1 + x^2 + y^2 + 2 xi eta)`.
    pub fn build_z(n_sites: u32, site: u32) -> Self {
        let top = FermionMonomial::from_indices(&[FermionIndex::xi(site), FermionIndex::eta(site)])
            .expect("distinct generators");
        let mut z = SuperNumber::r(n_sites, site);
        z.insert(top, CoeffExpr::new(Poly::one(), Denom::r(site, 1)));
        z
    }

    /// `H_site = x^2 + y^2 + 2 xi eta`, the distinguished even variable.
    pub fn h_var(n_sites: u32, site: u32) -> Self {
        let x = SuperNumber::x(n_sites, site);
        let y = SuperNumber::y(n_sites, site);
        let xi = SuperNumber::xi(n_sites, site);
        let eta = SuperNumber::eta(n_sites, site);
        x.mul(&x).unwrap()
            .add(&y.mul(&y).unwrap()).unwrap()
            .add(&xi.mul(&eta).unwrap().scale_int(2)).unwrap()
    }

    /// `lambda_site = x eta - y xi`, a Q-potential for `H_site`.
    pub fn lambda(n_sites: u32, site: u32) -> Self {
        let x = SuperNumber::x(n_sites, site);
        let y = SuperNumber::y(n_sites, site);
        let xi = SuperNumber::xi(n_sites, site);
        let eta = SuperNumber::eta(n_sites, site);
        x.mul(&eta).unwrap().sub(&y.mul(&xi).unwrap()).unwrap()
    }

    /// `nu_site = -x y xi - y^2 eta`, a Q-potential for `xi lambda`.
    pub fn nu(n_sites: u32, site: u32) -> Self {
        let x = SuperNumber::x(n_sites, site);
        let y = SuperNumber::y(n_sites, site);
        let xi = SuperNumber::xi(n_sites, site);
        let eta = SuperNumber::eta(n_sites, site);
        let xy_xi = x.mul(&y).unwrap().mul(&xi).unwrap();
        let yy_eta = y.mul(&y).unwrap().mul(&eta).unwrap();
        xy_xi.neg().sub(&yy_eta).unwrap()
    }

    /// The super inner product
    /// `v_i . v_j = x_i x_j + y_i y_j - z_i z_j + xi_i eta_j + xi_j eta_i`.
    pub fn inner_product(n_sites: u32, i: u32, j: u32) -> Self {
        let term = |a: SuperNumber, b: SuperNumber| a.mul(&b).unwrap();
        let xx = term(SuperNumber::x(n_sites, i), SuperNumber::x(n_sites, j));
        let yy = term(SuperNumber::y(n_sites, i), SuperNumber::y(n_sites, j));
        let zz = term(SuperNumber::build_z(n_sites, i), SuperNumber::build_z(n_sites, j));
        let fe = term(SuperNumber::xi(n_sites, i), SuperNumber::eta(n_sites, j));
        let ef = term(SuperNumber::xi(n_sites, j), SuperNumber::eta(n_sites, i));
        xx.add(&yy).unwrap().sub(&zz).unwrap().add(&fe).unwrap().add(&ef).unwrap()
    }

    /// Exact inverse of an even supernumber with invertible body: the body
    /// is inverted in the coefficient field and the nilpotent remainder is
    /// summed as a terminating geometric series.
    pub fn invert_even(&self) -> Result<SuperNumber, AlgebraError> {
        match self.parity() {
            Some(Parity::Even) => {}
            _ => return Err(AlgebraError::NotEven),
        }
        let body = self.body();
        let body_inv = body.invert().map_err(AlgebraError::BodyNotInvertible)?;
        let body_inv_sn = SuperNumber::from_coeff(self.n_sites, body_inv);
        // a = b (1 + n b^{-1})  =>  a^{-1} = b^{-1} sum_k (-n b^{-1})^k
        let soul = self.soul();
        let m = soul.mul(&body_inv_sn).expect("same engine").neg();
        let mut series = SuperNumber::one(self.n_sites);
        let mut power = SuperNumber::one(self.n_sites);
        for _ in 0..self.n_sites {
            power = power.mul(&m).expect("same engine");
            if power.is_zero() {
                break;
            }
            series = series.add(&power).expect("same engine");
        }
        Ok(body_inv_sn.mul(&series).expect("same engine"))
    }

    /// `exp(a)` for a nilpotent even `a` (zero body): the Taylor series
    /// terminates after at most `n_sites` powers.
    pub fn exp_nilpotent(&self) -> Result<SuperNumber, AlgebraError> {
        match self.parity() {
            Some(Parity::Even) => {}
            _ => return Err(AlgebraError::NotEven),
        }
        if !self.body().is_zero() {
            return Err(AlgebraError::NotNilpotent);
        }
        let mut sum = SuperNumber::one(self.n_sites);
        let mut power = SuperNumber::one(self.n_sites);
        let mut factorial = BigRational::one();
        for k in 1..=self.n_sites {
            power = power.mul(self).expect("same engine");
            if power.is_zero() {
                break;
            }
            factorial *= BigRational::from(num::BigInt::from(k as i64));
            sum = sum.add(&power.scale(&factorial.recip())).expect("same engine");
        }
        Ok(sum)
    }
}

impl fmt::Display for SuperNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*{}", c, m)?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl std::ops::$trait for &SuperNumber {
            type Output = SuperNumber;
            fn $method(self, rhs: &SuperNumber) -> SuperNumber {
                self.$op(rhs).expect("supernumber operands share a site count")
            }
        }
        impl std::ops::$trait for SuperNumber {
            type Output = SuperNumber;
            fn $method(self, rhs: SuperNumber) -> SuperNumber {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for SuperNumber {
    type Output = SuperNumber;
    fn neg(self) -> SuperNumber {
        SuperNumber::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    #[test]
    fn additive_identity_and_inverse() {
        let xi1 = SuperNumber::xi(1, 1);
        assert_eq!(xi1.add(&SuperNumber::zero(1)).unwrap(), xi1);
        let prod = SuperNumber::xi(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap();
        let cancel = prod.add(&prod.scale_int(-1)).unwrap();
        assert!(cancel.is_zero());
    }

    #[test]
    fn scalar_terms_merge() {
        let x1 = SuperNumber::x(1, 1);
        let r1 = SuperNumber::r(1, 1);
        let s = x1.add(&r1).unwrap();
        assert_eq!(s.terms().count(), 1);
        let c = s.body();
        assert_eq!(c, CoeffExpr::from_poly(Poly::var(Var::x(1)) + Poly::var(Var::r(1))));
    }

    #[test]
    fn mul_anticommutes_and_is_nilpotent() {
        let xi = SuperNumber::xi(1, 1);
        let eta = SuperNumber::eta(1, 1);
        let a = xi.mul(&eta).unwrap();
        let b = eta.mul(&xi).unwrap();
        assert_eq!(a, b.neg());
        assert!(xi.mul(&xi).unwrap().is_zero());
    }

    #[test]
    fn site_mismatch_is_an_error() {
        let a = SuperNumber::x(1, 1);
        let b = SuperNumber::x(2, 1);
        assert_eq!(a.add(&b), Err(AlgebraError::SiteMismatch(1, 2)));
    }

    #[test]
    fn fermion_derivative_examples() {
        // d_xi1 (xi1 * F) = F for F independent of xi1
        let f = SuperNumber::x(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap();
        let a = SuperNumber::xi(1, 1).mul(&f).unwrap();
        assert_eq!(a.fermion_derive_left(FermionIndex::xi(1)), f);
        // d_xi1 eta1 = 0
        assert!(SuperNumber::eta(1, 1).fermion_derive_left(FermionIndex::xi(1)).is_zero());
        // d_eta1 (xi1 eta1) = -xi1
        let m = SuperNumber::xi(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap();
        assert_eq!(
            m.fermion_derive_left(FermionIndex::eta(1)),
            SuperNumber::xi(1, 1).neg()
        );
    }

    #[test]
    fn berezin_pair_examples() {
        let xi_eta = SuperNumber::xi(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap();
        assert_eq!(xi_eta.berezin_pair(1).unwrap(), SuperNumber::from_int(1, -1));
        // berezin(1 - w xi eta) = w  (top coefficient with one sign flip)
        let w = rat_int(5);
        let a = SuperNumber::one(1).sub(&xi_eta.scale(&w)).unwrap();
        assert_eq!(a.berezin_pair(1).unwrap(), SuperNumber::scalar(1, w));
        assert!(SuperNumber::one(1).berezin_pair(1).unwrap().is_zero());
    }

    #[test]
    fn q_on_basic_elements() {
        // Q(x1) = xi1
        assert_eq!(SuperNumber::x(1, 1).apply_q(), SuperNumber::xi(1, 1));
        // Q annihilates H
        assert!(SuperNumber::h_var(1, 1).apply_q().is_zero());
        // Q(lambda) = H
        assert_eq!(
            SuperNumber::lambda(1, 1).apply_q(),
            SuperNumber::h_var(1, 1)
        );
    }

    #[test]
    fn z_square_and_q_closedness() {
        let z = SuperNumber::build_z(1, 1);
        let z2 = z.mul(&z).unwrap();
        // z^2 = 1 + x^2 + y^2 + 2 xi eta
        let expect = SuperNumber::from_coeff(1, CoeffExpr::from_poly(Poly::r_squared(1)))
            .add(&SuperNumber::xi(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap().scale_int(2))
            .unwrap();
        assert_eq!(z2, expect);
        assert!(z.apply_q().is_zero());
        // body of z at x=y=0 is r, soul is xi eta / r
        assert_eq!(z.body(), CoeffExpr::var(Var::r(1)));
        assert_eq!(z.soul().terms().count(), 1);
    }

    #[test]
    fn invert_even_examples() {
        // (1 + z)^{-1} (1 + z) = 1
        let one_plus_z = SuperNumber::one(1).add(&SuperNumber::build_z(1, 1)).unwrap();
        let inv = one_plus_z.invert_even().unwrap();
        assert_eq!(inv.mul(&one_plus_z).unwrap(), SuperNumber::one(1));
        // (1 - w xi eta)^{-1} = 1 + w xi eta
        let xi_eta = SuperNumber::xi(1, 1).mul(&SuperNumber::eta(1, 1)).unwrap();
        let a = SuperNumber::one(1).sub(&xi_eta.scale(&rat_int(7))).unwrap();
        let expect = SuperNumber::one(1).add(&xi_eta.scale(&rat_int(7))).unwrap();
        assert_eq!(a.invert_even().unwrap(), expect);
        // zero body is a domain error
        assert_eq!(
            xi_eta.invert_even().unwrap_err(),
            AlgebraError::BodyNotInvertible(CoeffError::DivisionByZero)
        );
        // odd elements are rejected
        assert_eq!(
            SuperNumber::xi(1, 1).invert_even().unwrap_err(),
            AlgebraError::NotEven
        );
    }

    #[test]
    fn q_squares_to_rotation_generator() {
        let samples = [
            SuperNumber::x(2, 1),
            SuperNumber::xi(2, 2),
            SuperNumber::lambda(2, 1),
            SuperNumber::x(2, 1).mul(&SuperNumber::eta(2, 2)).unwrap(),
            SuperNumber::h_var(2, 2),
            SuperNumber::build_z(2, 1),
        ];
        for a in &samples {
            assert_eq!(a.apply_q().apply_q(), a.rotation_generator(), "sample {}", a);
        }
    }

    #[test]
    fn exp_nilpotent_truncates() {
        let n = 2;
        let x12 = SuperNumber::xi(n, 1).mul(&SuperNumber::eta(n, 2)).unwrap();
        let e = x12.exp_nilpotent().unwrap();
        // exp(xi1 eta2) = 1 + xi1 eta2 exactly
        assert_eq!(e, SuperNumber::one(n).add(&x12).unwrap());
        assert_eq!(
            SuperNumber::one(n).exp_nilpotent().unwrap_err(),
            AlgebraError::NotNilpotent
        );
    }
}
