//! Coefficients of supernumbers: fractions of reduced polynomials whose
//! denominators are monomials in the radicals `r_i` and the shifted
//! radicals `1 + r_i`. These are the only inversions the one-point ladder
//! and its relatives need, and restricting to them keeps canonical forms
//! decidable: both `r_i` and `1 + r_i` are prime in the coefficient ring,
//! so a fully cancelled fraction with a monic denominator is unique.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, Zero};
use thiserror::Error;

use crate::poly::{Poly, Var, VarKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("coefficient is not invertible: numerator {0} is not a unit")]
    NotInvertible(String),
    #[error("division by zero coefficient")]
    DivisionByZero,
}

/// Per-site denominator exponents for `r_i^r_exp * (1 + r_i)^one_plus_r_exp`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct DenomExp {
    pub r_exp: u32,
    pub one_plus_r_exp: u32,
}

impl DenomExp {
    fn is_trivial(&self) -> bool {
        self.r_exp == 0 && self.one_plus_r_exp == 0
    }
}

/// A denominator monomial `prod_i r_i^{a_i} (1 + r_i)^{b_i}`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Denom(BTreeMap<u32, DenomExp>);

impl Denom {
    pub fn one() -> Self {
        Denom::default()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn r(site: u32, e: u32) -> Self {
        let mut d = Denom::default();
        if e > 0 {
            d.0.insert(site, DenomExp { r_exp: e, one_plus_r_exp: 0 });
        }
        d
    }

    pub fn one_plus_r(site: u32, e: u32) -> Self {
        let mut d = Denom::default();
        if e > 0 {
            d.0.insert(site, DenomExp { r_exp: 0, one_plus_r_exp: e });
        }
        d
    }

    pub fn exponents(&self, site: u32) -> DenomExp {
        self.0.get(&site).copied().unwrap_or_default()
    }

    pub fn sites(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    fn mul(&self, other: &Denom) -> Denom {
        let mut out = self.clone();
        for (site, e) in &other.0 {
            let entry = out.0.entry(*site).or_default();
            entry.r_exp += e.r_exp;
            entry.one_plus_r_exp += e.one_plus_r_exp;
        }
        out
    }

    fn set(&mut self, site: u32, e: DenomExp) {
        if e.is_trivial() {
            self.0.remove(&site);
        } else {
            self.0.insert(site, e);
        }
    }

    /// Least common multiple, taking the max exponent per prime factor.
    fn lcm(&self, other: &Denom) -> Denom {
        let mut out = self.clone();
        for (site, e) in &other.0 {
            let entry = out.0.entry(*site).or_default();
            entry.r_exp = entry.r_exp.max(e.r_exp);
            entry.one_plus_r_exp = entry.one_plus_r_exp.max(e.one_plus_r_exp);
        }
        out
    }

    /// The cofactor `lcm / self` as an expanded polynomial.
    fn cofactor_poly(&self, lcm: &Denom) -> Poly {
        let mut p = Poly::one();
        for (site, le) in &lcm.0 {
            let se = self.exponents(*site);
            let dr = le.r_exp - se.r_exp;
            let dp = le.one_plus_r_exp - se.one_plus_r_exp;
            if dr > 0 {
                p = p * Poly::var(Var::r(*site)).pow(dr);
            }
            if dp > 0 {
                p = p * (Poly::one() + Poly::var(Var::r(*site))).pow(dp);
            }
        }
        p
    }

    /// Expand the whole denominator into a polynomial.
    pub fn expand(&self) -> Poly {
        Denom::one().cofactor_poly(self)
    }
}

impl fmt::Display for Denom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (site, e) in &self.0 {
            for (label, exp) in [("r", e.r_exp), ("(1+r", e.one_plus_r_exp)] {
                if exp == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let close = if label.starts_with('(') { ")" } else { "" };
                if exp == 1 {
                    write!(f, "{}{}{}", label, site, close)?;
                } else {
                    write!(f, "{}{}{}^{}", label, site, close, exp)?;
                }
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// A fully cancelled fraction `num / den`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoeffExpr {
    num: Poly,
    den: Denom,
}

/// Divide `p` by `r_site` inside the reduced ring, if possible.
///
/// Writing `p = a + b r` with `a, b` free of `r_site`, divisibility by `r`
/// means `(1 + x^2 + y^2) | a`, and then `p / r = b + (a / (1+x^2+y^2)) r`.
fn div_poly_by_r(p: &Poly, site: u32) -> Option<Poly> {
    let (a, b) = p.split_r(site);
    let a_over = a.div_exact(&Poly::r_squared(site))?;
    Some(b + a_over * Poly::var(Var::r(site)))
}

/// Divide `p` by `1 + r_site` inside the reduced ring, if possible.
///
/// With `p = a + b r`, the quotient `c + d r` must satisfy `d = (a - b) /
/// (x^2 + y^2)` and `c = b - d`.
fn div_poly_by_one_plus_r(p: &Poly, site: u32) -> Option<Poly> {
    let (a, b) = p.split_r(site);
    let d = (a - b.clone()).div_exact(&Poly::r_squared_minus_one(site))?;
    Some((b - d.clone()) + d * Poly::var(Var::r(site)))
}

impl CoeffExpr {
    pub fn zero() -> Self {
        CoeffExpr { num: Poly::zero(), den: Denom::one() }
    }

    pub fn one() -> Self {
        CoeffExpr { num: Poly::one(), den: Denom::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        CoeffExpr { num: p, den: Denom::one() }
    }

    pub fn from_rational(c: BigRational) -> Self {
        CoeffExpr::from_poly(Poly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        CoeffExpr::from_poly(Poly::var(v))
    }

    /// Build `num / den` and cancel.
    pub fn new(num: Poly, den: Denom) -> Self {
        let mut c = CoeffExpr { num, den };
        c.cancel();
        c
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den = Denom::one();
            return;
        }
        let sites: Vec<u32> = self.den.sites().collect();
        for site in sites {
            let mut e = self.den.exponents(site);
            while e.r_exp > 0 {
                match div_poly_by_r(&self.num, site) {
                    Some(q) => {
                        self.num = q;
                        e.r_exp -= 1;
                    }
                    None => break,
                }
            }
            while e.one_plus_r_exp > 0 {
                match div_poly_by_one_plus_r(&self.num, site) {
                    Some(q) => {
                        self.num = q;
                        e.one_plus_r_exp -= 1;
                    }
                    None => break,
                }
            }
            self.den.set(site, e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Denom {
        &self.den
    }

    /// True when the coefficient is a plain polynomial in `x`, `y` only.
    pub fn is_xy_polynomial(&self) -> bool {
        self.den.is_one() && !self.num.mentions_r()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return CoeffExpr::zero();
        }
        CoeffExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Exact inverse. The numerator must be a unit, i.e. a rational
    /// multiple of a monomial in `r_i` and `(1 + r_i)`.
    pub fn invert(&self) -> Result<CoeffExpr, CoeffError> {
        if self.num.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        // Factor the numerator into c * prod r^a (1+r)^b * rest, rest == const.
        let sites: Vec<u32> = {
            let mut s: Vec<u32> = self
                .num
                .terms()
                .flat_map(|(m, _)| m.vars().map(|(v, _)| v.site).collect::<Vec<_>>())
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let mut rest = self.num.clone();
        let mut new_den = Denom::one();
        for site in sites {
            let mut e = DenomExp::default();
            while let Some(q) = div_poly_by_r(&rest, site) {
                rest = q;
                e.r_exp += 1;
            }
            while let Some(q) = div_poly_by_one_plus_r(&rest, site) {
                rest = q;
                e.one_plus_r_exp += 1;
            }
            new_den.set(site, e);
        }
        match rest.as_constant() {
            Some(c) if !c.is_zero() => {
                let num = self.den.expand().scale(&c.recip());
                Ok(CoeffExpr::new(num, new_den))
            }
            _ => Err(CoeffError::NotInvertible(format!("{}", self.num))),
        }
    }

    /// Partial derivative with respect to an `x` or `y` variable, with the
    /// chain rule `dr/dx = x/r`, `dr/dy = y/r` applied throughout.
    pub fn derive(&self, v: Var) -> CoeffExpr {
        assert!(
            v.kind != VarKind::R,
            "derivatives are taken in x and y only"
        );
        // d(num)/D  -  (num/D) * dD/D
        let dnum = poly_derive(&self.num, v);
        let dnum_over_d = dnum * CoeffExpr::new(Poly::one(), self.den.clone());
        let e = self.den.exponents(v.site);
        if e.is_trivial() {
            return dnum_over_d;
        }
        // dD/D = a * v/r^2 + b * v/(r (1+r)) at the site of v.
        let site = v.site;
        let mut dlog = CoeffExpr::zero();
        if e.r_exp > 0 {
            let term = CoeffExpr::new(
                Poly::var(v).scale(&BigRational::from(num::BigInt::from(e.r_exp))),
                Denom::r(site, 2),
            );
            dlog = dlog + term;
        }
        if e.one_plus_r_exp > 0 {
            let term = CoeffExpr::new(
                Poly::var(v).scale(&BigRational::from(num::BigInt::from(e.one_plus_r_exp))),
                Denom::r(site, 1).mul(&Denom::one_plus_r(site, 1)),
            );
            dlog = dlog + term;
        }
        dnum_over_d - self.clone() * dlog
    }
}

/// Derivative of a reduced polynomial, which may leave the polynomial ring
/// through the `x/r` chain-rule factor.
fn poly_derive(p: &Poly, v: Var) -> CoeffExpr {
    // Direct part: differentiate the explicit exponent of v.
    let direct = CoeffExpr::from_poly(p.derive_raw(v));
    // Chain part: for each term with r_site present, d(r)/dv = v/r.
    let rv = Var::r(v.site);
    let dr = p.derive_raw(rv);
    if dr.is_zero() {
        return direct;
    }
    let chain = CoeffExpr::new(dr * Poly::var(v), Denom::r(v.site, 1));
    direct + chain
}

impl std::ops::Add for CoeffExpr {
    type Output = CoeffExpr;
    fn add(self, rhs: CoeffExpr) -> CoeffExpr {
        let lcm = self.den.lcm(&rhs.den);
        let left = self.num * self.den.cofactor_poly(&lcm);
        let right = rhs.num * rhs.den.cofactor_poly(&lcm);
        CoeffExpr::new(left + right, lcm)
    }
}

impl std::ops::Sub for CoeffExpr {
    type Output = CoeffExpr;
    fn sub(self, rhs: CoeffExpr) -> CoeffExpr {
        self + (-rhs)
    }
}

impl std::ops::Neg for CoeffExpr {
    type Output = CoeffExpr;
    fn neg(self) -> CoeffExpr {
        CoeffExpr { num: -self.num, den: self.den }
    }
}

impl std::ops::Mul for CoeffExpr {
    type Output = CoeffExpr;
    fn mul(self, rhs: CoeffExpr) -> CoeffExpr {
        CoeffExpr::new(self.num * rhs.num, self.den.mul(&rhs.den))
    }
}

impl fmt::Display for CoeffExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else if self.num.n_terms() > 1 {
            write!(f, "({})/({})", self.num, self.den)
        } else {
            write!(f, "{}/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    fn r(site: u32) -> Poly {
        Poly::var(Var::r(site))
    }

    #[test]
    fn cancellation_r_over_r() {
        let c = CoeffExpr::new(r(1), Denom::r(1, 1));
        assert_eq!(c, CoeffExpr::one());
    }

    #[test]
    fn cancellation_r_squared_over_r() {
        // (1 + x^2 + y^2)/r = r
        let c = CoeffExpr::new(Poly::r_squared(1), Denom::r(1, 2));
        assert_eq!(c, CoeffExpr::one());
        let c2 = CoeffExpr::new(Poly::r_squared(1), Denom::r(1, 1));
        assert_eq!(c2, CoeffExpr::from_poly(r(1)));
    }

    #[test]
    fn cancellation_one_plus_r() {
        // (1 + r)^2 / (1 + r) = 1 + r
        let p = (Poly::one() + r(2)).pow(2);
        let c = CoeffExpr::new(p, Denom::one_plus_r(2, 1));
        assert_eq!(c, CoeffExpr::from_poly(Poly::one() + r(2)));
    }

    #[test]
    fn addition_common_denominator() {
        // 1/r + 1/(1+r) = (1 + 2r)/(r(1+r))
        let a = CoeffExpr::new(Poly::one(), Denom::r(1, 1));
        let b = CoeffExpr::new(Poly::one(), Denom::one_plus_r(1, 1));
        let s = a.clone() + b;
        let expect_num = Poly::one() + r(1).scale(&rat_int(2));
        assert_eq!(s.num(), &expect_num);
        // and subtracting a gets b back
        let back = s - a;
        assert_eq!(back, CoeffExpr::new(Poly::one(), Denom::one_plus_r(1, 1)));
    }

    #[test]
    fn invert_monomial_unit() {
        // (2 r1 (1+r1)^2)^{-1}
        let p = r(1).scale(&rat_int(2)) * (Poly::one() + r(1)).pow(2);
        let c = CoeffExpr::from_poly(p.clone());
        let inv = c.clone().invert().unwrap();
        assert_eq!(c * inv, CoeffExpr::one());
    }

    #[test]
    fn invert_non_unit_fails() {
        let c = CoeffExpr::var(Var::x(1));
        assert!(c.invert().is_err());
    }

    #[test]
    fn derive_r_chain_rule() {
        // d r / d x = x / r
        let c = CoeffExpr::from_poly(r(1));
        let d = c.derive(Var::x(1));
        assert_eq!(d, CoeffExpr::new(Poly::var(Var::x(1)), Denom::r(1, 1)));
    }

    #[test]
    fn derive_inverse_r() {
        // d (1/r) / d y = -y / r^3
        let c = CoeffExpr::new(Poly::one(), Denom::r(1, 1));
        let d = c.derive(Var::y(1));
        let expect = CoeffExpr::new(Poly::var(Var::y(1)).scale(&rat_int(-1)), Denom::r(1, 3));
        assert_eq!(d, expect);
    }

    #[test]
    fn derive_quotient_one_plus_r() {
        // d (x/(1+r)) / dx = 1/(1+r) - x^2/(r (1+r)^2)
        let c = CoeffExpr::new(Poly::var(Var::x(1)), Denom::one_plus_r(1, 1));
        let d = c.derive(Var::x(1));
        let expect = CoeffExpr::new(Poly::one(), Denom::one_plus_r(1, 1))
            - CoeffExpr::new(
                Poly::from_term(crate::poly::Monomial::var_pow(Var::x(1), 2), rat(1, 1)),
                Denom::r(1, 1).mul(&Denom::one_plus_r(1, 2)),
            );
        assert_eq!(d, expect);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let c = CoeffExpr::from_rational(rat(7, 3));
        assert!(c.derive(Var::x(2)).is_zero());
    }
}
