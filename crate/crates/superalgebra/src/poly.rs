//! Multivariate polynomials over the exact rationals in the bosonic
//! variables `x_i`, `y_i` and the radical generators `r_i`, reduced modulo
//! the site relations `r_i^2 = 1 + x_i^2 + y_i^2`.
//!
//! Canonical form: every monomial carries an `r_i`-exponent of at most one
//! per site (higher powers are expanded through the relation on
//! construction), coefficients are exact [`BigRational`]s, and zero terms
//! are never stored. Equality of canonical forms is structural equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

/// Bosonic variable species at a site.
///
/// `R` is the radical `r_i`, the body of `z_i = sqrt(1 + x_i^2 + y_i^2 + 2 xi_i eta_i)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum VarKind {
    X,
    Y,
    R,
}

/// A bosonic variable: species plus 1-based site index.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Var {
    pub site: u32,
    pub kind: VarKind,
}

impl Var {
    pub fn x(site: u32) -> Self {
        Var { site, kind: VarKind::X }
    }
    pub fn y(site: u32) -> Self {
        Var { site, kind: VarKind::Y }
    }
    pub fn r(site: u32) -> Self {
        Var { site, kind: VarKind::R }
    }
}

// Order variables by site first so that all generators of one site are
// adjacent: x1 < y1 < r1 < x2 < ...
impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.site, self.kind).cmp(&(other.site, other.kind))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::X => "x",
            VarKind::Y => "y",
            VarKind::R => "r",
        };
        write!(f, "{}{}", k, self.site)
    }
}

/// A power product of bosonic variables.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(BTreeMap::from([(v, e)]))
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    /// Raw product of exponent vectors. May violate the r-degree cap; the
    /// caller is responsible for reduction.
    fn mul_raw(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            *m.entry(*v).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// Divide by `other`, failing if any exponent would go negative.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut m = self.0.clone();
        for (v, e) in &other.0 {
            let cur = m.get_mut(v)?;
            if *cur < *e {
                return None;
            }
            *cur -= e;
            if *cur == 0 {
                m.remove(v);
            }
        }
        Some(Monomial(m))
    }

    fn with_exponent(&self, v: Var, e: u32) -> Self {
        let mut m = self.0.clone();
        if e == 0 {
            m.remove(&v);
        } else {
            m.insert(v, e);
        }
        Monomial(m)
    }
}

// Graded lexicographic order: total degree first, then exponents compared
// variable by variable. Compatible with multiplication and has 1 as the
// least element, which is what the division algorithm needs.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => {
                    // Smaller variable id means higher precedence in lex.
                    match va.cmp(vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        },
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{}", v)?;
            } else {
                write!(f, "{}^{}", v, e)?;
            }
        }
        Ok(())
    }
}

/// A polynomial in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        Poly::from_term(Monomial::var(v), BigRational::one())
    }

    /// Build a single-term polynomial, expanding any `r_i^k` with `k >= 2`
    /// through `r_i^2 = 1 + x_i^2 + y_i^2`.
    pub fn from_term(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        // Find a site whose r-exponent exceeds 1.
        let excess = m
            .vars()
            .find(|(v, e)| v.kind == VarKind::R && *e >= 2)
            .map(|(v, e)| (v, e));
        match excess {
            None => {
                let mut p = Poly::default();
                p.terms.insert(m, c);
                p
            }
            Some((v, e)) => {
                let stripped = m.with_exponent(v, e % 2);
                let base = Poly::from_term(stripped, c);
                let rel = Poly::one()
                    + Poly::from_term(Monomial::var_pow(Var::x(v.site), 2), BigRational::one())
                    + Poly::from_term(Monomial::var_pow(Var::y(v.site), 2), BigRational::one());
                base * rel.pow(e / 2)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Does any monomial mention an `r` variable?
    pub fn mentions_r(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.vars().any(|(v, _)| v.kind == VarKind::R))
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut p = Poly::default();
        for (m, a) in &self.terms {
            p.terms.insert(m.clone(), a * c);
        }
        p
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact division. Returns `None` when `self` is not a polynomial
    /// multiple of `divisor`. A single divisor is its own Groebner basis,
    /// so a nonzero remainder at any step certifies non-divisibility.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_m, lead_c) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let tm = m.try_div(lead_m)?;
            let tc = c / lead_c;
            let m_owned = tm.clone();
            quot.add_term(m_owned.clone(), tc.clone());
            // rem -= (tc * m_owned) * divisor
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul_raw(&m_owned), -(dc * &tc));
            }
        }
        Some(quot)
    }

    /// Split by the exponent of `r_site`: returns `(a, b)` with
    /// `self = a + b * r_site` and neither part mentioning `r_site`.
    pub fn split_r(&self, site: u32) -> (Poly, Poly) {
        let rv = Var::r(site);
        let mut a = Poly::default();
        let mut b = Poly::default();
        for (m, c) in &self.terms {
            match m.exponent(rv) {
                0 => a.add_term(m.clone(), c.clone()),
                1 => b.add_term(m.with_exponent(rv, 0), c.clone()),
                _ => unreachable!("canonical form keeps r-degree at most 1"),
            }
        }
        (a, b)
    }

    /// Partial derivative treating `x`, `y`, `r` as independent symbols.
    /// The chain rule through `r` is handled one layer up where the
    /// coefficient field with denominators is available.
    pub fn derive_raw(&self, v: Var) -> Poly {
        let mut p = Poly::default();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                p.add_term(m.with_exponent(v, e - 1), c * BigRational::from(BigInt::from(e)));
            }
        }
        p
    }

    /// `1 + x_site^2 + y_site^2`, the square of `r_site`.
    pub fn r_squared(site: u32) -> Poly {
        Poly::one()
            + Poly::from_term(Monomial::var_pow(Var::x(site), 2), BigRational::one())
            + Poly::from_term(Monomial::var_pow(Var::y(site), 2), BigRational::one())
    }

    /// `x_site^2 + y_site^2`, i.e. `r_site^2 - 1`.
    pub fn r_squared_minus_one(site: u32) -> Poly {
        Poly::from_term(Monomial::var_pow(Var::x(site), 2), BigRational::one())
            + Poly::from_term(Monomial::var_pow(Var::y(site), 2), BigRational::one())
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let mut out = self;
        for (m, c) in rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl std::ops::Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        let mut out = self;
        for (m, c) in rhs.terms {
            out.add_term(m, -c);
        }
        out
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let mut out = Poly::default();
        for (m, c) in self.terms {
            out.terms.insert(m, -c);
        }
        out
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let raw = ma.mul_raw(mb);
                // Reduction may fan a single product out into several terms.
                out = out + Poly::from_term(raw, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_square_reduces() {
        let r1 = Poly::var(Var::r(1));
        let sq = &r1 * &r1;
        assert_eq!(sq, Poly::r_squared(1));
    }

    #[test]
    fn r_cube_reduces_to_degree_one() {
        let r1 = Poly::var(Var::r(1));
        let cube = &(&r1 * &r1) * &r1;
        let expected = &Poly::r_squared(1) * &r1;
        assert_eq!(cube, expected);
        assert!(!cube
            .terms()
            .any(|(m, _)| m.exponent(Var::r(1)) > 1));
    }

    #[test]
    fn distinct_sites_do_not_interact() {
        let r1 = Poly::var(Var::r(1));
        let r2 = Poly::var(Var::r(2));
        let p = &r1 * &r2;
        assert_eq!(p.n_terms(), 1);
    }

    #[test]
    fn div_exact_recovers_factor() {
        let x = Poly::var(Var::x(1));
        let y = Poly::var(Var::y(1));
        let d = Poly::r_squared(1);
        let q = x.clone() * y.clone() + Poly::one();
        let p = &q * &d;
        assert_eq!(p.div_exact(&d), Some(q));
        // x*y + 1 is not divisible by x^2+y^2+1
        let nd = (x * y + Poly::one()).div_exact(&d);
        assert!(nd.is_none());
    }

    #[test]
    fn div_exact_r_squared_identity() {
        // (1+x^2+y^2) / (1+x^2+y^2) = 1
        let d = Poly::r_squared(3);
        assert_eq!(d.div_exact(&d), Some(Poly::one()));
    }

    #[test]
    fn derive_raw_power_rule() {
        let x = Var::x(1);
        let p = Poly::from_term(Monomial::var_pow(x, 3), rat_int(2));
        let d = p.derive_raw(x);
        assert_eq!(d, Poly::from_term(Monomial::var_pow(x, 2), rat_int(6)));
    }

    #[test]
    fn display_is_deterministic() {
        let p = Poly::var(Var::x(1)) + Poly::constant(rat(1, 2))
            - Poly::from_term(Monomial::var_pow(Var::y(2), 2), rat_int(3));
        assert_eq!(format!("{}", p), "-3*y2^2 + x1 + 1/2");
    }
}
