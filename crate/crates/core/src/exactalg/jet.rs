//! Truncated jets at a rational base point.
//!
//! A `Jet` holds the coefficients `c_0 .. c_N` of `(t-x)^0 .. (t-x)^N`,
//! representing a class mod `(t-x)^(N+1)`. Truncation orders are explicit:
//! binary operations require operands of equal order, so precision is never
//! promoted silently.
//!
//! Jets are generic over a coefficient [`Scalar`] so the same machinery runs
//! over the rationals and over dual numbers (`h^2 = 0`), which is how
//! infinitesimal group actions are differentiated exactly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::{rint, Rational};
use crate::{Error, Result};

/// Commutative-ring scalar for jet coefficients.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, when the element is a unit.
    fn invert(&self) -> Option<Self>;
    /// True when the element squares to zero. Composition allows a nilpotent
    /// constant term.
    fn is_nilpotent(&self) -> bool {
        self.is_zero()
    }
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn invert(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

/// Dual number `re + eps*h` with `h^2 = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Dual {
    pub re: Rational,
    pub eps: Rational,
}

impl Dual {
    pub fn new(re: Rational, eps: Rational) -> Self {
        Dual { re, eps }
    }

    pub fn constant(re: Rational) -> Self {
        Dual {
            re,
            eps: Rational::zero(),
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, rhs: Dual) -> Dual {
        Dual::new(self.re + rhs.re, self.eps + rhs.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, rhs: Dual) -> Dual {
        Dual::new(self.re - rhs.re, self.eps - rhs.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, rhs: Dual) -> Dual {
        let eps = &self.re * &rhs.eps + &self.eps * &rhs.re;
        Dual::new(self.re * rhs.re, eps)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Zero for Dual {
    fn zero() -> Self {
        Dual::constant(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.is_zero()
    }
}

impl One for Dual {
    fn one() -> Self {
        Dual::constant(Rational::one())
    }
}

impl Scalar for Dual {
    fn invert(&self) -> Option<Self> {
        if self.re.is_zero() {
            return None;
        }
        let inv = self.re.recip();
        let eps = -(&self.eps * &inv * &inv);
        Some(Dual::new(inv, eps))
    }
    fn is_nilpotent(&self) -> bool {
        self.re.is_zero()
    }
    fn from_rational(r: &Rational) -> Self {
        Dual::constant(r.clone())
    }
}

/// Truncated jet at base point `x`.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<K: Scalar = Rational> {
    base: Rational,
    /// Coefficients of `(t-x)^0 .. (t-x)^N`; length is `order + 1`.
    coeffs: Vec<K>,
}

impl<K: Scalar> Jet<K> {
    pub fn new(base: Rational, coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least the constant term");
        Jet { base, coeffs }
    }

    /// The zero jet of the given truncation order.
    pub fn zero(base: Rational, order: usize) -> Self {
        Jet::new(base, vec![K::zero(); order + 1])
    }

    /// Constant jet.
    pub fn constant(base: Rational, c: K, order: usize) -> Self {
        let mut coeffs = vec![K::zero(); order + 1];
        coeffs[0] = c;
        Jet::new(base, coeffs)
    }

    /// `(t-x)^k` as a jet, for `k <= order`.
    pub fn local_monomial(base: Rational, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree exceeds the truncation order");
        let mut coeffs = vec![K::zero(); order + 1];
        coeffs[k] = K::one();
        Jet::new(base, coeffs)
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(K::is_zero)
    }

    fn check_compatible(&self, rhs: &Self) {
        assert_eq!(self.base, rhs.base, "jets at different base points");
        assert_eq!(
            self.coeffs.len(),
            rhs.coeffs.len(),
            "jets of different truncation orders (no implicit promotion)"
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        Jet::new(
            self.base.clone(),
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        Jet::new(
            self.base.clone(),
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Jet::new(
            self.base.clone(),
            self.coeffs.iter().map(|a| -a.clone()).collect(),
        )
    }

    pub fn scale(&self, c: &K) -> Self {
        Jet::new(
            self.base.clone(),
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        )
    }

    /// Truncated product at the common order.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        let n = self.coeffs.len();
        let mut out = vec![K::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                let term = self.coeffs[i].clone() * rhs.coeffs[j].clone();
                let cur = std::mem::replace(&mut out[i + j], K::zero());
                out[i + j] = cur + term;
            }
        }
        Jet::new(self.base.clone(), out)
    }

    /// Derivative `d/dt`; the truncation order drops by one.
    pub fn derivative(&self) -> Self {
        let n = self.coeffs.len();
        assert!(n >= 2, "cannot differentiate an order-0 jet");
        let mut out = Vec::with_capacity(n - 1);
        for k in 1..n {
            out.push(self.coeffs[k].clone() * K::from_rational(&rint(k as i64)));
        }
        Jet::new(self.base.clone(), out)
    }

    /// Restriction to a smaller (or equal) truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order < self.coeffs.len(), "cannot extend a jet");
        Jet::new(self.base.clone(), self.coeffs[..=order].to_vec())
    }

    /// Multiplicative inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs[0]
            .invert()
            .ok_or_else(|| Error::NotInvertible("jet has non-unit constant term".into()))?;
        let n = self.coeffs.len();
        let mut out = vec![K::zero(); n];
        out[0] = a0.clone();
        for k in 1..n {
            let mut acc = K::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out[k] = (-acc) * a0.clone();
        }
        Ok(Jet::new(self.base.clone(), out))
    }

    /// Composition `self(sigma)` where `sigma` is a jet (in the same local
    /// coordinate) whose constant term is nilpotent.
    pub fn compose(&self, sigma: &Self) -> Result<Self> {
        self.check_compatible(sigma);
        if !sigma.coeffs[0].is_nilpotent() {
            return Err(Error::Domain(
                "jet composition needs a nilpotent constant term".into(),
            ));
        }
        // Horner evaluation in the truncated ring.
        let n = self.order();
        let mut acc = Jet::constant(self.base.clone(), self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(sigma);
            let cur = std::mem::replace(&mut acc.coeffs[0], K::zero());
            acc.coeffs[0] = cur + self.coeffs[k].clone();
        }
        Ok(acc)
    }
}

impl Jet<Rational> {
    /// Compositional inverse of a jet with zero constant term and unit linear
    /// term: returns `g` with `self(g) = (t-x)` mod `(t-x)^(N+1)`.
    pub fn reversion(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible(
                "reversion needs zero constant term".into(),
            ));
        }
        let c1 = self.coeffs[1]
            .invert()
            .ok_or_else(|| Error::NotInvertible("reversion needs a unit linear term".into()))?;
        let n = self.order();
        let mut g = Jet::zero(self.base.clone(), n);
        g.coeffs[1] = c1.clone();
        // Solve coefficient by coefficient: at each stage the first unknown
        // coefficient of g enters self(g) linearly through c1.
        for k in 2..=n {
            let comp = self.compose(&g).expect("zero constant term");
            let defect = comp.coeffs[k].clone();
            g.coeffs[k] = -(defect * &c1);
        }
        Ok(g)
    }

    /// Evaluates the dual pairing with a local functional's coefficient
    /// vector: `sum_k alpha_k * k! * c_k`.
    pub fn pair_local(&self, alphas: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (k, a) in alphas.iter().enumerate() {
            if k >= self.coeffs.len() {
                break;
            }
            acc += a * &super::factorial(k) * &self.coeffs[k];
        }
        acc
    }

    /// Lifts to dual-number coefficients.
    pub fn to_dual(&self) -> Jet<Dual> {
        Jet::new(
            self.base.clone(),
            self.coeffs.iter().map(|c| Dual::constant(c.clone())).collect(),
        )
    }
}
