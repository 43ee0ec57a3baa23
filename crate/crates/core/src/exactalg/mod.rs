//! Exact rational, Laurent-polynomial, factored-polynomial, and truncated-jet
//! arithmetic. Everything here is exact: no rounding occurs anywhere in the
//! crate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

mod jet;
mod parse;

pub use jet::{Dual, Jet, Scalar};
pub use parse::{parse_laurent, parse_rational, parse_vir_terms};

/// Arbitrary-precision rational number, always in reduced form with a
/// positive denominator.
pub type Rational = BigRational;

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `k!` as a [`Rational`].
pub fn factorial(k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient `C(n, k)` for integer `n` (possibly negative), as used
/// in truncated binomial series.
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(n - j);
    }
    Rational::from_integer(num) / factorial(k as usize)
}

/// Renders a rational exactly: `5`, `-5`, `3/4`, `-3/4`.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact Laurent polynomial in `t` with rational coefficients.
///
/// Stored as a degree -> coefficient map with no zero coefficients, so equal
/// polynomials have identical representations.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, rint(1))
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::monomial(0, c)
    }

    /// `c * t^k`.
    pub fn monomial(k: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { terms }
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> Self {
        LaurentPoly::monomial(k, rint(1))
    }

    /// `t - x`.
    pub fn t_minus(x: &Rational) -> Self {
        let mut p = LaurentPoly::t_pow(1);
        p.add_term(0, -x.clone());
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, k: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Rational)> {
        self.terms.iter()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when no negative powers of `t` occur.
    pub fn is_polynomial(&self) -> bool {
        self.min_degree().is_none_or(|d| d >= 0)
    }

    pub fn derivative(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&k, c) in &self.terms {
            if k != 0 {
                out.add_term(k - 1, c * rint(k));
            }
        }
        out
    }

    /// Coefficient of `t^-1`: the algebraic residue at 0.
    pub fn residue0(&self) -> Rational {
        self.coeff(-1)
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn mul_t_pow(&self, shift: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k + shift, v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Evaluates at a rational point. `x = 0` is rejected when negative
    /// degrees are present.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if x.is_zero() && self.min_degree().is_some_and(|d| d < 0) {
            return Err(Error::PoleAtBasePoint);
        }
        let mut acc = Rational::zero();
        for (&k, c) in &self.terms {
            acc += c * rational_pow(x, k)?;
        }
        Ok(acc)
    }

    /// Taylor jet at `x` to order `n`: coefficients of `(t-x)^0 .. (t-x)^n`,
    /// i.e. `c_k = p^(k)(x) / k!`, exactly.
    pub fn taylor_jet(&self, x: &Rational, n: usize) -> Result<Jet<Rational>> {
        if x.is_zero() && self.min_degree().is_some_and(|d| d < 0) {
            return Err(Error::PoleAtBasePoint);
        }
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (&k, c) in &self.terms {
            // (x + u)^k truncated binomially; valid for negative k since x != 0.
            for (j, slot) in coeffs.iter_mut().enumerate() {
                let b = binomial(k, j as u32);
                if b.is_zero() {
                    // only for 0 <= k < j, where the whole term vanishes
                    continue;
                }
                *slot += c * b * rational_pow(x, k - j as i64)?;
            }
        }
        Ok(Jet::new(x.clone(), coeffs))
    }

    /// Exact divisibility by a nonzero Laurent polynomial.
    pub fn divisible_by(&self, d: &LaurentPoly) -> bool {
        self.div_exact(d).is_some()
    }

    /// Exact quotient `self / d`, or `None` if division leaves a remainder.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // Shift both to honest polynomials with nonzero constant term.
        let s_min = self.min_degree().unwrap();
        let d_min = d.min_degree().unwrap();
        let num = self.mul_t_pow(-s_min);
        let den = d.mul_t_pow(-d_min);
        let (q, r) = poly_div_rem(&num, &den);
        if r.is_zero() {
            Some(q.mul_t_pow(s_min - d_min))
        } else {
            None
        }
    }
}

/// Long division of honest polynomials (nonnegative degrees): `(q, r)` with
/// `num = q*den + r` and `deg r < deg den`.
fn poly_div_rem(num: &LaurentPoly, den: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    debug_assert!(num.is_polynomial() && den.is_polynomial());
    let dd = den.max_degree().expect("nonzero divisor");
    let lead = den.coeff(dd);
    let mut rem = num.clone();
    let mut quo = LaurentPoly::zero();
    while let Some(rd) = rem.max_degree() {
        if rd < dd {
            break;
        }
        let c = rem.coeff(rd) / &lead;
        let shift = rd - dd;
        quo.add_term(shift, c.clone());
        let sub = den.mul_t_pow(shift).scale(&c);
        rem = &rem - &sub;
    }
    (quo, rem)
}

/// `x^k` for integer `k`; `x = 0` with `k < 0` is a pole error.
pub fn rational_pow(x: &Rational, k: i64) -> Result<Rational> {
    if k == 0 {
        return Ok(Rational::one());
    }
    if x.is_zero() {
        return if k > 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::PoleAtBasePoint)
        };
    }
    let mut acc = Rational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= x;
    }
    if k < 0 {
        acc = acc.recip();
    }
    Ok(acc)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&k1, c1) in &self.terms {
            for (&k2, c2) in &rhs.terms {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
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
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{}", rational_to_string(&mag))?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{}*t", rational_to_string(&mag))?,
                (_, true) => write!(f, "t^{}", k)?,
                (_, false) => write!(f, "{}*t^{}", rational_to_string(&mag), k)?,
            }
        }
        Ok(())
    }
}

/// `Res_0(f * (a*b' - a'*b))`: the skew-symmetric residue pairing attached
/// to `f`.
pub fn skew_residue_form(a: &LaurentPoly, b: &LaurentPoly, f: &LaurentPoly) -> Rational {
    let inner = &(a * &b.derivative()) - &(&a.derivative() * b);
    (f * &inner).residue0()
}

/// Polynomial kept in factored form: `scalar * t^t_power * prod (t - x_i)^a_i`
/// with pairwise distinct roots.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactoredPoly {
    scalar: Rational,
    /// Sorted by root; multiplicities are positive.
    factors: Vec<(Rational, u32)>,
    t_power: i64,
}

impl FactoredPoly {
    /// Builds a factored polynomial, merging duplicate roots.
    pub fn new(
        scalar: Rational,
        roots: impl IntoIterator<Item = (Rational, u32)>,
        t_power: i64,
    ) -> Result<Self> {
        let mut map: BTreeMap<Rational, u32> = BTreeMap::new();
        for (x, a) in roots {
            if a == 0 {
                continue;
            }
            if x.is_zero() {
                // A root at 0 is a t-power; fold it in.
                return Err(Error::Domain(
                    "root at 0 must be given as the t-power, not as a root".into(),
                ));
            }
            *map.entry(x).or_insert(0) += a;
        }
        Ok(FactoredPoly {
            scalar,
            factors: map.into_iter().collect(),
            t_power,
        })
    }

    /// Monic squarefree-by-construction product `prod (t - x_i)`.
    pub fn from_roots(roots: impl IntoIterator<Item = Rational>) -> Result<Self> {
        FactoredPoly::new(rint(1), roots.into_iter().map(|x| (x, 1)), 0)
    }

    pub fn one() -> Self {
        FactoredPoly {
            scalar: rint(1),
            factors: Vec::new(),
            t_power: 0,
        }
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn factors(&self) -> &[(Rational, u32)] {
        &self.factors
    }

    pub fn t_power(&self) -> i64 {
        self.t_power
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Degree of the expanded polynomial (counting the t-power).
    pub fn degree(&self) -> i64 {
        self.t_power + self.factors.iter().map(|&(_, a)| a as i64).sum::<i64>()
    }

    /// Multiplicity of `x` as a root.
    pub fn multiplicity(&self, x: &Rational) -> u32 {
        if x.is_zero() {
            return self.t_power.max(0) as u32;
        }
        self.factors
            .iter()
            .find(|(r, _)| r == x)
            .map_or(0, |&(_, a)| a)
    }

    /// The radical: same nonzero roots, all multiplicities 1, leading scalar 1,
    /// and no t-power.
    pub fn radical(&self) -> FactoredPoly {
        FactoredPoly {
            scalar: rint(1),
            factors: self.factors.iter().map(|(x, _)| (x.clone(), 1)).collect(),
            t_power: 0,
        }
    }

    /// Exact expansion to a [`LaurentPoly`].
    pub fn expand(&self) -> LaurentPoly {
        let mut out = LaurentPoly::monomial(self.t_power, self.scalar.clone());
        for (x, a) in &self.factors {
            let lin = LaurentPoly::t_minus(x);
            for _ in 0..*a {
                out = &out * &lin;
            }
        }
        out
    }

    /// All monic divisors built from the nonzero roots (t-power and scalar
    /// dropped), in weakly increasing degree order.
    pub fn monic_divisors(&self) -> Vec<FactoredPoly> {
        let mut divs: Vec<Vec<(Rational, u32)>> = vec![Vec::new()];
        for (x, a) in &self.factors {
            let mut next = Vec::new();
            for d in &divs {
                for e in 0..=*a {
                    let mut d2 = d.clone();
                    if e > 0 {
                        d2.push((x.clone(), e));
                    }
                    next.push(d2);
                }
            }
            divs = next;
        }
        let mut out: Vec<FactoredPoly> = divs
            .into_iter()
            .map(|factors| FactoredPoly {
                scalar: rint(1),
                factors,
                t_power: 0,
            })
            .collect();
        out.sort_by_key(|f| f.degree());
        out
    }
}

impl fmt::Display for FactoredPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        if !self.scalar.is_one() {
            write!(f, "{}", rational_to_string(&self.scalar))?;
            wrote = true;
        }
        if self.t_power != 0 {
            if wrote {
                write!(f, "*")?;
            }
            if self.t_power == 1 {
                write!(f, "t")?;
            } else {
                write!(f, "t^{}", self.t_power)?;
            }
            wrote = true;
        }
        for (x, a) in &self.factors {
            if wrote {
                write!(f, "*")?;
            }
            let lin = if x.is_negative() {
                format!("(t+{})", rational_to_string(&x.abs()))
            } else {
                format!("(t-{})", rational_to_string(x))
            };
            if *a == 1 {
                write!(f, "{}", lin)?;
            } else {
                write!(f, "{}^{}", lin, a)?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests;
