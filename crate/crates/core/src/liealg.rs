//! Elements and brackets of the Witt algebra `W`, its subalgebras
//! `W_{>=-1}`, `W_{>=0}`, `W_{>=1}`, and the Virasoro algebra `Vir`.
//!
//! The bracket is `[f∂, g∂] = (fg' - f'g)∂`, extended on `Vir` by the central
//! cocycle `Res_0(f'g'' - f''g') z`.

use std::fmt;

use num::Zero;

use crate::exactalg::{parse_vir_terms, rational_to_string, FactoredPoly, LaurentPoly, Rational};
use crate::{Error, Result};

/// Which of the algebras an element lives in. The tag fixes the allowed
/// degree support of the coefficient polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum AlgebraTag {
    /// `k[t, t^-1]∂`: all integer degrees.
    W,
    /// `k[t]∂`: degrees >= 0.
    WGeqM1,
    /// `t k[t]∂`: coefficient divisible by `t`.
    WGeq0,
    /// `t^2 k[t]∂`: coefficient divisible by `t^2`.
    WGeq1,
    /// `W` plus the central line `k z`.
    Vir,
}

impl AlgebraTag {
    /// Minimal allowed degree of the coefficient polynomial, if bounded below.
    pub fn min_coeff_degree(self) -> Option<i64> {
        match self {
            AlgebraTag::W | AlgebraTag::Vir => None,
            AlgebraTag::WGeqM1 => Some(0),
            AlgebraTag::WGeq0 => Some(1),
            AlgebraTag::WGeq1 => Some(2),
        }
    }

    /// Whether `t^degree ∂` belongs to the algebra.
    pub fn admits_degree(self, degree: i64) -> bool {
        self.min_coeff_degree().is_none_or(|m| degree >= m)
    }

    pub fn is_central_extension(self) -> bool {
        self == AlgebraTag::Vir
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraTag::W => "W",
            AlgebraTag::WGeqM1 => "Wgeq-1",
            AlgebraTag::WGeq0 => "Wgeq0",
            AlgebraTag::WGeq1 => "Wgeq1",
            AlgebraTag::Vir => "Vir",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "W" => Ok(AlgebraTag::W),
            "Wgeq-1" => Ok(AlgebraTag::WGeqM1),
            "Wgeq0" => Ok(AlgebraTag::WGeq0),
            "Wgeq1" => Ok(AlgebraTag::WGeq1),
            "Vir" => Ok(AlgebraTag::Vir),
            other => Err(Error::parse(0, format!("unknown algebra tag `{}`", other))),
        }
    }
}

impl fmt::Display for AlgebraTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A vector field `f∂` plus a central coefficient, tagged with its algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VirElement {
    coeff: LaurentPoly,
    central: Rational,
    tag: AlgebraTag,
}

impl VirElement {
    pub fn new(coeff: LaurentPoly, central: Rational, tag: AlgebraTag) -> Result<Self> {
        if let Some(m) = tag.min_coeff_degree() {
            if let Some(d) = coeff.min_degree() {
                if d < m {
                    return Err(Error::UnsupportedDegree {
                        tag: tag.to_string(),
                        degree: d,
                    });
                }
            }
        }
        if !central.is_zero() && !tag.is_central_extension() {
            return Err(Error::NonzeroCentral);
        }
        Ok(VirElement { coeff, central, tag })
    }

    /// Pure vector field `f∂` with zero central part.
    pub fn field(coeff: LaurentPoly, tag: AlgebraTag) -> Result<Self> {
        VirElement::new(coeff, Rational::zero(), tag)
    }

    /// Basis field `e_i = t^(i+1)∂`.
    pub fn e(i: i64, tag: AlgebraTag) -> Result<Self> {
        VirElement::field(LaurentPoly::t_pow(i + 1), tag)
    }

    /// The central element `z` (tag `Vir`).
    pub fn z() -> Self {
        VirElement {
            coeff: LaurentPoly::zero(),
            central: num::One::one(),
            tag: AlgebraTag::Vir,
        }
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        VirElement {
            coeff: LaurentPoly::zero(),
            central: Rational::zero(),
            tag,
        }
    }

    /// Parses `3*t^-2 + t - 5/2` with an optional `+ c*z` part (Vir only).
    pub fn parse(s: &str, tag: AlgebraTag) -> Result<Self> {
        let (coeff, central) = parse_vir_terms(s)?;
        if !central.is_zero() && tag != AlgebraTag::Vir {
            return Err(Error::parse(0, "`z` only exists in Vir"));
        }
        VirElement::new(coeff, central, tag)
    }

    pub fn coeff(&self) -> &LaurentPoly {
        &self.coeff
    }

    pub fn central(&self) -> &Rational {
        &self.central
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() && self.central.is_zero()
    }

    pub fn add(&self, rhs: &VirElement) -> Result<VirElement> {
        self.require_same_tag(rhs)?;
        VirElement::new(&self.coeff + &rhs.coeff, &self.central + &rhs.central, self.tag)
    }

    pub fn scale(&self, c: &Rational) -> VirElement {
        VirElement {
            coeff: self.coeff.scale(c),
            central: &self.central * c,
            tag: self.tag,
        }
    }

    fn require_same_tag(&self, rhs: &VirElement) -> Result<()> {
        if self.tag != rhs.tag {
            return Err(Error::TagMismatch(format!(
                "{} vs {}",
                self.tag, rhs.tag
            )));
        }
        Ok(())
    }
}

impl fmt::Display for VirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.coeff.is_zero() {
            write!(f, "{}", self.coeff)?;
            if !self.central.is_zero() {
                use num::Signed;
                if self.central.is_negative() {
                    write!(f, " - {}*z", rational_to_string(&self.central.abs()))?;
                } else {
                    write!(f, " + {}*z", rational_to_string(&self.central))?;
                }
            }
            Ok(())
        } else {
            write!(f, "{}*z", rational_to_string(&self.central))
        }
    }
}

/// Witt bracket `[f∂, g∂] = (fg' - f'g)∂` on the centerless algebras.
pub fn witt_bracket(u: &VirElement, v: &VirElement) -> Result<VirElement> {
    u.require_same_tag(v)?;
    if u.tag == AlgebraTag::Vir {
        return Err(Error::TagMismatch(
            "witt_bracket is for the centerless algebras; use vir_bracket".into(),
        ));
    }
    VirElement::field(witt_field(&u.coeff, &v.coeff), u.tag)
}

/// Virasoro bracket: field part as for `W`, central part
/// `Res_0(f'g'' - f''g')`; `z` is central.
pub fn vir_bracket(u: &VirElement, v: &VirElement) -> Result<VirElement> {
    u.require_same_tag(v)?;
    if u.tag != AlgebraTag::Vir {
        return Err(Error::TagMismatch("vir_bracket requires tag Vir".into()));
    }
    let field = witt_field(&u.coeff, &v.coeff);
    let central = vir_cocycle(&u.coeff, &v.coeff);
    VirElement::new(field, central, AlgebraTag::Vir)
}

/// `(fg' - f'g)` on raw coefficient polynomials.
pub fn witt_field(f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    &(f * &g.derivative()) - &(&f.derivative() * g)
}

/// The Virasoro 2-cocycle `omega(f∂, g∂) = Res_0(f'g'' - f''g')`.
pub fn vir_cocycle(f: &LaurentPoly, g: &LaurentPoly) -> Rational {
    let fp = f.derivative();
    let gp = g.derivative();
    (&(&fp * &gp.derivative()) - &(&fp.derivative() * &gp)).residue0()
}

/// Membership of `u` in `W(f) = f k[t,t^-1]∂`: true iff the expanded `f`
/// divides the coefficient polynomial and the central part vanishes.
pub fn wf_membership(u: &VirElement, f: &FactoredPoly) -> bool {
    if !u.central.is_zero() {
        return false;
    }
    u.coeff.divisible_by(&f.expand())
}
