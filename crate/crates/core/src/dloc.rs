//! Formal local diffeomorphisms and shifts acting on local functionals:
//! the staircase canonical-form reduction, orbit invariants, pseudo-orbit
//! equality, orbit dimension, and closure comparison.
//!
//! A diffeomorphism `t -> s(t)` with `s(x) = x`, `s'(x) != 0` acts on vector
//! fields by `f∂ -> (f∘s) (1/s') ∂` and on functionals by precomposition:
//! `(g·chi)(v) = chi(g(v))`. On the dual basis `e_i(x)^*` this is triangular,
//! which drives the staircase elimination.

use std::fmt;

use num::{Signed, Zero};

use crate::exactalg::{factorial, rint, Dual, Jet, LaurentPoly, Rational, Scalar};
use crate::liealg::AlgebraTag;
use crate::localfn::{point_floor, LocalFunction, OnePointLocal};
use crate::{Error, Result};

/// A formal local diffeomorphism at `x`, truncated: the jet of `s` with
/// `s(x) = x` and `s'(x) != 0`.
#[derive(Clone, PartialEq, Debug)]
pub struct DLocElement {
    x: Rational,
    /// Local part `sigma = s - x`: zero constant term, unit linear term.
    sigma: Jet<Rational>,
}

impl DLocElement {
    /// Builds from the jet of `s` itself (constant term `x`).
    pub fn new(x: Rational, s: Jet<Rational>) -> Result<Self> {
        if s.base() != &x {
            return Err(Error::Domain("jet based at a different point".into()));
        }
        if s.coeff(0) != x {
            return Err(Error::Domain("s(x) = x is required".into()));
        }
        if s.coeff(1).is_zero() {
            return Err(Error::NotInvertible("s'(x) = 0".into()));
        }
        let mut coeffs = s.coeffs().to_vec();
        coeffs[0] = Rational::zero();
        Ok(DLocElement {
            x: x.clone(),
            sigma: Jet::new(x, coeffs),
        })
    }

    /// Builds directly from the local part `sigma = s - x` (zero constant
    /// term, unit linear term).
    pub fn from_sigma(x: Rational, sigma: Jet<Rational>) -> Result<Self> {
        if !sigma.coeff(0).is_zero() {
            return Err(Error::Domain("sigma must have zero constant term".into()));
        }
        if sigma.coeff(1).is_zero() {
            return Err(Error::NotInvertible("s'(x) = 0".into()));
        }
        Ok(DLocElement { x, sigma })
    }

    /// The identity at `x`, truncated at `order`.
    pub fn identity(x: Rational, order: usize) -> Self {
        DLocElement {
            x: x.clone(),
            sigma: Jet::local_monomial(x, 1, order),
        }
    }

    /// Dilation `t-x -> lambda (t-x)`.
    pub fn dilation(x: Rational, lambda: Rational, order: usize) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::NotInvertible("zero dilation".into()));
        }
        let sigma = Jet::local_monomial(x.clone(), 1, order).scale(&lambda);
        Ok(DLocElement { x, sigma })
    }

    /// Unipotent step `t -> t + alpha (t-x)^(j+1)`, `j >= 1`.
    pub fn unipotent(x: Rational, j: usize, alpha: Rational, order: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::Domain("unipotent steps need j >= 1".into()));
        }
        if j + 1 > order {
            return Err(Error::TruncationTooSmall {
                need: j + 1,
                got: order,
            });
        }
        let mut sigma = Jet::local_monomial(x.clone(), 1, order);
        sigma = sigma.add(&Jet::local_monomial(x.clone(), j + 1, order).scale(&alpha));
        Ok(DLocElement { x, sigma })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    /// Local part `s - x`.
    pub fn sigma(&self) -> &Jet<Rational> {
        &self.sigma
    }

    /// Jet of `s` itself (constant term `x`).
    pub fn jet(&self) -> Jet<Rational> {
        let mut coeffs = self.sigma.coeffs().to_vec();
        coeffs[0] = self.x.clone();
        Jet::new(self.x.clone(), coeffs)
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.sigma.order()
    }

    /// Composition: `compose(g, h)` is the element with `s = s_g ∘ s_h`, so
    /// that acting satisfies `act(compose(g, h), chi) = act(g, act(h, chi))`.
    pub fn compose(g: &DLocElement, h: &DLocElement) -> Result<DLocElement> {
        if g.x != h.x {
            return Err(Error::Domain("composition at different base points".into()));
        }
        let sigma = g.sigma.compose(&h.sigma)?;
        DLocElement::from_sigma(g.x.clone(), sigma)
    }

    /// Group inverse by compositional reversion of the jet.
    pub fn inverse(&self) -> Result<DLocElement> {
        DLocElement::from_sigma(self.x.clone(), self.sigma.reversion()?)
    }
}

impl fmt::Display for DLocElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t -> x")?;
        for (k, c) in self.sigma.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = crate::exactalg::rational_to_string(&c.abs());
            if c.is_negative() {
                write!(f, " - {}*u^{}", s, k)?;
            } else {
                write!(f, " + {}*u^{}", s, k)?;
            }
        }
        write!(f, "  (u = t - x, x = {})", crate::exactalg::rational_to_string(&self.x))
    }
}

/// Translation of the base point: `chi_{x; ...} -> chi_{x+z; ...}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShiftElement {
    z: Rational,
}

impl ShiftElement {
    pub fn new(z: Rational) -> Self {
        ShiftElement { z }
    }

    pub fn z(&self) -> &Rational {
        &self.z
    }

    pub fn apply(&self, chi: &LocalFunction) -> Result<LocalFunction> {
        shift(chi, &self.z)
    }
}

/// Applies a field jet through `g`: `f∂ -> (f∘s) (1/s') ∂`, exactly, at the
/// truncation order of `f`. Needs `g` truncated at least one order higher.
pub fn act_on_field(g: &DLocElement, f: &Jet<Rational>) -> Result<Jet<Rational>> {
    if f.base() != &g.x {
        return Err(Error::Domain("field jet based at a different point".into()));
    }
    let n = f.order();
    if g.order() < n + 1 {
        return Err(Error::TruncationTooSmall {
            need: n + 1,
            got: g.order(),
        });
    }
    act_field_generic(&g.sigma.truncate(n + 1), f)
}

/// Scalar-generic core of the field action. `sigma` is the local part at
/// order `n + 1`; `f` has order `n`.
fn act_field_generic<K: Scalar>(sigma: &Jet<K>, f: &Jet<K>) -> Result<Jet<K>> {
    let n = f.order();
    debug_assert_eq!(sigma.order(), n + 1);
    let sp = sigma.derivative(); // order n
    let composed = f.compose(&sigma.truncate(n))?;
    Ok(composed.mul(&sp.invert()?))
}

/// Dual coordinates of the pullback `chi ∘ g` on `e_floor^* .. e_top^*`,
/// generic over the scalar so the same code differentiates dual-number
/// families. `alphas` are the functional's coefficients; all field jets are
/// computed at the working order `work` (so `top + 1 <= work` must hold) and
/// `sigma` must have order `work + 1`.
fn pullback_dual_coords<K: Scalar>(
    sigma: &Jet<K>,
    alphas: &[Rational],
    floor: i64,
    top: i64,
    work: usize,
) -> Result<Vec<K>> {
    debug_assert!(top < work as i64 && sigma.order() == work + 1);
    let sigma_w = sigma.truncate(work);
    let sp_inv = sigma.derivative().invert()?; // order `work`
    let mut out = Vec::new();
    for i in floor..=top {
        // e_i = (t-x)^(i+1) ∂ as a jet of order `work`.
        let f: Jet<K> = Jet::local_monomial(sigma.base().clone(), (i + 1) as usize, work);
        let image = f.compose(&sigma_w)?.mul(&sp_inv);
        // (g·chi)(e_i) = sum_k alpha_k k! * image_k
        let mut acc = K::zero();
        for (k, a) in alphas.iter().enumerate() {
            let w = K::from_rational(&(a * &factorial(k)));
            acc = acc + w * image.coeff(k);
        }
        out.push(acc);
    }
    Ok(out)
}

/// The dual action on a one-point functional: evaluates `chi` on the images
/// of the window basis fields and re-expresses the result in dual
/// coordinates. Exact; the order is preserved.
pub fn act_on_local(
    g: &DLocElement,
    chi: &OnePointLocal,
    tag: AlgebraTag,
) -> Result<OnePointLocal> {
    if chi.x() != &g.x {
        return Err(Error::Domain(
            "diffeomorphism and functional based at different points".into(),
        ));
    }
    let n = chi.order();
    if g.order() < n + 1 {
        return Err(Error::TruncationTooSmall {
            need: n + 1,
            got: g.order(),
        });
    }
    let floor = point_floor(tag, chi.x());
    let sigma = g.sigma.truncate(n + 1);
    let coords = pullback_dual_coords(&sigma, chi.coeffs(), floor, n as i64 - 1, n)?;
    // Rebuild alpha coefficients; indices below the floor are zero.
    let mut full = vec![Rational::zero(); (floor + 1) as usize];
    full.extend(coords);
    OnePointLocal::from_dual_coords(chi.x().clone(), &full)
}

/// Infinitesimal action `xi_s · chi` computed with dual numbers (`h^2 = 0`):
/// the derivative at `h = 0` of the pullback along `t -> t + h s`. Returns
/// dual coordinates on `e_floor^* .. e_n^*`.
pub fn xi_action(s: &LaurentPoly, chi: &OnePointLocal, tag: AlgebraTag) -> Result<Vec<Rational>> {
    let n = chi.order() as i64;
    let floor = point_floor(tag, chi.x());
    let work = (n + 1) as usize;
    // sigma = u + h * jet(s), u = t - x; constant term h*s(x) is nilpotent.
    let s_jet = s.taylor_jet(chi.x(), work + 1)?;
    let mut coeffs: Vec<Dual> = s_jet
        .coeffs()
        .iter()
        .map(|c| Dual::new(Rational::zero(), c.clone()))
        .collect();
    coeffs[1].re = rint(1);
    let sigma: Jet<Dual> = Jet::new(chi.x().clone(), coeffs);
    let coords = pullback_dual_coords(&sigma, chi.coeffs(), floor, n, work)?;
    Ok(coords.into_iter().map(|d| d.eps).collect())
}

/// The coadjoint route for the same quantity: `(s∂·chi)(e_i) = chi([s∂, e_i])`
/// computed in Laurent arithmetic. Independent of the jet machinery.
pub fn xi_action_coadjoint(
    s: &LaurentPoly,
    chi: &OnePointLocal,
    tag: AlgebraTag,
) -> Result<Vec<Rational>> {
    let n = chi.order() as i64;
    let floor = point_floor(tag, chi.x());
    let mut out = Vec::new();
    for i in floor..=n {
        let e_i = LaurentPoly::t_minus(chi.x()).pow((i + 1) as u32);
        let bracket = crate::liealg::witt_field(s, &e_i);
        out.push(chi.eval_poly(&bracket)?);
    }
    Ok(out)
}

/// Parity case of a canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityCase {
    /// Even order: `c e_{n-1}^*`.
    Even,
    /// Odd order `n > 1`: `c e_{n-1}^* + b e_{(n-1)/2}^*`.
    Odd,
    /// Order 1 (or 0): a single dual coefficient survives.
    OrderOne,
}

/// Result of the staircase reduction, with the group element that achieves
/// it. No dilation normalization is performed: the leading coefficient is
/// kept and quotiented algebraically in the orbit invariant.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub order: usize,
    pub case: ParityCase,
    /// Coefficient of `e_{n-1}^*`.
    pub leading: Rational,
    /// Coefficient of `e_{(n-1)/2}^*` (odd `n > 1` only).
    pub middle: Option<Rational>,
    /// Applying this to the input reproduces the canonical form exactly.
    pub witness: DLocElement,
}

impl CanonicalForm {
    /// The canonical form as a functional.
    pub fn functional(&self, x: Rational) -> Result<OnePointLocal> {
        let n = self.order;
        let mut coords = vec![Rational::zero(); n + 1]; // e_{-1}^* .. e_{n-1}^*
        coords[n] = self.leading.clone();
        if let Some(b) = &self.middle {
            let k = (n - 1) / 2;
            coords[k + 1] = b.clone();
        }
        OnePointLocal::from_dual_coords(x, &coords)
    }
}

/// Staircase elimination: walking `j = 1, 2, ...`, each unipotent step
/// `t -> t + alpha_j (t-x)^(j+1)` cancels the dual coefficient at index
/// `n-1-j` by an exact linear solve (the obstruction index `j = (n-1)/2` of
/// odd orders is skipped), and the steps compose into the witness.
pub fn canonicalize(chi: &OnePointLocal, tag: AlgebraTag) -> Result<CanonicalForm> {
    let n = chi.order();
    let x = chi.x().clone();
    let floor = point_floor(tag, &x);
    let trunc = n + 2;
    let mut witness = DLocElement::identity(x.clone(), trunc);
    let mut current = chi.clone();

    let obstruction = if n % 2 == 1 { Some((n - 1) / 2) } else { None };
    let leading = current.dual_coords()[n].clone(); // index n <-> e_{n-1}^*

    let max_j = (n as i64 - 1 - floor).max(0) as usize;
    for j in 1..=max_j {
        if obstruction == Some(j) {
            continue;
        }
        let target = n as i64 - 1 - j as i64; // e_target^*
        let coords = current.dual_coords();
        let slot = (target + 1) as usize; // alpha-index = e-index + 1
        let d_t = coords.get(slot).cloned().unwrap_or_else(Rational::zero);
        if d_t.is_zero() {
            continue;
        }
        // New coefficient at the target is d_t + alpha (n-1-2j) c, exactly.
        let denom = rint(n as i64 - 1 - 2 * j as i64) * &leading;
        let alpha = -(d_t / denom);
        let step = DLocElement::unipotent(x.clone(), j, alpha, trunc)?;
        current = act_on_local(&step, &current, tag)?;
        witness = DLocElement::compose(&step, &witness)?;
        debug_assert!(current.dual_coords()[slot].is_zero());
    }

    let coords = current.dual_coords();
    debug_assert_eq!(coords[n], leading);
    let (case, middle) = if n == 1 {
        (ParityCase::OrderOne, None)
    } else if n.is_multiple_of(2) {
        (ParityCase::Even, None)
    } else {
        let k = (n - 1) / 2;
        (ParityCase::Odd, Some(coords[k + 1].clone()))
    };
    // Everything below the leading index is cancelled except the middle slot
    // and the indices below the floor (which never existed).
    #[cfg(debug_assertions)]
    for (slot, c) in coords.iter().enumerate().take(n) {
        let e_index = slot as i64 - 1;
        let is_middle = middle.is_some() && e_index == ((n - 1) / 2) as i64;
        if e_index >= floor && !is_middle {
            debug_assert!(c.is_zero(), "slot {} not cancelled", slot);
        }
    }

    Ok(CanonicalForm {
        order: n,
        case,
        leading,
        middle,
        witness,
    })
}

/// The per-component pseudo-orbit invariant.
///
/// Movable components (any base point for `W`/`W_{>=-1}`/`Vir`, nonzero base
/// points otherwise) carry: the order; for order <= 1 the exact coefficient
/// `b_1 = alpha_1` (zero for order 0, matching the `J(gamma)` family); for
/// odd order `n > 1` the dilation-invariant `b^2/c`; for even order nothing
/// beyond the order.
///
/// Components pinned at `x = 0`:
/// * `W_{>=0}`: the full diffeomorphism group at 0 still acts (its dilation
///   direction `t∂` lies in the algebra), so the same reduction applies, only
///   without shifts — the component is matched separately.
/// * `W_{>=1}`: only the unipotent part is available (`t∂` is outside the
///   algebra, and the dilation *group* orbit is strictly larger than the
///   coadjoint leaf), so the canonical coefficients `c` (and `b` for odd
///   order) are exact invariants.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ComponentInvariant {
    /// Movable, order <= 1: the value `alpha_1` (0 for order-0 components).
    Gamma { b1: Rational },
    /// Movable, even order n >= 2.
    Even { n: usize },
    /// Movable, odd order n >= 3.
    Odd { n: usize, b_sq_over_c: Rational },
    /// `W_{>=0}` at 0, order 1.
    AtZeroGamma { b1: Rational },
    /// `W_{>=0}` at 0, even order.
    AtZeroEven { n: usize },
    /// `W_{>=0}` at 0, odd order n >= 3.
    AtZeroOdd { n: usize, b_sq_over_c: Rational },
    /// `W_{>=1}` at 0, even order: unipotent invariant (n, c).
    AtZeroUnipEven { n: usize, c: Rational },
    /// `W_{>=1}` at 0, odd order: unipotent invariant (n, c, b).
    AtZeroUnipOdd { n: usize, c: Rational, b: Rational },
}

/// Complete invariant of the pseudo-orbit (in the algebraically closed
/// sense): the multiset of per-component invariants, with `x = 0` components
/// of `W_{>=0}`/`W_{>=1}` marked and therefore matched separately.
///
/// This is the descriptor of the associated Poisson primitive ideal: the
/// order partition is recoverable from the component kinds, and the rational
/// values attached to the odd/order-one parts are the coordinates of the
/// point in the affine parameter space of that partition's orbits.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitInvariant {
    pub tag: AlgebraTag,
    /// Sorted; a canonical multiset representation.
    pub components: Vec<ComponentInvariant>,
}

fn component_invariant(
    p: &OnePointLocal,
    tag: AlgebraTag,
) -> Result<ComponentInvariant> {
    let n = p.order();
    let at_zero = p.x().is_zero() && matches!(tag, AlgebraTag::WGeq0 | AlgebraTag::WGeq1);
    if !at_zero {
        return Ok(match n {
            0 => ComponentInvariant::Gamma { b1: Rational::zero() },
            1 => ComponentInvariant::Gamma {
                b1: p.coeffs()[1].clone(),
            },
            n if n % 2 == 0 => ComponentInvariant::Even { n },
            _ => {
                let cf = canonicalize(p, tag)?;
                let b = cf.middle.expect("odd order > 1 has a middle slot");
                ComponentInvariant::Odd {
                    n,
                    b_sq_over_c: &b * &b / cf.leading,
                }
            }
        });
    }
    match tag {
        AlgebraTag::WGeq0 => Ok(match n {
            // order 0 at x = 0 cannot occur (alpha_0 is normalized away)
            1 => ComponentInvariant::AtZeroGamma {
                b1: p.coeffs()[1].clone(),
            },
            n if n % 2 == 0 => ComponentInvariant::AtZeroEven { n },
            _ => {
                let cf = canonicalize(p, tag)?;
                let b = cf.middle.expect("odd order > 1 has a middle slot");
                ComponentInvariant::AtZeroOdd {
                    n,
                    b_sq_over_c: &b * &b / cf.leading,
                }
            }
        }),
        AlgebraTag::WGeq1 => {
            let cf = canonicalize(p, tag)?;
            if n.is_multiple_of(2) {
                Ok(ComponentInvariant::AtZeroUnipEven { n, c: cf.leading })
            } else {
                Ok(ComponentInvariant::AtZeroUnipOdd {
                    n,
                    c: cf.leading,
                    b: cf.middle.unwrap_or_else(Rational::zero),
                })
            }
        }
        _ => unreachable!("at_zero only for WGeq0/WGeq1"),
    }
}

/// The complete pseudo-orbit invariant of a nonzero local function.
pub fn orbit_invariant(chi: &LocalFunction) -> Result<OrbitInvariant> {
    if chi.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let mut components = chi
        .points()
        .iter()
        .map(|p| component_invariant(p, chi.tag()))
        .collect::<Result<Vec<_>>>()?;
    components.sort();
    Ok(OrbitInvariant {
        tag: chi.tag(),
        components,
    })
}

/// Pseudo-orbit equality: equal tags and matching multisets of component
/// invariants. Base points are not invariants (shifts move them); the
/// `x = 0` component of `W_{>=0}`/`W_{>=1}` is matched separately through
/// its marked invariant.
pub fn orbit_equal(chi1: &LocalFunction, chi2: &LocalFunction) -> Result<bool> {
    if chi1.tag() != chi2.tag() {
        return Err(Error::TagMismatch(format!(
            "{} vs {}",
            chi1.tag(),
            chi2.tag()
        )));
    }
    match (chi1.is_zero(), chi2.is_zero()) {
        (true, true) => return Ok(true),
        (true, false) | (false, true) => return Ok(false),
        _ => {}
    }
    Ok(orbit_invariant(chi1)? == orbit_invariant(chi2)?)
}

/// Dimension of the pseudo-orbit: `2 floor((m+2)/2)` per component, with the
/// `x = 0` components of `W_{>=0}` (no shift direction) contributing 2 less
/// and of `W_{>=1}` (unipotent leaf only) 4 less. Always equals the rank of
/// `B_chi`.
pub fn orbit_dim(chi: &LocalFunction) -> usize {
    chi.points()
        .iter()
        .map(|p| {
            let m = p.order();
            let movable = 2 * ((m + 2) / 2);
            if p.x().is_zero() {
                match chi.tag() {
                    AlgebraTag::WGeq0 => movable - 2,
                    AlgebraTag::WGeq1 => movable - 4,
                    _ => movable,
                }
            } else {
                movable
            }
        })
        .sum()
}

/// Dimension of the diffeomorphism-group orbit of a one-point functional at
/// a movable base point: `n + 1` for even `n`, `n` for odd `n > 1`, `1` for
/// `n <= 1`.
fn dloc_orbit_dim(n: usize) -> usize {
    if n <= 1 {
        1
    } else if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

/// Closure order for one-point functionals at the same base point (tags `W`
/// and `W_{>=-1}`): true iff the orbit of `lo` lies strictly inside the
/// closure of the orbit of `hi`, which happens exactly when the group-orbit
/// dimensions compare strictly.
pub fn closure_less(lo: &OnePointLocal, hi: &OnePointLocal, tag: AlgebraTag) -> Result<bool> {
    if !matches!(tag, AlgebraTag::W | AlgebraTag::WGeqM1) {
        return Err(Error::TagMismatch(
            "closure comparison is defined for W and Wgeq-1".into(),
        ));
    }
    if lo.x() != hi.x() {
        return Err(Error::Domain(
            "closure comparison needs equal base points".into(),
        ));
    }
    Ok(dloc_orbit_dim(lo.order()) < dloc_orbit_dim(hi.order()))
}

/// Translation of all base points by `z`; coefficients are unchanged.
/// Rejected for `W`/`Vir` when a point would land on 0, and for
/// `W_{>=0}`/`W_{>=1}` altogether (shifts do not preserve them).
pub fn shift(chi: &LocalFunction, z: &Rational) -> Result<LocalFunction> {
    match chi.tag() {
        AlgebraTag::WGeq0 | AlgebraTag::WGeq1 => {
            return Err(Error::UnsupportedShift(format!(
                "shifts do not act on {}",
                chi.tag()
            )));
        }
        AlgebraTag::W | AlgebraTag::Vir => {
            for p in chi.points() {
                if (p.x() + z).is_zero() {
                    return Err(Error::ForbiddenBasePoint(
                        "shift would move a base point to 0".into(),
                    ));
                }
            }
        }
        AlgebraTag::WGeqM1 => {}
    }
    LocalFunction::new(
        chi.tag(),
        chi.points()
            .iter()
            .map(|p| (p.x() + z, p.coeffs().to_vec())),
        Rational::zero(),
    )
}

#[cfg(test)]
pub(crate) mod tests;
