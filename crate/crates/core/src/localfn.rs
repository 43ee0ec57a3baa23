//! Local functionals on the Witt-family algebras: finite sums of one-point
//! evaluations `f∂ -> alpha_0 f(x) + ... + alpha_n f^(n)(x)`, the alternating
//! form `B_chi(u, v) = chi([u, v])` with its rank and isotropy, order
//! partitions, and minimal-linear-recurrence detection for sequences.

use std::collections::BTreeMap;

use num::Zero;
use serde_json::{json, Value};

use crate::exactalg::{
    factorial, parse_rational, rational_to_string, Jet, LaurentPoly, Rational,
};
use crate::liealg::{witt_field, AlgebraTag, VirElement};
use crate::matq;
use crate::{Error, Result};

/// A one-point functional `chi_{x; alpha_0..alpha_n}`; the trailing
/// coefficient is nonzero, so `n = coeffs.len() - 1` is the order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OnePointLocal {
    x: Rational,
    coeffs: Vec<Rational>,
}

impl OnePointLocal {
    pub fn new(x: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroFunctional);
        }
        Ok(OnePointLocal { x, coeffs })
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    /// Coefficients `alpha_0 .. alpha_n` with `alpha_n != 0`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluation on a raw coefficient polynomial (no tag checks).
    pub fn eval_poly(&self, f: &LaurentPoly) -> Result<Rational> {
        let jet = f.taylor_jet(&self.x, self.order())?;
        Ok(jet.pair_local(&self.coeffs))
    }

    /// Evaluation on a jet of a vector field at the same base point.
    pub fn eval_jet(&self, f: &Jet<Rational>) -> Rational {
        assert_eq!(f.base(), &self.x, "jet based at a different point");
        f.pair_local(&self.coeffs)
    }

    /// Dual coordinates against `e_i(x)^* = (f -> f^(i+1)(x)/(i+1)!)`:
    /// the coefficient of `e_i^*` is `alpha_{i+1} (i+1)!` for `i = -1..n-1`.
    pub fn dual_coords(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a * &factorial(k))
            .collect()
    }

    /// Rebuilds from dual coordinates (index `i = -1` first).
    pub fn from_dual_coords(x: Rational, coords: &[Rational]) -> Result<Self> {
        let coeffs = coords
            .iter()
            .enumerate()
            .map(|(k, c)| c / &factorial(k))
            .collect();
        OnePointLocal::new(x, coeffs)
    }
}

/// A local function: a finite sum of one-point functionals at pairwise
/// distinct base points, all living on the algebra `tag`. The central value
/// is zero for every local function (a nonzero one is rejected).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalFunction {
    tag: AlgebraTag,
    /// Sorted by base point.
    points: Vec<OnePointLocal>,
}

impl LocalFunction {
    /// Builds the unique normal form: merges equal base points, strips zero
    /// components, sorts, and applies the tag normalizations at `x = 0`.
    pub fn new(
        tag: AlgebraTag,
        points: impl IntoIterator<Item = (Rational, Vec<Rational>)>,
        central: Rational,
    ) -> Result<Self> {
        if !central.is_zero() {
            return Err(Error::NonzeroCentral);
        }
        let mut merged: BTreeMap<Rational, Vec<Rational>> = BTreeMap::new();
        for (x, coeffs) in points {
            let slot = merged.entry(x).or_default();
            if slot.len() < coeffs.len() {
                slot.resize(coeffs.len(), Rational::zero());
            }
            for (k, c) in coeffs.into_iter().enumerate() {
                slot[k] += c;
            }
        }
        let mut out = Vec::new();
        for (x, mut coeffs) in merged {
            if x.is_zero() {
                match tag {
                    AlgebraTag::W | AlgebraTag::Vir => {
                        return Err(Error::ForbiddenBasePoint(
                            "base point 0 is not allowed for W/Vir".into(),
                        ));
                    }
                    // chi_{0;a} = 0 on t k[t]∂ and chi_{0;a,b} = 0 on t^2 k[t]∂.
                    AlgebraTag::WGeq0 => {
                        if !coeffs.is_empty() {
                            coeffs[0] = Rational::zero();
                        }
                    }
                    AlgebraTag::WGeq1 => {
                        for slot in coeffs.iter_mut().take(2) {
                            *slot = Rational::zero();
                        }
                    }
                    AlgebraTag::WGeqM1 => {}
                }
            }
            match OnePointLocal::new(x, coeffs) {
                Ok(p) => out.push(p),
                Err(Error::ZeroFunctional) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(LocalFunction { tag, points: out })
    }

    pub fn zero(tag: AlgebraTag) -> Self {
        LocalFunction {
            tag,
            points: Vec::new(),
        }
    }

    /// One-point constructor.
    pub fn one_point(tag: AlgebraTag, x: Rational, coeffs: Vec<Rational>) -> Result<Self> {
        LocalFunction::new(tag, [(x, coeffs)], Rational::zero())
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn points(&self) -> &[OnePointLocal] {
        &self.points
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }

    pub fn add(&self, rhs: &LocalFunction) -> Result<LocalFunction> {
        if self.tag != rhs.tag {
            return Err(Error::TagMismatch(format!("{} vs {}", self.tag, rhs.tag)));
        }
        LocalFunction::new(
            self.tag,
            self.points
                .iter()
                .chain(&rhs.points)
                .map(|p| (p.x.clone(), p.coeffs.clone())),
            Rational::zero(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Result<LocalFunction> {
        LocalFunction::new(
            self.tag,
            self.points
                .iter()
                .map(|p| (p.x.clone(), p.coeffs.iter().map(|a| a * c).collect())),
            Rational::zero(),
        )
    }

    /// Largest component order; `None` for the zero functional.
    pub fn order(&self) -> Option<usize> {
        self.points.iter().map(OnePointLocal::order).max()
    }

    /// Evaluation on a raw coefficient polynomial (no tag checks). The
    /// central part of an element pairs to zero.
    pub fn eval_poly(&self, f: &LaurentPoly) -> Result<Rational> {
        let mut acc = Rational::zero();
        for p in &self.points {
            acc += p.eval_poly(f)?;
        }
        Ok(acc)
    }
}

/// Evaluation `chi(u)` with tag compatibility enforced.
pub fn eval_local(chi: &LocalFunction, u: &VirElement) -> Result<Rational> {
    if chi.tag != u.tag() {
        return Err(Error::TagMismatch(format!("{} vs {}", chi.tag, u.tag())));
    }
    // z pairs to 0 on local functions.
    chi.eval_poly(u.coeff())
}

/// The alternating form `B_chi(u, v) = chi([u, v])`.
pub fn b_chi(chi: &LocalFunction, u: &VirElement, v: &VirElement) -> Result<Rational> {
    if u.tag() != v.tag() {
        return Err(Error::TagMismatch(format!("{} vs {}", u.tag(), v.tag())));
    }
    if chi.tag != u.tag() {
        return Err(Error::TagMismatch(format!("{} vs {}", chi.tag, u.tag())));
    }
    // The central cocycle pairs to zero against a local function, so the
    // field-part bracket suffices for every tag including Vir.
    chi.eval_poly(&witt_field(u.coeff(), v.coeff()))
}

/// Smallest dual-basis index at a base point: `-1` away from 0, and at 0 the
/// constraint index of the tag (`0` for `W_{>=0}`, `1` for `W_{>=1}`).
pub(crate) fn point_floor(tag: AlgebraTag, x: &Rational) -> i64 {
    if !x.is_zero() {
        return -1;
    }
    match tag {
        AlgebraTag::WGeq0 => 0,
        AlgebraTag::WGeq1 => 1,
        // W/Vir reject x = 0; W_{>=-1} has the full window.
        _ => -1,
    }
}

/// Gram matrix of `B_chi` restricted to the shifted basis
/// `(t-x)^(i+1)∂, i in [floor, n+1]`, for the single component `p` taken as
/// a standalone functional. At a nonzero base point the shifted fields may
/// fall outside `W_{>=0}`/`W_{>=1}`, but only their jets at `x` matter and
/// those algebras realize every jet there, so the rank is unchanged.
fn component_gram(tag: AlgebraTag, p: &OnePointLocal) -> matq::Mat {
    let lo = point_floor(tag, &p.x);
    let hi = p.order() as i64 + 1;
    let fields: Vec<LaurentPoly> = (lo..=hi)
        .map(|i| LaurentPoly::t_minus(&p.x).pow((i + 1) as u32))
        .collect();
    fields
        .iter()
        .map(|a| {
            fields
                .iter()
                .map(|b| p.eval_poly(&witt_field(a, b)).expect("poly eval"))
                .collect()
        })
        .collect()
}

/// Rank of `B_chi`, computed per point on the complete window
/// `(t-x)^(i+1)∂, i in [floor, n+1]` and summed over the points (the ranks
/// add because the coadjoint module splits over the base points).
pub fn rank_b(chi: &LocalFunction) -> usize {
    chi.points
        .iter()
        .map(|p| matq::rank(&component_gram(chi.tag, p)))
        .sum()
}

/// Block-adapted spanning fields for a multi-point functional: at the point
/// `p` the fields `(t-x_p)^(i+1) * prod_{q != p} (t-x_q)^(n_q+2) ∂` for
/// `i in [floor_p, window_hi]`. Cross-point pairings vanish identically, so
/// the Gram matrix of the full functional is block diagonal with full
/// per-point blocks.
pub(crate) fn adapted_basis(
    chi: &LocalFunction,
    window: std::ops::RangeInclusive<i64>,
) -> Result<Vec<LaurentPoly>> {
    let (wlo, whi) = (*window.start(), *window.end());
    let mut out = Vec::new();
    for p in &chi.points {
        let floor = point_floor(chi.tag, &p.x);
        let need_hi = p.order() as i64 + 1;
        if wlo > floor || whi < need_hi {
            return Err(Error::WindowTooSmall(format!(
                "component at {} needs indices [{}, {}], window is [{}, {}]",
                rational_to_string(&p.x),
                floor,
                need_hi,
                wlo,
                whi
            )));
        }
        let mut killer = LaurentPoly::one();
        for q in &chi.points {
            if q.x != p.x {
                killer = &killer * &LaurentPoly::t_minus(&q.x).pow(q.order() as u32 + 2);
            }
        }
        for i in floor.max(wlo)..=whi {
            let f = &LaurentPoly::t_minus(&p.x).pow((i + 1) as u32) * &killer;
            out.push(f);
        }
    }
    Ok(out)
}

/// Gram matrix of `B_chi` on an explicit family of coefficient polynomials.
pub(crate) fn gram_on(chi: &LocalFunction, fields: &[LaurentPoly]) -> Result<matq::Mat> {
    fields
        .iter()
        .map(|a| {
            fields
                .iter()
                .map(|b| chi.eval_poly(&witt_field(a, b)))
                .collect()
        })
        .collect()
}

/// Rank of `B_chi` on the block-adapted window; agrees with [`rank_b`] when
/// the window is complete. Used as the independent multi-point oracle.
pub fn rank_b_adapted(chi: &LocalFunction, window: std::ops::RangeInclusive<i64>) -> Result<usize> {
    let fields = adapted_basis(chi, window)?;
    Ok(matq::rank(&gram_on(chi, &fields)?))
}

/// Weakly decreasing multiset of component orders.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionDescriptor(Vec<usize>);

impl PartitionDescriptor {
    pub fn parts(&self) -> &[usize] {
        &self.0
    }
}

/// The order partition of a nonzero local function.
pub fn order_partition(chi: &LocalFunction) -> Result<PartitionDescriptor> {
    if chi.is_zero() {
        return Err(Error::ZeroFunctional);
    }
    let mut parts: Vec<usize> = chi.points.iter().map(OnePointLocal::order).collect();
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(PartitionDescriptor(parts))
}

/// Exact kernel of `B_chi` within the span of the window fields; returns the
/// kernel basis as coefficient polynomials. The window must cover the
/// complete block of every component (as in [`rank_b`]), otherwise the call
/// is refused.
pub fn isotropy_window(
    chi: &LocalFunction,
    window: std::ops::RangeInclusive<i64>,
) -> Result<Vec<LaurentPoly>> {
    let fields = adapted_basis(chi, window)?;
    let gram = gram_on(chi, &fields)?;
    let kernel = matq::nullspace(&gram);
    Ok(kernel
        .into_iter()
        .map(|v| {
            let mut f = LaurentPoly::zero();
            for (c, basis) in v.iter().zip(&fields) {
                f = &f + &basis.scale(c);
            }
            f
        })
        .collect())
}

/// Minimal monic linear recurrence of degree `<= dmax` annihilating the
/// sequence, or `None` if no such recurrence exists. Needs at least
/// `2*dmax + 2` terms. Minimality is certified by the infeasibility of every
/// lower-degree Hankel system over the full sequence.
pub fn recurrence_detect(seq: &[Rational], dmax: usize) -> Result<Option<LaurentPoly>> {
    let need = 2 * dmax + 2;
    if seq.len() < need {
        return Err(Error::InsufficientTerms {
            need,
            got: seq.len(),
        });
    }
    for d in 0..=dmax {
        // Monic recurrence chi_{m+d} + b_{d-1} chi_{m+d-1} + ... + b_0 chi_m = 0.
        let rows = seq.len() - d;
        let mat: matq::Mat = (0..rows)
            .map(|m| (0..d).map(|i| seq[m + i].clone()).collect())
            .collect();
        let rhs: Vec<Rational> = (0..rows).map(|m| -seq[m + d].clone()).collect();
        if let Some(b) = matq::solve(&mat, &rhs) {
            let mut h = LaurentPoly::t_pow(d as i64);
            for (i, c) in b.into_iter().enumerate() {
                h.add_term(i as i64, c);
            }
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// The sequence `chi(f t^i ∂), i = 0..len`, identifying `chi|_{W(f)}` with a
/// scalar sequence.
pub fn local_sequence(chi: &LocalFunction, f: &LaurentPoly, len: usize) -> Result<Vec<Rational>> {
    (0..len)
        .map(|i| chi.eval_poly(&f.mul_t_pow(i as i64)))
        .collect()
}

// ---------------------------------------------------------------------------
// JSON interface
// ---------------------------------------------------------------------------

impl LocalFunction {
    /// Serializes to the stable JSON format, rationals as exact strings:
    /// `{"tag":"W","points":[{"x":"1","coeffs":["1","0","2"]}],"central":"0"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag.as_str(),
            "points": self.points.iter().map(|p| json!({
                "x": rational_to_string(&p.x),
                "coeffs": p.coeffs.iter().map(rational_to_string).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "central": "0",
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse(0, "expected a JSON object"))?;
        let tag = AlgebraTag::parse(
            obj.get("tag")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::parse(0, "missing `tag`"))?,
        )?;
        let central = match obj.get("central") {
            None => Rational::zero(),
            Some(c) => parse_rational(
                c.as_str()
                    .ok_or_else(|| Error::parse(0, "`central` must be a string"))?,
            )?,
        };
        let mut points = Vec::new();
        let arr = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(0, "missing `points` array"))?;
        for p in arr {
            let po = p
                .as_object()
                .ok_or_else(|| Error::parse(0, "point must be an object"))?;
            let x = parse_rational(
                po.get("x")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::parse(0, "point missing `x`"))?,
            )?;
            let coeffs = po
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::parse(0, "point missing `coeffs`"))?
                .iter()
                .map(|c| {
                    parse_rational(
                        c.as_str()
                            .ok_or_else(|| Error::parse(0, "coefficient must be a string"))?,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            points.push((x, coeffs));
        }
        LocalFunction::new(tag, points, central)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::parse(0, format!("invalid JSON: {}", e)))?;
        LocalFunction::from_json(&v)
    }
}
