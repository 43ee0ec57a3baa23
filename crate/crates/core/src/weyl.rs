//! The localized Weyl algebra `A = k[t, t^-1]<∂>` with `∂t = t∂ + 1`, the Lie
//! homomorphisms `pi_gamma : W -> A`, `f∂ -> f∂ + gamma f'`, and the modules
//! `N_x = k[t, t^-1, (t-x)^-1] / k[t, t^-1]` carrying the delta function
//! `delta_x = class of (t-x)^-1`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Zero};

use crate::exactalg::{rational_to_string, rint, LaurentPoly, Rational};
use crate::liealg::{AlgebraTag, VirElement};
use crate::matq;
use crate::sympoisson::BPoly;
use crate::{Error, Result};

/// Falling factorial `m (m-1) ... (m-j+1)` for integer `m` (any sign).
fn falling(m: i64, j: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..j as i64 {
        acc *= BigInt::from(m - i);
    }
    Rational::from_integer(acc)
}

fn binom(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= rint((n - i) as i64);
        acc /= rint((i + 1) as i64);
    }
    acc
}

/// Normal-ordered element of the localized Weyl algebra: a finite sum of
/// monomials `c * t^i ∂^k` with all `t`'s to the left of all `∂`'s.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeylElement {
    terms: BTreeMap<(i64, u32), Rational>,
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement::default()
    }

    pub fn one() -> Self {
        WeylElement::monomial(0, 0, Rational::one())
    }

    /// `c * t^i ∂^k`.
    pub fn monomial(i: i64, k: u32, c: Rational) -> Self {
        let mut w = WeylElement::zero();
        w.add_term(i, k, c);
        w
    }

    /// `f(t)` as a multiplication operator.
    pub fn from_poly(f: &LaurentPoly) -> Self {
        let mut w = WeylElement::zero();
        for (&i, c) in f.terms() {
            w.add_term(i, 0, c.clone());
        }
        w
    }

    /// `∂`.
    pub fn del() -> Self {
        WeylElement::monomial(0, 1, Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, i: i64, k: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, k)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, k));
        }
    }

    pub fn add(&self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (&(i, k), c) in &rhs.terms {
            out.add_term(i, k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (&(i, k), c) in &rhs.terms {
            out.add_term(i, k, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero();
        }
        WeylElement {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Commutator `[a, b] = ab - ba`.
    pub fn commutator(&self, rhs: &WeylElement) -> WeylElement {
        weyl_mul(self, rhs).sub(&weyl_mul(rhs, self))
    }

    /// The top-order symbol: the highest ∂-degree part with `∂ -> y`.
    pub fn top_symbol(&self) -> BPoly {
        let top = self.terms.keys().map(|&(_, k)| k).max().unwrap_or(0);
        let mut out = BPoly::zero();
        for (&(i, k), c) in &self.terms {
            if k == top {
                out.add_term(i, k, c.clone());
            }
        }
        out
    }

    /// Coefficients in ∂-left order: `a = sum d_{k,i} ∂^k t^i`. Exact
    /// reordering through `t^i ∂^k = sum_j (-1)^j C(k,j) i^(falling j)
    /// ∂^(k-j) t^(i-j)`.
    pub fn del_left_coefficients(&self) -> BTreeMap<(u32, i64), Rational> {
        let mut out: BTreeMap<(u32, i64), Rational> = BTreeMap::new();
        for (&(i, k), c) in &self.terms {
            for j in 0..=k {
                let sign = if j % 2 == 0 { rint(1) } else { rint(-1) };
                let coeff = c * sign * binom(k, j) * falling(i, j);
                if coeff.is_zero() {
                    continue;
                }
                let key = (k - j, i - j as i64);
                let slot = out.entry(key).or_insert_with(Rational::zero);
                *slot += coeff;
                if slot.is_zero() {
                    out.remove(&key);
                }
            }
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, k), c) in &self.terms {
            use num::Signed;
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
            let mut parts = Vec::new();
            if mag != rint(1) || (i == 0 && k == 0) {
                parts.push(rational_to_string(&mag));
            }
            if i == 1 {
                parts.push("t".into());
            } else if i != 0 {
                parts.push(format!("t^{}", i));
            }
            if k == 1 {
                parts.push("d".into());
            } else if k != 0 {
                parts.push(format!("d^{}", k));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the Weyl grammar: terms `c*t^i*d^k` (with `d` standing for `∂`)
/// joined by `+`/`-`; any factor may be omitted. Example: `t^2*d - 3*d^2 + 1/2`.
pub fn parse_weyl(s: &str) -> Result<WeylElement> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while chars.get(*pos).is_some_and(|c| c.is_whitespace()) {
            *pos += 1;
        }
    };
    let parse_int = |pos: &mut usize, signed: bool| -> Result<i64> {
        let start = *pos;
        let mut txt = String::new();
        if signed && matches!(chars.get(*pos), Some('-') | Some('+')) {
            txt.push(chars[*pos]);
            *pos += 1;
        }
        while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
            txt.push(chars[*pos]);
            *pos += 1;
        }
        txt.parse()
            .map_err(|_| Error::parse(start, "expected an integer"))
    };
    let mut acc = WeylElement::zero();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(Error::parse(pos, "empty expression"));
            }
            break;
        }
        let mut coeff = match chars[pos] {
            '+' => {
                pos += 1;
                rint(1)
            }
            '-' => {
                pos += 1;
                rint(-1)
            }
            _ if first => rint(1),
            c => return Err(Error::parse(pos, format!("expected `+` or `-`, found `{}`", c))),
        };
        first = false;
        let mut t_exp = 0i64;
        let mut d_exp = 0u32;
        loop {
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some(c) if c.is_ascii_digit() => {
                    let start = pos;
                    let mut num = String::new();
                    while chars
                        .get(pos)
                        .is_some_and(|c| c.is_ascii_digit() || *c == '/')
                    {
                        num.push(chars[pos]);
                        pos += 1;
                    }
                    let r: Rational = num
                        .parse()
                        .map_err(|e| Error::parse(start, format!("invalid rational: {}", e)))?;
                    coeff *= r;
                }
                Some('t') => {
                    if d_exp > 0 {
                        return Err(Error::parse(
                            pos,
                            "input must be normal-ordered: `t` factors before `d`",
                        ));
                    }
                    pos += 1;
                    let e = if chars.get(pos) == Some(&'^') {
                        pos += 1;
                        parse_int(&mut pos, true)?
                    } else {
                        1
                    };
                    t_exp += e;
                }
                Some('d') => {
                    pos += 1;
                    let e = if chars.get(pos) == Some(&'^') {
                        pos += 1;
                        parse_int(&mut pos, false)?
                    } else {
                        1
                    };
                    d_exp += e as u32;
                }
                other => {
                    return Err(Error::parse(
                        pos,
                        format!("expected a rational, `t`, or `d`, found {:?}", other),
                    ));
                }
            }
            skip_ws(&mut pos);
            if chars.get(pos) == Some(&'*') {
                pos += 1;
                continue;
            }
            break;
        }
        acc.add_term(t_exp, d_exp, coeff);
    }
    Ok(acc)
}

/// Normal-ordered exact product, from `∂^k t^m = sum_j C(k,j) m^(falling j)
/// t^(m-j) ∂^(k-j)`.
pub fn weyl_mul(a: &WeylElement, b: &WeylElement) -> WeylElement {
    let mut out = WeylElement::zero();
    for (&(i1, k1), c1) in &a.terms {
        for (&(i2, k2), c2) in &b.terms {
            let c = c1 * c2;
            for j in 0..=k1 {
                let w = binom(k1, j) * falling(i2, j);
                if w.is_zero() {
                    // falling factorial hit zero; all higher j stay zero
                    break;
                }
                out.add_term(i1 + i2 - j as i64, k1 + k2 - j, &c * w);
            }
        }
    }
    out
}

/// The Lie homomorphism `pi_gamma : W -> A`, `f∂ -> f∂ + gamma f'`.
/// Requires tag `W` and zero central part.
pub fn pi_gamma(u: &VirElement, gamma: &Rational) -> Result<WeylElement> {
    if u.tag() != AlgebraTag::W {
        return Err(Error::TagMismatch(format!(
            "pi_gamma is defined on W, got {}",
            u.tag()
        )));
    }
    if !u.central().is_zero() {
        return Err(Error::NonzeroCentral);
    }
    let mut out = WeylElement::zero();
    for (&m, c) in u.coeff().terms() {
        out.add_term(m, 1, c.clone());
    }
    for (&m, c) in u.coeff().derivative().terms() {
        out.add_term(m, 0, gamma * c);
    }
    Ok(out)
}

/// Image of a `U(W)`-word (a product of Lie generators) under `pi_gamma`.
pub fn pi_gamma_word(word: &[VirElement], gamma: &Rational) -> Result<WeylElement> {
    let mut acc = WeylElement::one();
    for u in word {
        acc = weyl_mul(&acc, &pi_gamma(u, gamma)?);
    }
    Ok(acc)
}

/// Which image to test membership in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PiImage {
    /// `im(pi_0) = k ⊕ A∂`.
    Pi0,
    /// `im(pi_1) = k ⊕ ∂A`.
    Pi1,
}

/// Membership in the image of `pi_0` or `pi_1`: in normal order the only
/// ∂-free content must be the constant; for `pi_1` the same after reordering
/// to ∂-left form.
pub fn pi_image_test(a: &WeylElement, which: PiImage) -> bool {
    match which {
        PiImage::Pi0 => a.terms.iter().all(|(&(i, k), _)| k > 0 || i == 0),
        PiImage::Pi1 => a
            .del_left_coefficients()
            .iter()
            .all(|(&(k, i), _)| k > 0 || i == 0),
    }
}

/// A vector of `N_x = k[t, t^-1, (t-x)^-1]/k[t, t^-1]`, expressed on the
/// basis `∂^k delta_x` with `delta_x = class of (t-x)^-1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NVector {
    x: Rational,
    /// Coefficient of `∂^k delta_x`; no trailing zeros.
    coeffs: Vec<Rational>,
}

impl NVector {
    pub fn new(x: Rational, mut coeffs: Vec<Rational>) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::ForbiddenBasePoint(
                "N_x needs x != 0 (poles at 0 are Laurent polynomials)".into(),
            ));
        }
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Ok(NVector { x, coeffs })
    }

    pub fn delta(x: Rational) -> Result<Self> {
        NVector::new(x, vec![Rational::one()])
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, rhs: &NVector) -> Result<NVector> {
        if self.x != rhs.x {
            return Err(Error::Domain("N_x vectors at different points".into()));
        }
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < rhs.coeffs.len() {
            coeffs.resize(rhs.coeffs.len(), Rational::zero());
        }
        for (slot, c) in coeffs.iter_mut().zip(&rhs.coeffs) {
            *slot += c;
        }
        NVector::new(self.x.clone(), coeffs)
    }

    pub fn scale(&self, c: &Rational) -> NVector {
        if c.is_zero() {
            return NVector {
                x: self.x.clone(),
                coeffs: Vec::new(),
            };
        }
        NVector {
            x: self.x.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Pole coordinates: coefficient of `(t-x)^-m` for `m = 1, 2, ...`,
    /// using `∂^k delta_x = (-1)^k k! (t-x)^(-k-1)`.
    fn poles(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let sign = if k % 2 == 0 { rint(1) } else { rint(-1) };
                c * sign * crate::exactalg::factorial(k)
            })
            .collect()
    }

    fn from_poles(x: Rational, poles: Vec<Rational>) -> NVector {
        let coeffs = poles
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let sign = if k % 2 == 0 { rint(1) } else { rint(-1) };
                c * sign / crate::exactalg::factorial(k)
            })
            .collect();
        NVector::new(x, coeffs).expect("x validated")
    }
}

impl NVector {
    /// JSON form: `{"x":"1","coeffs":["1","0"]}` over the `∂^k delta` basis.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "x": rational_to_string(&self.x),
            "coeffs": self.coeffs.iter().map(rational_to_string).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::parse(0, "expected a JSON object"))?;
        let x = crate::exactalg::parse_rational(
            obj.get("x")
                .and_then(serde_json::Value::as_str)
                .ok_or_else(|| Error::parse(0, "missing `x`"))?,
        )?;
        let coeffs = obj
            .get("coeffs")
            .and_then(serde_json::Value::as_array)
            .ok_or_else(|| Error::parse(0, "missing `coeffs`"))?
            .iter()
            .map(|c| {
                crate::exactalg::parse_rational(
                    c.as_str()
                        .ok_or_else(|| Error::parse(0, "coefficient must be a string"))?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        NVector::new(x, coeffs)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::parse(0, format!("invalid JSON: {}", e)))?;
        NVector::from_json(&v)
    }
}

impl fmt::Display for NVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}*delta", rational_to_string(c))?;
            } else {
                write!(f, "{}*d^{}delta", rational_to_string(c), k)?;
            }
        }
        Ok(())
    }
}

// Pole-coordinate primitives for the module action.

fn pole_del(w: &[Rational]) -> Vec<Rational> {
    // ∂ (t-x)^-m = -m (t-x)^(-m-1)
    let mut out = vec![Rational::zero(); w.len() + 1];
    for (idx, c) in w.iter().enumerate() {
        let m = idx as i64 + 1;
        out[idx + 1] = c * rint(-m);
    }
    out
}

fn pole_mul_t(x: &Rational, w: &[Rational]) -> Vec<Rational> {
    // t (t-x)^-m = (t-x)^(1-m) + x (t-x)^-m; the 1-m = 0 part is regular.
    let mut out = vec![Rational::zero(); w.len()];
    for (idx, c) in w.iter().enumerate() {
        out[idx] += c * x;
        if idx >= 1 {
            out[idx - 1] += c;
        }
    }
    out
}

fn pole_mul_t_inv(x: &Rational, w: &[Rational]) -> Vec<Rational> {
    // t^-1 (t-x)^-m = sum_{j=0}^{m-1} (-1)^j x^(-j-1) (t-x)^(j-m)  mod k[t,t^-1]
    let mut out = vec![Rational::zero(); w.len()];
    let x_inv = x.recip();
    for (idx, c) in w.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = idx + 1;
        let mut factor = x_inv.clone(); // (-1)^j x^(-j-1) at j = 0
        for j in 0..m {
            out[m - 1 - j] += c * &factor;
            factor = -(&factor * &x_inv);
        }
    }
    out
}

/// Exact module action of a Weyl element on `N_x`: `t` acts by
/// multiplication followed by reduction mod `k[t, t^-1]`, `∂` by
/// differentiation.
pub fn weyl_act_n(a: &WeylElement, v: &NVector) -> NVector {
    let x = &v.x;
    let mut acc: Vec<Rational> = Vec::new();
    for (&(i, k), c) in &a.terms {
        let mut w = v.poles();
        for _ in 0..k {
            w = pole_del(&w);
        }
        if i >= 0 {
            for _ in 0..i {
                w = pole_mul_t(x, &w);
            }
        } else {
            for _ in 0..(-i) {
                w = pole_mul_t_inv(x, &w);
            }
        }
        if acc.len() < w.len() {
            acc.resize(w.len(), Rational::zero());
        }
        for (slot, val) in acc.iter_mut().zip(&w) {
            *slot += c * val;
        }
    }
    NVector::from_poles(x.clone(), acc)
}

/// The `W`-module structure `N_x^gamma`: act through `pi_gamma`.
pub fn w_act_n_gamma(u: &VirElement, v: &NVector, gamma: &Rational) -> Result<NVector> {
    Ok(weyl_act_n(&pi_gamma(u, gamma)?, v))
}

/// Result of a bounded cyclic-span computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    /// Dimension of the span of the generated vectors within the
    /// `∂-degree <= bound` slice.
    pub dim: usize,
    /// Whether `delta_x` itself lies in the generated span.
    pub delta_reached: bool,
}

/// Applies `W`-words of length up to `degree_bound` (generators
/// `e_i, |i| <= 3`, through `pi_gamma`) to the start vector and reports the
/// span dimension in the bounded slice and whether `delta_x` was reached.
/// This is a desk check: "not reached" means not reached at this bound.
pub fn cyclic_span(v: &NVector, gamma: &Rational, degree_bound: usize) -> Result<SpanReport> {
    if v.is_zero() {
        return Err(Error::Domain("cyclic span of the zero vector".into()));
    }
    let gens: Vec<WeylElement> = (-3i64..=3)
        .map(|i| {
            pi_gamma(
                &VirElement::e(i, AlgebraTag::W).expect("tag W admits all degrees"),
                gamma,
            )
            .expect("field element")
        })
        .collect();
    let mut all: Vec<NVector> = vec![v.clone()];
    let mut frontier: Vec<NVector> = vec![v.clone()];
    let mut span = IncrementalSpan::new();
    span.insert(&v.poles());
    for _ in 0..degree_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let gw = weyl_act_n(g, w);
                if gw.is_zero() {
                    continue;
                }
                if span.insert(&gw.poles()) {
                    next.push(gw.clone());
                    all.push(gw);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    // delta reached?
    let delta = NVector::delta(v.x.clone()).expect("x != 0");
    let delta_reached = span.contains(&delta.poles());
    // dimension within the k <= degree_bound slice
    let mut sliced = IncrementalSpan::new();
    for w in &all {
        if w.coeffs.len() <= degree_bound + 1 {
            sliced.insert(&w.poles());
        }
    }
    Ok(SpanReport {
        dim: sliced.rank(),
        delta_reached,
    })
}

/// Incremental exact row-echelon span over the rationals.
struct IncrementalSpan {
    rows: Vec<Vec<Rational>>,
}

impl IncrementalSpan {
    fn new() -> Self {
        IncrementalSpan { rows: Vec::new() }
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|c| !c.is_zero()).expect("no zero rows");
            if pivot < v.len() && !v[pivot].is_zero() {
                let f = &v[pivot] / &row[pivot];
                for (j, rc) in row.iter().enumerate() {
                    if j < v.len() {
                        let d = rc * &f;
                        v[j] -= d;
                    } else if !rc.is_zero() {
                        v.resize(j + 1, Rational::zero());
                        let d = rc * &f;
                        v[j] -= d;
                    }
                }
            }
        }
        while v.last().is_some_and(Rational::is_zero) {
            v.pop();
        }
        v
    }

    fn insert(&mut self, v: &[Rational]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        self.rows.push(r);
        // keep rows sorted by pivot for stable reduction
        self.rows.sort_by_key(|row| {
            row.iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX)
        });
        true
    }

    fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).is_empty()
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Dimension of the span of a family of `N_x` vectors (used in tests).
pub fn span_dimension(vs: &[NVector]) -> usize {
    let mat: matq::Mat = {
        let len = vs.iter().map(|v| v.coeffs.len()).max().unwrap_or(0);
        vs.iter()
            .map(|v| {
                let mut row = v.poles();
                row.resize(len, Rational::zero());
                row
            })
            .collect()
    };
    matq::rank(&mat)
}
