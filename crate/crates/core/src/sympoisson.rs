//! The symmetric algebra `S(W)` with its Poisson bracket, evaluation at
//! local functionals, determinant generators of the ideals `I(n)`, and the
//! Poisson morphisms `p_gamma : S(W) -> k[t, t^-1, y]`.
//!
//! Generators are written `e_i` (any integer `i`), with `e_i` the image of
//! `t^(i+1)∂` and `{e_i, e_j} = (j - i) e_{i+j}`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::exactalg::{rational_pow, rational_to_string, rint, LaurentPoly, Rational};
use crate::liealg::{witt_bracket, AlgebraTag, VirElement};
use crate::localfn::{adapted_basis, eval_local, gram_on, LocalFunction};
use crate::matq;
use crate::{Error, Result};

/// Element of `S(W)` in canonical form: each monomial is a sorted multiset of
/// generator indices with a nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymPoly {
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl SymPoly {
    pub fn zero() -> Self {
        SymPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = SymPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// The generator `e_i`.
    pub fn e(i: i64) -> Self {
        let mut p = SymPoly::zero();
        p.add_term(vec![i], rint(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, mut mono: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        mono.sort_unstable();
        let slot = self.terms.entry(mono.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &SymPoly) -> SymPoly {
        self.add(&rhs.scale(&-rint(1)))
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero();
        }
        SymPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    /// Total degree in the generators.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Image of a pure vector field: `sum c_m t^m ∂ -> sum c_m e_{m-1}`.
    /// The central part must vanish (S(W) has no central generator).
    pub fn from_field(u: &VirElement) -> Result<SymPoly> {
        if !u.central().is_zero() {
            return Err(Error::NonzeroCentral);
        }
        let mut p = SymPoly::zero();
        for (&m, c) in u.coeff().terms() {
            p.add_term(vec![m - 1], c.clone());
        }
        Ok(p)
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
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
            let unit = mag == rint(1);
            if mono.is_empty() {
                write!(f, "{}", rational_to_string(&mag))?;
                continue;
            }
            if !unit {
                write!(f, "{}*", rational_to_string(&mag))?;
            }
            let mut runs: Vec<(i64, usize)> = Vec::new();
            for &i in mono {
                match runs.last_mut() {
                    Some((j, n)) if *j == i => *n += 1,
                    _ => runs.push((i, 1)),
                }
            }
            for (idx, (i, n)) in runs.iter().enumerate() {
                if idx > 0 {
                    write!(f, "*")?;
                }
                if *n == 1 {
                    write!(f, "e_{}", i)?;
                } else {
                    write!(f, "e_{}^{}", i, n)?;
                }
            }
        }
        Ok(())
    }
}

/// Poisson bracket on `S(W)`: the bilinear, antisymmetric Leibniz extension
/// of `{e_i, e_j} = (j - i) e_{i+j}`.
pub fn poisson_bracket(p: &SymPoly, q: &SymPoly) -> SymPoly {
    let mut out = SymPoly::zero();
    for (m1, c1) in p.terms() {
        for (m2, c2) in q.terms() {
            let coeff = c1 * c2;
            for (a_pos, &a) in m1.iter().enumerate() {
                for (b_pos, &b) in m2.iter().enumerate() {
                    // {e_a, e_b} * (m1 \ a) * (m2 \ b)
                    let mut mono = Vec::with_capacity(m1.len() + m2.len() - 1);
                    mono.extend(m1.iter().enumerate().filter(|&(i, _)| i != a_pos).map(|(_, &v)| v));
                    mono.extend(m2.iter().enumerate().filter(|&(i, _)| i != b_pos).map(|(_, &v)| v));
                    mono.push(a + b);
                    out.add_term(mono, &coeff * rint(b - a));
                }
            }
        }
    }
    out
}

/// The evaluation homomorphism `ev_chi : S(W) -> k` sending
/// `e_i -> chi(t^(i+1)∂)`. Every generator must be admitted by the tag.
pub fn ev_chi(p: &SymPoly, chi: &LocalFunction) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (mono, c) in p.terms() {
        let mut prod = c.clone();
        for &i in mono {
            if !chi.tag().admits_degree(i + 1) {
                return Err(Error::UnsupportedDegree {
                    tag: chi.tag().to_string(),
                    degree: i + 1,
                });
            }
            let u = VirElement::e(i, chi.tag())?;
            prod *= eval_local(chi, &u)?;
        }
        acc += prod;
    }
    Ok(acc)
}

/// The determinant `D(u_1..u_n; v_1..v_n)` of the matrix with `(i, j)` entry
/// the `S(W)`-image of `[u_i, v_j]`. Centerless tags only.
pub fn det_d(us: &[VirElement], vs: &[VirElement]) -> Result<SymPoly> {
    if us.len() != vs.len() || us.is_empty() {
        return Err(Error::SizeMismatch(format!(
            "need equally many us and vs (>= 1), got {} and {}",
            us.len(),
            vs.len()
        )));
    }
    let n = us.len();
    let mut matrix = Vec::with_capacity(n);
    for u in us {
        let mut row = Vec::with_capacity(n);
        for v in vs {
            row.push(SymPoly::from_field(&witt_bracket(u, v)?)?);
        }
        matrix.push(row);
    }
    Ok(sym_det(&matrix))
}

/// Cofactor expansion; fine at the sizes the determinant ideal tests use.
fn sym_det(m: &[Vec<SymPoly>]) -> SymPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = SymPoly::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<SymPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = entry.mul(&sym_det(&minor));
        if j % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

/// Whether every generator of the determinant ideal `I(n)` vanishes at `chi`,
/// decided on the complete block-adapted window: equivalently, whether the
/// rank of `B_chi` on that window is at most `n`. The window must cover
/// `[floor_p, order_p + 1]` for every component, else the call is refused as
/// unsound.
pub fn i_n_vanishes_at(
    chi: &LocalFunction,
    n: usize,
    window: std::ops::RangeInclusive<i64>,
) -> Result<bool> {
    if chi.tag() == AlgebraTag::Vir {
        return Err(Error::TagMismatch(
            "determinant ideals are computed in S(W)-type algebras; factor out z first".into(),
        ));
    }
    if chi.is_zero() {
        return Ok(true);
    }
    let fields = adapted_basis(chi, window)?;
    let gram = gram_on(chi, &fields)?;
    // ev_chi(D(us; vs)) is the corresponding minor of the Gram matrix, so all
    // (n+1)-minors vanish iff the rank is at most n.
    Ok(matq::rank(&gram) <= n)
}

/// Polynomial in `t, t^-1, y` with the Poisson bracket fixed by `{y, t} = 1`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BPoly {
    /// (t-degree, y-degree) -> coefficient.
    terms: BTreeMap<(i64, u32), Rational>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(i: i64, j: u32, c: Rational) -> Self {
        let mut p = BPoly::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: i64, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn add(&self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &BPoly) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }

    /// `d/dt`.
    pub fn dt(&self) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i != 0 {
                out.add_term(i - 1, j, c * rint(i));
            }
        }
        out
    }

    /// `d/dy`.
    pub fn dy(&self) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j != 0 {
                out.add_term(i, j - 1, c * rint(j as i64));
            }
        }
        out
    }

    /// Poisson bracket from `{y, t} = 1`: `{f, g} = f_y g_t - f_t g_y`.
    pub fn poisson(&self, rhs: &BPoly) -> BPoly {
        self.dy().mul(&rhs.dt()).sub(&self.dt().mul(&rhs.dy()))
    }

    /// Evaluation at `(t, y) = (x, alpha)`; `x != 0` required when negative
    /// t-degrees occur.
    pub fn eval(&self, x: &Rational, alpha: &Rational) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            let mut term = c * rational_pow(x, i)?;
            for _ in 0..j {
                term *= alpha;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// The y-degree-graded top part (largest y-degree terms).
    pub fn top_y_part(&self) -> BPoly {
        let top = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        BPoly {
            terms: self
                .terms
                .iter()
                .filter(|&(&(_, j), _)| j == top)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for BPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
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
            if mag != rint(1) || (i == 0 && j == 0) {
                parts.push(rational_to_string(&mag));
            }
            if i == 1 {
                parts.push("t".into());
            } else if i != 0 {
                parts.push(format!("t^{}", i));
            }
            if j == 1 {
                parts.push("y".into());
            } else if j != 0 {
                parts.push(format!("y^{}", j));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the `S(W)` expression grammar: `e_i` tokens (any integer `i`)
/// combined with `*`, `+`, `-`, `^`, and rational constants. Example:
/// `e_0*e_1^2 - 3/2*e_-1`.
pub fn parse_sympoly(s: &str) -> Result<SymPoly> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    let skip_ws = |pos: &mut usize| {
        while chars.get(*pos).is_some_and(|c| c.is_whitespace()) {
            *pos += 1;
        }
    };
    let parse_uint = |pos: &mut usize| -> Result<u64> {
        let start = *pos;
        let mut digits = String::new();
        while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
            digits.push(chars[*pos]);
            *pos += 1;
        }
        digits
            .parse()
            .map_err(|_| Error::parse(start, "expected digits"))
    };
    let parse_int = |pos: &mut usize| -> Result<i64> {
        let neg = chars.get(*pos) == Some(&'-');
        if neg || chars.get(*pos) == Some(&'+') {
            *pos += 1;
        }
        let v = parse_uint(pos)? as i64;
        Ok(if neg { -v } else { v })
    };
    let mut acc = SymPoly::zero();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= chars.len() {
            if first {
                return Err(Error::parse(pos, "empty expression"));
            }
            break;
        }
        let sign = match chars[pos] {
            '+' => {
                pos += 1;
                Rational::one()
            }
            '-' => {
                pos += 1;
                -Rational::one()
            }
            _ if first => Rational::one(),
            c => return Err(Error::parse(pos, format!("expected `+` or `-`, found `{}`", c))),
        };
        first = false;
        // term: factor (* factor)*
        let mut term = SymPoly::constant(sign);
        loop {
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some('e') => {
                    pos += 1;
                    if chars.get(pos) != Some(&'_') {
                        return Err(Error::parse(pos, "expected `_` after `e`"));
                    }
                    pos += 1;
                    let i = parse_int(&mut pos)?;
                    let mut exp = 1u64;
                    if chars.get(pos) == Some(&'^') {
                        pos += 1;
                        exp = parse_uint(&mut pos)?;
                    }
                    for _ in 0..exp {
                        term = term.mul(&SymPoly::e(i));
                    }
                }
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
                    term = term.scale(&r);
                }
                other => {
                    return Err(Error::parse(
                        pos,
                        format!("expected `e_i` or a rational, found {:?}", other),
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
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The Poisson morphism `p_gamma : S(W) -> k[t, t^-1, y]` with
/// `e_i -> t^(i+1) y + gamma (i+1) t^i`.
pub fn p_gamma_map(p: &SymPoly, gamma: &Rational) -> BPoly {
    let mut out = BPoly::zero();
    for (mono, c) in p.terms() {
        let mut acc = BPoly::monomial(0, 0, c.clone());
        for &i in mono {
            let mut img = BPoly::monomial(i + 1, 1, rint(1));
            img.add_term(i, 0, gamma * rint(i + 1));
            acc = acc.mul(&img);
        }
        out = out.add(&acc);
    }
    out
}

/// Membership in `J(gamma) = ker p_gamma`, the Poisson primitive ideal
/// attached to the order-one orbits.
pub fn j_gamma_member(p: &SymPoly, gamma: &Rational) -> bool {
    p_gamma_map(p, gamma).is_zero()
}

/// `p_gamma` of a single field, convenient for tests: `f∂ -> f y + gamma f'`.
pub fn p_gamma_field(f: &LaurentPoly, gamma: &Rational) -> BPoly {
    let mut out = BPoly::zero();
    for (&m, c) in f.terms() {
        out.add_term(m, 1, c.clone());
    }
    for (&m, c) in f.derivative().terms() {
        out.add_term(m, 0, gamma * c);
    }
    out
}

#[cfg(test)]
pub(crate) mod tests;
