//! Finite-codimension subalgebras of `W` (and `Vir`): the floor polynomial
//! `f_k`, support, one-point invariants (leading degrees and gaps), the
//! complete codimension <= 3 classification, and the explicit expression of
//! the central element `z` as a bracket combination.
//!
//! A subalgebra is presented as `W(f0) + span(generators)` for a factored
//! floor `f0` with nonzero roots; all membership questions happen in the
//! finite quotient `k[t, t^-1]/(f0)`.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::exactalg::{rational_to_string, rint, FactoredPoly, LaurentPoly, Rational};
use crate::liealg::{vir_bracket, witt_field, AlgebraTag, VirElement};
use crate::matq;
use crate::{Error, Result};

/// A finite-codimension subalgebra of `W` or `Vir`, presented relative to a
/// user-supplied factored floor: `k = W(f0) + span(generators)`. For tag
/// `Vir` the central line `k z` is implicitly included (every
/// finite-codimension subalgebra contains `z`), so verification and
/// classification run on the field parts.
#[derive(Clone, Debug)]
pub struct SubalgebraPresentation {
    f0: FactoredPoly,
    generators: Vec<VirElement>,
    tag: AlgebraTag,
}

impl SubalgebraPresentation {
    pub fn new(
        f0: FactoredPoly,
        generators: Vec<VirElement>,
        tag: AlgebraTag,
    ) -> Result<Self> {
        if !matches!(tag, AlgebraTag::W | AlgebraTag::Vir) {
            return Err(Error::TagMismatch(
                "subalgebra presentations are classified in W (or Vir)".into(),
            ));
        }
        if f0.is_zero() {
            return Err(Error::Domain("zero floor polynomial".into()));
        }
        if f0.t_power() != 0 {
            return Err(Error::Domain(
                "the floor polynomial must have nonzero roots only".into(),
            ));
        }
        for g in &generators {
            if g.tag() != tag {
                return Err(Error::TagMismatch(format!("{} vs {}", g.tag(), tag)));
            }
            if !g.central().is_zero() && tag != AlgebraTag::Vir {
                return Err(Error::NonzeroCentral);
            }
        }
        Ok(SubalgebraPresentation {
            f0,
            generators,
            tag,
        })
    }

    pub fn f0(&self) -> &FactoredPoly {
        &self.f0
    }

    pub fn generators(&self) -> &[VirElement] {
        &self.generators
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }
}

/// The quotient `k[t, t^-1]/(f0)` with `f0(0) != 0`: elements are coefficient
/// vectors against `1, t, ..., t^(D-1)`.
struct Quotient {
    f0: LaurentPoly,
    dim: usize,
    /// Representative of `t^-1`.
    t_inv: Vec<Rational>,
}

impl Quotient {
    fn new(f0: &FactoredPoly) -> Quotient {
        let poly = f0.expand();
        let dim = f0.degree() as usize;
        // t * v = 1 mod f0 with v = -(f0 - f0(0)) / (t * f0(0)).
        let c0 = poly.coeff(0);
        let mut v = vec![Rational::zero(); dim];
        for (&k, c) in poly.terms() {
            if k > 0 {
                v[(k - 1) as usize] = -(c / &c0);
            }
        }
        Quotient {
            f0: poly,
            dim,
            t_inv: v,
        }
    }

    fn mul_t(&self, v: &[Rational]) -> Vec<Rational> {
        // shift up, then reduce the overflow by f0 (monic up to scalar).
        let lead = self.f0.coeff(self.dim as i64);
        let mut out = vec![Rational::zero(); self.dim];
        let top = v[self.dim - 1].clone();
        for k in 1..self.dim {
            out[k] = v[k - 1].clone();
        }
        if !top.is_zero() {
            let scale = top / &lead;
            for k in 0..self.dim {
                out[k] -= &self.f0.coeff(k as i64) * &scale;
            }
        }
        out
    }

    fn mul_t_inv(&self, v: &[Rational]) -> Vec<Rational> {
        // multiply by the t^-1 representative: out = v * t_inv mod f0.
        let mut out = vec![Rational::zero(); self.dim];
        // Horner over the t_inv representative: out = sum t_inv[k] * (v shifted by k)
        let mut shifted = v.to_vec();
        for k in 0..self.dim {
            if !self.t_inv[k].is_zero() {
                for (o, s) in out.iter_mut().zip(&shifted) {
                    *o += &self.t_inv[k] * s;
                }
            }
            if k + 1 < self.dim {
                shifted = self.mul_t(&shifted);
            }
        }
        out
    }

    fn reduce(&self, p: &LaurentPoly) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (&k, c) in p.terms() {
            let mut rep = vec![Rational::zero(); self.dim];
            rep[0] = c.clone();
            if k >= 0 {
                for _ in 0..k {
                    rep = self.mul_t(&rep);
                }
            } else {
                for _ in 0..(-k) {
                    rep = self.mul_t_inv(&rep);
                }
            }
            for (o, r) in out.iter_mut().zip(&rep) {
                *o += r;
            }
        }
        out
    }
}

/// Row-span helper: membership via rank comparison.
struct Span {
    rows: matq::Mat,
    rank: usize,
}

impl Span {
    fn new(rows: matq::Mat) -> Span {
        let rank = matq::rank(&rows);
        Span { rows, rank }
    }

    fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Rational::is_zero) {
            return true;
        }
        let mut m = self.rows.clone();
        m.push(v.to_vec());
        matq::rank(&m) == self.rank
    }
}

fn generator_span(k: &SubalgebraPresentation, q: &Quotient) -> Span {
    let rows: matq::Mat = k
        .generators
        .iter()
        .map(|g| q.reduce(g.coeff()))
        .collect();
    Span::new(rows)
}

/// Verifies that `W(f0) + span(generators)` is closed under the bracket:
/// all generator pair brackets and all brackets against a spanning window of
/// `W(f0)` stay inside.
pub fn verify_subalgebra(k: &SubalgebraPresentation) -> bool {
    let q = Quotient::new(&k.f0);
    let span = generator_span(k, &q);
    let f0 = k.f0.expand();
    // generator pairs
    for (i, g) in k.generators.iter().enumerate() {
        for h in &k.generators[i..] {
            let br = witt_field(g.coeff(), h.coeff());
            if !span.contains(&q.reduce(&br)) {
                return false;
            }
        }
    }
    // brackets against W(f0): the window f0 * t^m, m = 0..D-1, spans the
    // image of [g, W(f0)] mod f0 by linearity.
    for g in &k.generators {
        for m in 0..q.dim as i64 {
            let br = witt_field(g.coeff(), &f0.mul_t_pow(m));
            if !span.contains(&q.reduce(&br)) {
                return false;
            }
        }
    }
    true
}

/// Codimension of `k` in `W` (the central line of `Vir` is not counted).
pub fn codim(k: &SubalgebraPresentation) -> usize {
    let q = Quotient::new(&k.f0);
    let span = generator_span(k, &q);
    q.dim - span.rank
}

/// The minimal-degree monic `f` with `f(0) != 0` and `W(f) ⊆ k`, found by
/// testing the monic divisors of `f0` in increasing degree. It divides every
/// `h` with `W(h) ⊆ k`.
pub fn minimal_f(k: &SubalgebraPresentation) -> Result<FactoredPoly> {
    if !verify_subalgebra(k) {
        return Err(Error::NotSubalgebra(
            "presentation is not closed under the bracket".into(),
        ));
    }
    let q = Quotient::new(&k.f0);
    let span = generator_span(k, &q);
    for div in k.f0.monic_divisors() {
        let d_exp = div.expand();
        let deg = div.degree() as usize;
        let ok = (0..q.dim.saturating_sub(deg))
            .all(|m| span.contains(&q.reduce(&d_exp.mul_t_pow(m as i64))));
        if ok {
            return Ok(div);
        }
    }
    unreachable!("f0 itself always passes");
}

/// The support: roots `x` of `minimal_f` with `k ⊆ W(t - x)`, i.e. where
/// every generator vanishes.
pub fn support(k: &SubalgebraPresentation) -> Result<Vec<Rational>> {
    let fmin = minimal_f(k)?;
    let mut out = Vec::new();
    for (x, _) in fmin.factors() {
        let vanishes = k
            .generators
            .iter()
            .all(|g| g.coeff().eval(x).map(|v| v.is_zero()).unwrap_or(false) || g.coeff().is_zero());
        if vanishes {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Invariants of a one-point subalgebra in the sense of the gap/leading
/// degree normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OnePointInvariants {
    /// Codimension in `W`.
    pub d: usize,
    /// Degree of the minimal floor, `f_k = (t-x)^a`.
    pub a: usize,
    /// Leading degrees `n_i - 1`.
    pub ldeg: Vec<i64>,
    /// Gaps `g_i - 1`.
    pub sdeg: Vec<i64>,
}

/// Reduced echelon rows of `k / W((t-x)^a)` in the local coordinate
/// `u = t - x`: each row is the coefficient vector of `u^1 .. u^(a-1)`,
/// pivots normalized to 1 and cleared in the other rows (lowest degree
/// first). Returns (rows, pivot u-exponents).
fn local_echelon(
    k: &SubalgebraPresentation,
    x: &Rational,
    a: usize,
) -> Result<(matq::Mat, Vec<usize>)> {
    let mut rows: matq::Mat = Vec::new();
    for g in &k.generators {
        let jet = g.coeff().taylor_jet(x, a - 1)?;
        if !jet.coeff(0).is_zero() {
            return Err(Error::InconsistentPresentation(
                "a generator does not vanish on the support".into(),
            ));
        }
        rows.push((1..a).map(|j| jet.coeff(j)).collect());
    }
    let pivots = matq::rref(&mut rows);
    rows.truncate(pivots.len());
    let pivot_exps = pivots.iter().map(|&c| c + 1).collect();
    Ok((rows, pivot_exps))
}

/// Computes the one-point invariants; requires `|support| = 1`.
pub fn one_point_invariants(k: &SubalgebraPresentation) -> Result<OnePointInvariants> {
    let supp = support(k)?;
    if supp.len() != 1 {
        return Err(Error::Domain(format!(
            "one-point invariants need |support| = 1, got {}",
            supp.len()
        )));
    }
    let x = &supp[0];
    let fmin = minimal_f(k)?;
    let a = fmin.degree() as usize;
    let d = codim(k);
    let (_, pivot_exps) = local_echelon(k, x, a)?;
    let ldeg: Vec<i64> = pivot_exps.iter().map(|&n| n as i64 - 1).collect();
    let sdeg: Vec<i64> = (1..a)
        .filter(|j| !pivot_exps.contains(j))
        .map(|g| g as i64 - 1)
        .collect();
    Ok(OnePointInvariants { d, a, ldeg, sdeg })
}

/// Partial-semigroup law of the leading degrees: for `i != j`, either
/// `ldeg_i + ldeg_j >= a - 1` or `ldeg_i + ldeg_j` is again a leading degree.
pub fn ldeg_semigroup_check(inv: &OnePointInvariants) -> bool {
    for (i, &li) in inv.ldeg.iter().enumerate() {
        for (j, &lj) in inv.ldeg.iter().enumerate() {
            if i == j {
                continue;
            }
            let s = li + lj;
            if s < inv.a as i64 - 1 && !inv.ldeg.contains(&s) {
                return false;
            }
        }
    }
    true
}

/// Gap bounds: with `g_i = sdeg_i + 1` sorted increasingly, `g_i <= 2i - 1`
/// when `g_1 = 1`, else `g_i <= 2i + 1`.
pub fn gaps_bound_check(inv: &OnePointInvariants) -> bool {
    let gs: Vec<i64> = inv.sdeg.iter().map(|s| s + 1).collect();
    if gs.is_empty() {
        return true;
    }
    if gs[0] == 1 {
        gs.iter()
            .enumerate()
            .all(|(i, &g)| g < 2 * (i as i64 + 1))
    } else {
        gs.iter()
            .enumerate()
            .all(|(i, &g)| g <= 2 * (i as i64 + 1) + 1)
    }
}

/// The classification codes of the codimension <= 3 tables, with parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClassificationCode {
    /// `k = W(f)` with `f = f_k`.
    Wf { f: FactoredPoly },
    /// Codim 2, sdeg {1}: floor `(t-x)^3`, generator `u + alpha u^2`.
    W21 { x: Rational, alpha: Rational },
    /// Codim 2, sdeg {2}: floor `(t-x)^4`, generators `u + alpha u^3`, `u^2`.
    W22 { x: Rational, alpha: Rational },
    /// Codim 3, two double points: `(t-x)(t-y)(alpha t + beta)` over
    /// `W((t-x)^2(t-y)^2)`; `(alpha, beta)` scaled to first nonzero = 1.
    W3A {
        x: Rational,
        y: Rational,
        alpha: Rational,
        beta: Rational,
    },
    /// Codim 3: `W^{2;1}_{x;alpha} ∩ W(t-y)`.
    W3B1 {
        x: Rational,
        y: Rational,
        alpha: Rational,
    },
    /// Codim 3: `W^{2;2}_{x;alpha} ∩ W(t-y)`.
    W3B2 {
        x: Rational,
        y: Rational,
        alpha: Rational,
    },
    /// Codim 3, sdeg {0,2}.
    W3C1 { x: Rational, alpha: Rational },
    /// Codim 3, sdeg {1,2}.
    W3C2 {
        x: Rational,
        alpha: Rational,
        beta: Rational,
    },
    /// Codim 3, sdeg {1,3}.
    W3C3 {
        x: Rational,
        alpha: Rational,
        beta: Rational,
    },
    /// Codim 3, sdeg {1,4}.
    W3C4 {
        x: Rational,
        alpha: Rational,
        beta: Rational,
    },
    /// Codim 3, sdeg {2,3}.
    W3C5 {
        x: Rational,
        alpha: Rational,
        beta: Rational,
    },
}

impl fmt::Display for ClassificationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = rational_to_string;
        match self {
            ClassificationCode::Wf { f: p } => write!(f, "W({})", p),
            ClassificationCode::W21 { x, alpha } => write!(f, "W^{{2;1}}_{{{};{}}}", r(x), r(alpha)),
            ClassificationCode::W22 { x, alpha } => write!(f, "W^{{2;2}}_{{{};{}}}", r(x), r(alpha)),
            ClassificationCode::W3A { x, y, alpha, beta } => {
                write!(f, "W^{{3A}}_{{{},{};{},{}}}", r(x), r(y), r(alpha), r(beta))
            }
            ClassificationCode::W3B1 { x, y, alpha } => {
                write!(f, "W^{{3B1}}_{{{},{};{}}}", r(x), r(y), r(alpha))
            }
            ClassificationCode::W3B2 { x, y, alpha } => {
                write!(f, "W^{{3B2}}_{{{},{};{}}}", r(x), r(y), r(alpha))
            }
            ClassificationCode::W3C1 { x, alpha } => write!(f, "W^{{3C1}}_{{{};{}}}", r(x), r(alpha)),
            ClassificationCode::W3C2 { x, alpha, beta } => {
                write!(f, "W^{{3C2}}_{{{};{},{}}}", r(x), r(alpha), r(beta))
            }
            ClassificationCode::W3C3 { x, alpha, beta } => {
                write!(f, "W^{{3C3}}_{{{};{},{}}}", r(x), r(alpha), r(beta))
            }
            ClassificationCode::W3C4 { x, alpha, beta } => {
                write!(f, "W^{{3C4}}_{{{};{},{}}}", r(x), r(alpha), r(beta))
            }
            ClassificationCode::W3C5 { x, alpha, beta } => {
                write!(f, "W^{{3C5}}_{{{};{},{}}}", r(x), r(alpha), r(beta))
            }
        }
    }
}

/// Classifies a verified presentation of codimension <= 3 against the tables,
/// identifying the unique row and its parameters.
pub fn classify(k: &SubalgebraPresentation) -> Result<ClassificationCode> {
    if !verify_subalgebra(k) {
        return Err(Error::NotSubalgebra(
            "presentation is not closed under the bracket".into(),
        ));
    }
    let d = codim(k);
    if d > 3 {
        return Err(Error::CodimTooLarge(d));
    }
    let fmin = minimal_f(k)?;
    if fmin.degree() as usize == d {
        return Ok(ClassificationCode::Wf { f: fmin });
    }
    let supp = support(k)?;
    match (d, supp.len()) {
        (2, 1) => classify_codim2_one_point(k, &supp[0], &fmin),
        (3, 1) => classify_codim3_one_point(k, &supp[0], &fmin),
        (3, 2) => classify_codim3_two_point(k, &supp, &fmin),
        _ => Err(Error::InconsistentPresentation(format!(
            "codim {} with support of size {} does not match any table row",
            d,
            supp.len()
        ))),
    }
}

fn classify_codim2_one_point(
    k: &SubalgebraPresentation,
    x: &Rational,
    fmin: &FactoredPoly,
) -> Result<ClassificationCode> {
    let a = fmin.degree() as usize;
    let (rows, pivots) = local_echelon(k, x, a)?;
    match (a, pivots.as_slice()) {
        (3, [1]) => Ok(ClassificationCode::W21 {
            x: x.clone(),
            alpha: rows[0][1].clone(),
        }),
        (4, [1, 2]) => {
            // rows: u + alpha u^3 and u^2 + beta u^3 with beta forced to 0.
            if !rows[1][2].is_zero() {
                return Err(Error::InconsistentPresentation(
                    "codim-2 normal form violates the forced relation".into(),
                ));
            }
            Ok(ClassificationCode::W22 {
                x: x.clone(),
                alpha: rows[0][2].clone(),
            })
        }
        _ => Err(Error::InconsistentPresentation(format!(
            "codim 2 with a = {} and pivots {:?}",
            a, pivots
        ))),
    }
}

fn classify_codim3_one_point(
    k: &SubalgebraPresentation,
    x: &Rational,
    fmin: &FactoredPoly,
) -> Result<ClassificationCode> {
    let a = fmin.degree() as usize;
    let (rows, pivots) = local_echelon(k, x, a)?;
    let x = x.clone();
    match (a, pivots.as_slice()) {
        (4, [2]) => Ok(ClassificationCode::W3C1 {
            x,
            alpha: rows[0][2].clone(),
        }),
        (4, [1]) => Ok(ClassificationCode::W3C2 {
            x,
            alpha: rows[0][1].clone(),
            beta: rows[0][2].clone(),
        }),
        (5, [1, 3]) => {
            let alpha = rows[0][1].clone();
            let beta = rows[0][3].clone();
            if rows[1][3] != -alpha.clone() {
                return Err(Error::InconsistentPresentation(
                    "3C3 forced relation violated".into(),
                ));
            }
            Ok(ClassificationCode::W3C3 { x, alpha, beta })
        }
        (6, [1, 3, 4]) => {
            let alpha = rows[0][1].clone();
            let beta = rows[0][4].clone();
            if rows[1][4] != -(&alpha * &alpha) || rows[2][4] != -(rint(2) * &alpha) {
                return Err(Error::InconsistentPresentation(
                    "3C4 forced relations violated".into(),
                ));
            }
            Ok(ClassificationCode::W3C4 { x, alpha, beta })
        }
        (5, [1, 2]) => {
            let alpha = rows[0][2].clone();
            let beta = rows[0][3].clone();
            if !rows[1][2].is_zero() || rows[1][3] != alpha.clone() / rint(2) {
                return Err(Error::InconsistentPresentation(
                    "3C5 forced relations violated".into(),
                ));
            }
            Ok(ClassificationCode::W3C5 { x, alpha, beta })
        }
        _ => Err(Error::InconsistentPresentation(format!(
            "codim 3 one-point with a = {} and pivots {:?}",
            a, pivots
        ))),
    }
}

fn classify_codim3_two_point(
    k: &SubalgebraPresentation,
    supp: &[Rational],
    fmin: &FactoredPoly,
) -> Result<ClassificationCode> {
    let (p, q) = (&supp[0], &supp[1]);
    let (ap, aq) = (fmin.multiplicity(p), fmin.multiplicity(q));
    match (ap, aq) {
        (2, 2) => {
            // Single extra generator (t-x)(t-y)(alpha t + beta) mod fmin.
            let qr = Quotient::new(fmin);
            let mut rows: matq::Mat = k
                .generators
                .iter()
                .map(|g| qr.reduce(g.coeff()))
                .collect();
            let piv = matq::rref(&mut rows);
            if piv.len() != 1 {
                return Err(Error::InconsistentPresentation(
                    "3A expects a one-dimensional quotient".into(),
                ));
            }
            let gen = LaurentPoly::from_terms(
                rows[0]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (k as i64, c.clone())),
            );
            let xy = &LaurentPoly::t_minus(p) * &LaurentPoly::t_minus(q);
            let lin = gen.div_exact(&xy).ok_or_else(|| {
                Error::InconsistentPresentation("3A generator is not divisible by (t-x)(t-y)".into())
            })?;
            let alpha = lin.coeff(1);
            let beta = lin.coeff(0);
            // table side conditions
            for r in [p, q] {
                if (&alpha * r + &beta).is_zero() {
                    return Err(Error::InconsistentPresentation(
                        "3A side condition alpha*x + beta != 0 violated".into(),
                    ));
                }
            }
            // normalize the scaling (alpha, beta) -> (lambda alpha, lambda beta)
            let scale = if alpha.is_zero() { beta.clone() } else { alpha.clone() };
            Ok(ClassificationCode::W3A {
                x: p.clone(),
                y: q.clone(),
                alpha: alpha / &scale,
                beta: beta / &scale,
            })
        }
        (a, 1) | (1, a) if a == 3 || a == 4 => {
            let (x, y) = if ap > aq { (p, q) } else { (q, p) };
            // The hat subalgebra at x: jets of the generators mod u^a.
            let (rows, pivots) = local_echelon(k, x, a as usize)?;
            match (a, pivots.as_slice()) {
                (3, [1]) => Ok(ClassificationCode::W3B1 {
                    x: x.clone(),
                    y: y.clone(),
                    alpha: rows[0][1].clone(),
                }),
                (4, [1, 2]) => {
                    if !rows[1][2].is_zero() {
                        return Err(Error::InconsistentPresentation(
                            "3B2 forced relation violated".into(),
                        ));
                    }
                    Ok(ClassificationCode::W3B2 {
                        x: x.clone(),
                        y: y.clone(),
                        alpha: rows[0][2].clone(),
                    })
                }
                _ => Err(Error::InconsistentPresentation(format!(
                    "two-point codim 3 with a = {} and pivots {:?}",
                    a, pivots
                ))),
            }
        }
        _ => Err(Error::InconsistentPresentation(format!(
            "two-point multiplicities ({}, {}) match no table row",
            ap, aq
        ))),
    }
}

/// Builds the presentation of a classification code (the table row read
/// backwards). Round-trips through [`classify`].
pub fn generate(code: &ClassificationCode) -> Result<SubalgebraPresentation> {
    let u = LaurentPoly::t_minus;
    let mk = |f0: FactoredPoly, gens: Vec<LaurentPoly>| -> Result<SubalgebraPresentation> {
        let generators = gens
            .into_iter()
            .map(|g| VirElement::field(g, AlgebraTag::W))
            .collect::<Result<Vec<_>>>()?;
        SubalgebraPresentation::new(f0, generators, AlgebraTag::W)
    };
    match code {
        ClassificationCode::Wf { f } => mk(f.clone(), vec![]),
        ClassificationCode::W21 { x, alpha } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 3)], 0)?;
            let g = &u(x) + &u(x).pow(2).scale(alpha);
            mk(f0, vec![g])
        }
        ClassificationCode::W22 { x, alpha } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 4)], 0)?;
            let g1 = &u(x) + &u(x).pow(3).scale(alpha);
            let g2 = u(x).pow(2);
            mk(f0, vec![g1, g2])
        }
        ClassificationCode::W3A { x, y, alpha, beta } => {
            if x == y {
                return Err(Error::Domain("3A needs x != y".into()));
            }
            for r in [x, y] {
                if (alpha * r + beta).is_zero() {
                    return Err(Error::Domain("3A needs alpha*x + beta != 0".into()));
                }
            }
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 2), (y.clone(), 2)], 0)?;
            let mut lin = LaurentPoly::monomial(1, alpha.clone());
            lin.add_term(0, beta.clone());
            let g = &(&u(x) * &u(y)) * &lin;
            mk(f0, vec![g])
        }
        ClassificationCode::W3B1 { x, y, alpha } => {
            if x == y {
                return Err(Error::Domain("3B1 needs x != y".into()));
            }
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 3), (y.clone(), 1)], 0)?;
            // (u + alpha u^2) corrected to vanish at y by a multiple of u^3
            let base = &u(x) + &u(x).pow(2).scale(alpha);
            let ux_y = y - x; // u(x) evaluated at t = y
            let val = &ux_y + &(&ux_y * &ux_y * alpha);
            let corr = val / (&ux_y * &ux_y * &ux_y);
            let g = &base - &u(x).pow(3).scale(&corr);
            mk(f0, vec![g])
        }
        ClassificationCode::W3B2 { x, y, alpha } => {
            if x == y {
                return Err(Error::Domain("3B2 needs x != y".into()));
            }
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 4), (y.clone(), 1)], 0)?;
            let ux_y = y - x;
            let pow4 = &ux_y * &ux_y * &ux_y * &ux_y;
            let base1 = &u(x) + &u(x).pow(3).scale(alpha);
            let val1 = &ux_y + &(&ux_y * &ux_y * &ux_y * alpha);
            let g1 = &base1 - &u(x).pow(4).scale(&(val1 / &pow4));
            let base2 = u(x).pow(2);
            let val2 = &ux_y * &ux_y;
            let g2 = &base2 - &u(x).pow(4).scale(&(val2 / &pow4));
            mk(f0, vec![g1, g2])
        }
        ClassificationCode::W3C1 { x, alpha } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 4)], 0)?;
            let g = &u(x).pow(2) + &u(x).pow(3).scale(alpha);
            mk(f0, vec![g])
        }
        ClassificationCode::W3C2 { x, alpha, beta } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 4)], 0)?;
            let g = &(&u(x) + &u(x).pow(2).scale(alpha)) + &u(x).pow(3).scale(beta);
            mk(f0, vec![g])
        }
        ClassificationCode::W3C3 { x, alpha, beta } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 5)], 0)?;
            let g1 = &(&u(x) + &u(x).pow(2).scale(alpha)) + &u(x).pow(4).scale(beta);
            let g2 = &u(x).pow(3) - &u(x).pow(4).scale(alpha);
            mk(f0, vec![g1, g2])
        }
        ClassificationCode::W3C4 { x, alpha, beta } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 6)], 0)?;
            let g1 = &(&u(x) + &u(x).pow(2).scale(alpha)) + &u(x).pow(5).scale(beta);
            let g2 = &u(x).pow(3) - &u(x).pow(5).scale(&(alpha * alpha));
            let g3 = &u(x).pow(4) - &u(x).pow(5).scale(&(rint(2) * alpha));
            mk(f0, vec![g1, g2, g3])
        }
        ClassificationCode::W3C5 { x, alpha, beta } => {
            let f0 = FactoredPoly::new(Rational::one(), [(x.clone(), 5)], 0)?;
            let g1 = &(&u(x) + &u(x).pow(3).scale(alpha)) + &u(x).pow(4).scale(beta);
            let g2 = &u(x).pow(2) + &u(x).pow(4).scale(&(alpha / rint(2)));
            mk(f0, vec![g1, g2])
        }
    }
}

/// A rational combination of brackets `[v_p, v_q]` (with `v_p = f t^p ∂ +
/// lambda_p z`) plus `W(f^2)`-span corrections, evaluating exactly to `z`.
#[derive(Clone, Debug)]
pub struct ZCombination {
    /// `(coeff, p, q)`: the term `coeff * [v_p, v_q]`.
    pub bracket_terms: Vec<(Rational, i64, i64)>,
    /// `(coeff, m)`: the term `coeff * f^2 t^m ∂`.
    pub field_terms: Vec<(Rational, i64)>,
}

impl ZCombination {
    /// Evaluates the combination with the given lifts; the result should be
    /// exactly `z`.
    pub fn evaluate(&self, f: &LaurentPoly, lifts: &BTreeMap<i64, Rational>) -> Result<VirElement> {
        let v = |p: i64| -> Result<VirElement> {
            let lambda = lifts.get(&p).cloned().unwrap_or_else(Rational::zero);
            VirElement::new(f.mul_t_pow(p), lambda, AlgebraTag::Vir)
        };
        let mut acc = VirElement::zero(AlgebraTag::Vir);
        for (c, p, q) in &self.bracket_terms {
            let br = vir_bracket(&v(*p)?, &v(*q)?)?;
            acc = acc.add(&br.scale(c))?;
        }
        let f2 = f * f;
        for (c, m) in &self.field_terms {
            let el = VirElement::new(f2.mul_t_pow(*m), Rational::zero(), AlgebraTag::Vir)?;
            acc = acc.add(&el.scale(c))?;
        }
        Ok(acc)
    }
}

/// Expresses `z` as an explicit rational combination of brackets of lifted
/// elements `v_p = f t^p ∂ + lambda_p z`, following the residue argument:
/// choose `d` with `Res_0(t^(d-3) f^2) != 0`, then the difference of two
/// scaled brackets at `p + q = d` is a nonzero multiple of `z`.
pub fn vir_express_z(
    f: &LaurentPoly,
    lifts: &BTreeMap<i64, Rational>,
) -> Result<ZCombination> {
    if f.is_zero() {
        return Err(Error::Domain("f must be nonzero".into()));
    }
    let f2 = f * f;
    // Res_0(t^(d-3) f^2) is the coefficient of t^(2-d) in f^2; pick the d of
    // smallest magnitude (then smallest value) with a nonzero coefficient.
    let d = f2
        .terms()
        .map(|(&m, _)| 2 - m)
        .min_by_key(|&d| (d.abs(), d))
        .expect("nonzero f^2");
    // Pick the lexicographically first valid (q1, q2).
    let (q1, q2) = 'found: {
        for q1 in 0i64..=6 {
            if d - 2 * q1 == 0 {
                continue;
            }
            for q2 in q1 + 1..=q1 + 7 {
                if d - 2 * q2 != 0 && q1 + q2 != d {
                    break 'found (q1, q2);
                }
            }
        }
        unreachable!("a valid (q1, q2) always exists in this range");
    };
    let needed = [d - q1, q1, d - q2, q2];
    let missing: Vec<i64> = needed
        .iter()
        .copied()
        .filter(|p| !lifts.contains_key(p))
        .collect();
    if !missing.is_empty() {
        return Err(Error::InsufficientLifts {
            needed: missing
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            d,
            q1,
            q2,
        });
    }
    let c1 = rint(1) / rint(d - 2 * q1);
    let c2 = -rint(1) / rint(d - 2 * q2);
    let raw = ZCombination {
        bracket_terms: vec![(c1, d - q1, q1), (c2, d - q2, q2)],
        field_terms: vec![],
    };
    let value = raw.evaluate(f, lifts)?;
    if !value.coeff().is_zero() {
        return Err(Error::Domain(
            "internal: field parts of the z-combination did not cancel".into(),
        ));
    }
    let cz = value.central().clone();
    if cz.is_zero() {
        return Err(Error::Domain(
            "internal: the z-combination degenerated to zero".into(),
        ));
    }
    let scale = cz.recip();
    Ok(ZCombination {
        bracket_terms: raw
            .bracket_terms
            .into_iter()
            .map(|(c, p, q)| (c * &scale, p, q))
            .collect(),
        field_terms: vec![],
    })
}
