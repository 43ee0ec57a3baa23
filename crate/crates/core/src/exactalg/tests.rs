use num::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;

pub(crate) fn random_rational(rng: &mut StdRng) -> Rational {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=4);
    rat(n, d)
}

pub(crate) fn random_laurent(rng: &mut StdRng, lo: i64, hi: i64) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for k in lo..=hi {
        if rng.gen_bool(0.4) {
            p.add_term(k, random_rational(rng));
        }
    }
    p
}

#[test]
fn derivative_power_rule() {
    let p = LaurentPoly::t_pow(2);
    assert_eq!(p.derivative(), LaurentPoly::monomial(1, rint(2)));
    let q = LaurentPoly::monomial(-1, rint(3));
    assert_eq!(q.derivative(), LaurentPoly::monomial(-2, rint(-3)));
    assert_eq!(LaurentPoly::zero().derivative(), LaurentPoly::zero());
}

#[test]
fn residue_reads_off_coefficient() {
    let p = &LaurentPoly::monomial(-1, rint(3)) + &LaurentPoly::t_pow(1);
    assert_eq!(p.residue0(), rint(3));
    assert_eq!(LaurentPoly::t_pow(-2).residue0(), rint(0));
}

#[test]
fn residues_of_derivatives_vanish_and_product_rule_holds() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let p = random_laurent(&mut rng, -8, 8);
        let q = random_laurent(&mut rng, -8, 8);
        assert!(p.derivative().residue0().is_zero());
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn taylor_jet_examples() {
    let one = rint(1);
    // (t^2 at x=1, N=2) -> (1, 2, 1)
    let j = LaurentPoly::t_pow(2).taylor_jet(&one, 2).unwrap();
    assert_eq!(j.coeffs(), &[rint(1), rint(2), rint(1)]);
    // (t^-1 at x=1, N=2) -> geometric series 1 - u + u^2
    let j = LaurentPoly::t_pow(-1).taylor_jet(&one, 2).unwrap();
    assert_eq!(j.coeffs(), &[rint(1), rint(-1), rint(1)]);
    // (t at x=0, N=0) -> (0)
    let j = LaurentPoly::t_pow(1).taylor_jet(&rint(0), 0).unwrap();
    assert_eq!(j.coeffs(), &[rint(0)]);
    // pole at base point
    assert!(matches!(
        LaurentPoly::t_pow(-1).taylor_jet(&rint(0), 1),
        Err(Error::PoleAtBasePoint)
    ));
}

#[test]
fn taylor_jet_respects_ring_structure() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..50 {
        let p = random_laurent(&mut rng, -4, 4);
        let q = random_laurent(&mut rng, -4, 4);
        let x = rat(rng.gen_range(1i64..=5), 1);
        let n = 5;
        let jp = p.taylor_jet(&x, n).unwrap();
        let jq = q.taylor_jet(&x, n).unwrap();
        let jpq = (&p * &q).taylor_jet(&x, n).unwrap();
        assert_eq!(jp.mul(&jq), jpq);
    }
}

#[test]
fn radical_examples() {
    let f = FactoredPoly::new(rint(1), [(rint(1), 2), (rint(2), 1)], 0).unwrap();
    let r = f.radical();
    assert_eq!(r.expand(), FactoredPoly::from_roots([rint(1), rint(2)]).unwrap().expand());

    let g = FactoredPoly::new(rint(1), [(rint(3), 1)], 0).unwrap();
    assert_eq!(g.radical(), g);

    let h = FactoredPoly::new(rint(5), [(rint(1), 4)], 0).unwrap();
    let hr = h.radical();
    assert_eq!(hr.expand(), LaurentPoly::t_minus(&rint(1)));
}

#[test]
fn skew_residue_form_examples() {
    let mut rng = StdRng::seed_from_u64(13);
    // antisymmetry, including (a, a) -> 0
    for _ in 0..50 {
        let a = random_laurent(&mut rng, -5, 5);
        let b = random_laurent(&mut rng, -5, 5);
        let f = random_laurent(&mut rng, -3, 3);
        assert_eq!(skew_residue_form(&a, &b, &f), -skew_residue_form(&b, &a, &f));
        assert!(skew_residue_form(&a, &a, &f).is_zero());
    }
    // (a = t, b = t^2, f = 1) -> 0
    assert!(skew_residue_form(&LaurentPoly::t_pow(1), &LaurentPoly::t_pow(2), &LaurentPoly::one())
        .is_zero());
}

#[test]
fn perfect_square_kernel_element() {
    // f = t^2 is a square; 1/sqrt(f) = t^-1 pairs to zero with every monomial.
    let f = LaurentPoly::t_pow(2);
    let a = LaurentPoly::t_pow(-1);
    for m in -10..=10 {
        let b = LaurentPoly::t_pow(m);
        assert!(skew_residue_form(&a, &b, &f).is_zero(), "m = {}", m);
    }
    // f = (1+t)^2: a long enough truncation of 1/(1+t) pairs to zero with
    // every monomial in the window (the form only sees finitely many of a's
    // coefficients).
    let g = &LaurentPoly::one() + &LaurentPoly::t_pow(1);
    let f = &g * &g;
    let mut trunc = LaurentPoly::zero();
    for j in 0..=12 {
        trunc.add_term(j, rint(if j % 2 == 0 { 1 } else { -1 }));
    }
    for m in -10..=10 {
        let b = LaurentPoly::t_pow(m);
        assert!(skew_residue_form(&trunc, &b, &f).is_zero(), "m = {}", m);
    }
}

#[test]
fn non_square_has_trivial_kernel_on_windows() {
    // f = t is not a perfect square: no nonzero a supported on [-5,5]
    // annihilates all monomials b in [-8,8].
    let f = LaurentPoly::t_pow(1);
    let a_degs: Vec<i64> = (-5..=5).collect();
    let b_degs: Vec<i64> = (-8..=8).collect();
    let mat: crate::matq::Mat = b_degs
        .iter()
        .map(|&m| {
            let b = LaurentPoly::t_pow(m);
            a_degs
                .iter()
                .map(|&k| skew_residue_form(&LaurentPoly::t_pow(k), &b, &f))
                .collect()
        })
        .collect();
    assert!(crate::matq::nullspace(&mat).is_empty());
}

#[test]
fn jet_invert_and_reversion() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..30 {
        let x = rat(rng.gen_range(-3i64..=3), 1);
        let n = 6;
        // unit jet
        let mut coeffs: Vec<Rational> = Vec::new();
        coeffs.push(rat(rng.gen_range(1i64..=5), 1));
        for _ in 0..n {
            coeffs.push(random_rational(&mut rng));
        }
        let j = Jet::new(x.clone(), coeffs);
        let inv = j.invert().unwrap();
        assert_eq!(j.mul(&inv), Jet::constant(x.clone(), rint(1), n));

        // reversion of u = c1*u + ...
        let mut s = Jet::zero(x.clone(), n);
        for k in 2..=n {
            let c = random_rational(&mut rng);
            s = s.add(&Jet::local_monomial(x.clone(), k, n).scale(&c));
        }
        s = s.add(&Jet::local_monomial(x.clone(), 1, n).scale(&rat(rng.gen_range(1i64..=4), 1)));
        let g = s.reversion().unwrap();
        let id = Jet::local_monomial(x.clone(), 1, n);
        assert_eq!(s.compose(&g).unwrap(), id);
        assert_eq!(g.compose(&s).unwrap(), id);
    }
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<LaurentPoly>();
    assert_send_sync::<FactoredPoly>();
    assert_send_sync::<Jet<Rational>>();
    assert_send_sync::<crate::liealg::VirElement>();
    assert_send_sync::<crate::localfn::LocalFunction>();
    assert_send_sync::<crate::sympoisson::SymPoly>();
    assert_send_sync::<crate::dloc::DLocElement>();
    assert_send_sync::<crate::weyl::WeylElement>();
    assert_send_sync::<crate::weyl::NVector>();
}

#[test]
fn dual_numbers_square_to_zero() {
    let h = Dual::new(rint(0), rint(1));
    assert!((h.clone() * h).is_zero());
    let u = Dual::new(rint(2), rint(3));
    let inv = u.invert().unwrap();
    assert_eq!(u * inv, Dual::constant(rint(1)));
}

#[test]
fn laurent_grammar_round_trip() {
    let p = parse_laurent("3*t^-2 + t - 5/2").unwrap();
    assert_eq!(p.coeff(-2), rint(3));
    assert_eq!(p.coeff(1), rint(1));
    assert_eq!(p.coeff(0), rat(-5, 2));
    let printed = p.to_string();
    assert_eq!(parse_laurent(&printed).unwrap(), p);

    let (f, z) = parse_vir_terms("t^3 - 2*z").unwrap();
    assert_eq!(f, LaurentPoly::t_pow(3));
    assert_eq!(z, rint(-2));

    assert!(parse_laurent("t + q").is_err());
    assert!(parse_laurent("").is_err());
    match parse_laurent("t ^ x") {
        Err(Error::Parse { .. }) => {}
        other => panic!("expected parse error, got {:?}", other),
    }
}

#[test]
fn divisor_enumeration_is_degree_sorted() {
    let f = FactoredPoly::new(rint(1), [(rint(1), 2), (rint(2), 1)], 0).unwrap();
    let divs = f.monic_divisors();
    assert_eq!(divs.len(), 6);
    let degs: Vec<i64> = divs.iter().map(|d| d.degree()).collect();
    let mut sorted = degs.clone();
    sorted.sort();
    assert_eq!(degs, sorted);
}

#[test]
fn exact_division() {
    let f = FactoredPoly::new(rint(1), [(rint(1), 1), (rint(2), 1)], 0).unwrap();
    let p = f.expand();
    let t1 = LaurentPoly::t_minus(&rint(1));
    assert!(p.divisible_by(&t1));
    assert_eq!(p.div_exact(&t1).unwrap(), LaurentPoly::t_minus(&rint(2)));
    assert!(!LaurentPoly::t_pow(1).divisible_by(&t1));
    // Laurent shifts divide out
    let q = p.mul_t_pow(-3);
    assert!(q.divisible_by(&t1));
}
