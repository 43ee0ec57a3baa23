
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::exactalg::rat;

fn random_sympoly(rng: &mut StdRng, max_deg: usize) -> SymPoly {
    let mut p = SymPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let deg = rng.gen_range(0..=max_deg);
        let mono: Vec<i64> = (0..deg).map(|_| rng.gen_range(-3i64..=3)).collect();
        p.add_term(mono, crate::exactalg::tests::random_rational(rng));
    }
    p
}

#[test]
fn generator_bracket() {
    // {e_1, e_-1} = -2 e_0
    let b = poisson_bracket(&SymPoly::e(1), &SymPoly::e(-1));
    assert_eq!(b, SymPoly::e(0).scale(&rint(-2)));
    // {P, P} = 0
    let mut rng = StdRng::seed_from_u64(41);
    for _ in 0..20 {
        let p = random_sympoly(&mut rng, 3);
        assert!(poisson_bracket(&p, &p).is_zero());
    }
    // Leibniz on a product: {e_0, e_1 e_2} = 3 e_1 e_2
    let prod = SymPoly::e(1).mul(&SymPoly::e(2));
    let b = poisson_bracket(&SymPoly::e(0), &prod);
    assert_eq!(b, prod.scale(&rint(3)));
}

#[test]
fn leibniz_and_jacobi() {
    let mut rng = StdRng::seed_from_u64(42);
    for _ in 0..40 {
        let p = random_sympoly(&mut rng, 3);
        let q = random_sympoly(&mut rng, 2);
        let r = random_sympoly(&mut rng, 2);
        // {p, qr} = {p,q} r + q {p,r}
        let lhs = poisson_bracket(&p, &q.mul(&r));
        let rhs = poisson_bracket(&p, &q).mul(&r).add(&q.mul(&poisson_bracket(&p, &r)));
        assert_eq!(lhs, rhs);
        // Jacobi
        let jac = poisson_bracket(&poisson_bracket(&p, &q), &r)
            .add(&poisson_bracket(&poisson_bracket(&q, &r), &p))
            .add(&poisson_bracket(&poisson_bracket(&r, &p), &q));
        assert!(jac.is_zero());
    }
}

#[test]
fn ev_chi_examples() {
    use crate::localfn::tests::chi;
    use crate::liealg::AlgebraTag;
    // ev_{chi_{1;1}}(e_0) = chi(t∂) = 1
    let c = chi(AlgebraTag::W, 1, &[1]);
    assert_eq!(ev_chi(&SymPoly::e(0), &c).unwrap(), rint(1));
    // constants map to themselves
    assert_eq!(ev_chi(&SymPoly::constant(rint(5)), &c).unwrap(), rint(5));
    // ev_{chi_{1;1,2}}(e_2) = chi(t^3∂) = 7
    let c = chi(AlgebraTag::W, 1, &[1, 2]);
    assert_eq!(ev_chi(&SymPoly::e(2), &c).unwrap(), rint(7));
    // tag/support mismatch: e_-2 needs t^-1∂, absent from W_{>=-1}
    let c = chi(AlgebraTag::WGeqM1, 1, &[1]);
    assert!(ev_chi(&SymPoly::e(-2), &c).is_err());
}

#[test]
fn ev_chi_is_a_ring_homomorphism() {
    use crate::localfn::tests::random_one_point_upto;
    use crate::liealg::AlgebraTag;
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..20 {
        let c = random_one_point_upto(&mut rng, AlgebraTag::W, 3);
        let p = random_sympoly(&mut rng, 2);
        let q = random_sympoly(&mut rng, 2);
        let lhs = ev_chi(&p.mul(&q), &c).unwrap();
        let rhs = ev_chi(&p, &c).unwrap() * ev_chi(&q, &c).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn det_d_examples() {
    use crate::liealg::AlgebraTag;
    let t = VirElement::field(LaurentPoly::t_pow(1), AlgebraTag::W).unwrap();
    let t2 = VirElement::field(LaurentPoly::t_pow(2), AlgebraTag::W).unwrap();
    let one = VirElement::field(LaurentPoly::one(), AlgebraTag::W).unwrap();
    // n = 1: D(t∂; t^2∂) = e_1
    assert_eq!(det_d(std::slice::from_ref(&t), std::slice::from_ref(&t2)).unwrap(), SymPoly::e(1));
    // repeated row -> 0
    let d = det_d(&[t.clone(), t.clone()], &[t2.clone(), one.clone()]).unwrap();
    assert!(d.is_zero());
    // n = 2: D(∂, t∂; ∂, t∂) = e_-1^2
    let d = det_d(&[one.clone(), t.clone()], &[one.clone(), t.clone()]).unwrap();
    assert_eq!(d, SymPoly::e(-1).mul(&SymPoly::e(-1)));
    // size mismatch
    assert!(det_d(&[t], &[]).is_err());
}

#[test]
fn det_bracket_expands_over_slots() {
    // {D(us; vs), w} = sum over slots of D with one argument bracketed.
    use crate::liealg::AlgebraTag;
    let mut rng = StdRng::seed_from_u64(44);
    for _ in 0..15 {
        let mk = |rng: &mut StdRng| {
            VirElement::field(
                crate::exactalg::tests::random_laurent(rng, -2, 2),
                AlgebraTag::W,
            )
            .unwrap()
        };
        for n in 1..=2usize {
            let us: Vec<VirElement> = (0..n).map(|_| mk(&mut rng)).collect();
            let vs: Vec<VirElement> = (0..n).map(|_| mk(&mut rng)).collect();
            let w = mk(&mut rng);
            let lhs =
                poisson_bracket(&det_d(&us, &vs).unwrap(), &SymPoly::from_field(&w).unwrap());
            let mut rhs = SymPoly::zero();
            for slot in 0..n {
                let mut us2 = us.clone();
                us2[slot] = witt_bracket(&us[slot], &w).unwrap();
                rhs = rhs.add(&det_d(&us2, &vs).unwrap());
                let mut vs2 = vs.clone();
                vs2[slot] = witt_bracket(&vs[slot], &w).unwrap();
                rhs = rhs.add(&det_d(&us, &vs2).unwrap());
            }
            assert_eq!(lhs, rhs, "n = {}", n);
        }
    }
}

#[test]
fn ev_of_det_is_gram_minor() {
    // ev_chi(det_D) equals the numeric determinant of the B_chi Gram minor.
    use crate::liealg::AlgebraTag;
    use crate::localfn::{b_chi, tests::random_one_point_upto};
    let mut rng = StdRng::seed_from_u64(45);
    for _ in 0..10 {
        let c = random_one_point_upto(&mut rng, AlgebraTag::W, 2);
        let mk = |rng: &mut StdRng| {
            VirElement::field(
                crate::exactalg::tests::random_laurent(rng, -2, 2),
                AlgebraTag::W,
            )
            .unwrap()
        };
        let us = [mk(&mut rng), mk(&mut rng)];
        let vs = [mk(&mut rng), mk(&mut rng)];
        let sym = ev_chi(&det_d(&us, &vs).unwrap(), &c).unwrap();
        let gram: crate::matq::Mat = us
            .iter()
            .map(|u| vs.iter().map(|v| b_chi(&c, u, v).unwrap()).collect())
            .collect();
        assert_eq!(sym, crate::matq::det(&gram));
    }
}

#[test]
fn i_n_examples() {
    use crate::liealg::AlgebraTag;
    use crate::localfn::tests::chi;
    // chi_{1;1,0} normalizes to order 0 with rank 2
    let c = chi(AlgebraTag::W, 1, &[1, 0]);
    assert!(i_n_vanishes_at(&c, 2, -1..=3).unwrap());
    assert!(!i_n_vanishes_at(&c, 1, -1..=3).unwrap());
    // zero functional
    assert!(i_n_vanishes_at(&LocalFunction::zero(AlgebraTag::W), 0, -1..=1).unwrap());
    // too-small window refused
    let c = chi(AlgebraTag::W, 1, &[0, 0, 1]);
    assert!(i_n_vanishes_at(&c, 2, -1..=1).is_err());
}

#[test]
fn i_n_agrees_with_tuple_enumeration() {
    // The rank criterion coincides with evaluating the determinants of all
    // window tuples, the defining description of the ideal generators.
    // Tuples with a repeated argument give singular matrices, so strictly
    // increasing index subsets suffice.
    use crate::liealg::AlgebraTag;
    use crate::localfn::tests::random_one_point_upto;

    fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for i in start..m {
                cur.push(i);
                rec(i + 1, m, left - 1, cur, out);
                cur.pop();
            }
        }
        rec(0, m, size, &mut cur, &mut out);
        out
    }

    let mut rng = StdRng::seed_from_u64(48);
    for _ in 0..5 {
        let c = random_one_point_upto(&mut rng, AlgebraTag::W, 1);
        let n_top = c.order().unwrap() as i64 + 1;
        let x = c.points()[0].x().clone();
        let fields: Vec<VirElement> = (-1..=n_top)
            .map(|i| {
                VirElement::field(LaurentPoly::t_minus(&x).pow((i + 1) as u32), AlgebraTag::W)
                    .unwrap()
            })
            .collect();
        let m = fields.len();
        for size in 1..=m {
            let mut all_vanish = true;
            'outer: for rows in subsets(m, size) {
                let us: Vec<VirElement> = rows.iter().map(|&i| fields[i].clone()).collect();
                for cols in subsets(m, size) {
                    let vs: Vec<VirElement> = cols.iter().map(|&j| fields[j].clone()).collect();
                    let d = det_d(&us, &vs).unwrap();
                    if !ev_chi(&d, &c).unwrap().is_zero() {
                        all_vanish = false;
                        break 'outer;
                    }
                }
            }
            let via_rank = i_n_vanishes_at(&c, size - 1, -1..=n_top).unwrap();
            assert_eq!(all_vanish, via_rank, "tuple size {}", size);
        }
    }
}

#[test]
fn p_gamma_examples() {
    // p_2(e_0) = t y + 2
    let img = p_gamma_map(&SymPoly::e(0), &rint(2));
    let mut expected = BPoly::monomial(1, 1, rint(1));
    expected.add_term(0, 0, rint(2));
    assert_eq!(img, expected);
    // p_gamma(e_-1) = y
    let img = p_gamma_map(&SymPoly::e(-1), &rat(7, 2));
    assert_eq!(img, BPoly::monomial(0, 1, rint(1)));
}

#[test]
fn p_gamma_respects_poisson_brackets() {
    for gamma in [rint(0), rint(1), rint(2), rat(-1, 2)] {
        for i in -4i64..=4 {
            for j in -4i64..=4 {
                let lhs = p_gamma_map(&SymPoly::e(i), &gamma)
                    .poisson(&p_gamma_map(&SymPoly::e(j), &gamma));
                let rhs = p_gamma_map(&poisson_bracket(&SymPoly::e(i), &SymPoly::e(j)), &gamma);
                assert_eq!(lhs, rhs, "i = {}, j = {}, gamma = {}", i, j, gamma);
            }
        }
    }
}

#[test]
fn j_gamma_examples() {
    // e_1^2 - e_0 e_2 lies in J(0)
    let p = SymPoly::e(1).mul(&SymPoly::e(1)).sub(&SymPoly::e(0).mul(&SymPoly::e(2)));
    assert!(j_gamma_member(&p, &rint(0)));
    // e_0 does not
    assert!(!j_gamma_member(&SymPoly::e(0), &rint(0)));
    // 0 does
    assert!(j_gamma_member(&SymPoly::zero(), &rat(5, 3)));
}

#[test]
fn ev_factors_through_p_gamma() {
    // ev_{chi_{x; alpha, gamma}}(P) = p_gamma(P)(t = x, y = alpha)
    let mut rng = StdRng::seed_from_u64(46);
    for _ in 0..25 {
        let x = rat(rng.gen_range(1i64..=4), 1);
        let alpha = crate::exactalg::tests::random_rational(&mut rng);
        let gamma = crate::exactalg::tests::random_rational(&mut rng);
        let c = LocalFunction::one_point(
            crate::liealg::AlgebraTag::W,
            x.clone(),
            vec![alpha.clone(), gamma.clone()],
        );
        let Ok(c) = c else { continue }; // (alpha, gamma) = (0, 0) is the zero functional
        let p = random_sympoly(&mut rng, 3);
        let direct = ev_chi(&p, &c);
        let Ok(direct) = direct else { continue };
        let through = p_gamma_map(&p, &gamma).eval(&x, &alpha).unwrap();
        assert_eq!(direct, through);
    }
}

#[test]
fn b_chi_matches_sympoly_route() {
    // B_chi(u, v) = ev_chi of the S(W) image of [u, v]
    use crate::liealg::AlgebraTag;
    use crate::localfn::{b_chi, tests::random_one_point_upto};
    let mut rng = StdRng::seed_from_u64(47);
    for _ in 0..20 {
        let c = random_one_point_upto(&mut rng, AlgebraTag::W, 3);
        let u = VirElement::field(
            crate::exactalg::tests::random_laurent(&mut rng, -3, 3),
            AlgebraTag::W,
        )
        .unwrap();
        let v = VirElement::field(
            crate::exactalg::tests::random_laurent(&mut rng, -3, 3),
            AlgebraTag::W,
        )
        .unwrap();
        let lhs = b_chi(&c, &u, &v).unwrap();
        let rhs = ev_chi(
            &SymPoly::from_field(&witt_bracket(&u, &v).unwrap()).unwrap(),
            &c,
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }
}
