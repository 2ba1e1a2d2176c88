use entropy_lab::basis::{fourier_coefficients, project_subspace, synthesize, CoefficientVector, SymmetryClass};
use entropy_lab::comb::delta::{comb_constants, conjugate, DeltaComb};
use entropy_lab::comb::exact::ratio;
use entropy_lab::comb::limits::limit_pnorm;
use entropy_lab::comb::profile::GaussianProfile2D;
use entropy_lab::functionals::{default_grid, entropy_bound, grid_fourier, total_entropy_converged};
use entropy_lab::sig9;
use num_complex::Complex64;
use proptest::prelude::*;

fn class() -> impl Strategy<Value = SymmetryClass> {
    prop_oneof![Just(SymmetryClass::Full), Just(SymmetryClass::Odd), Just(SymmetryClass::OddFplus)]
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)), 1..=max_len)
}

fn vector(max_len: usize) -> impl Strategy<Value = CoefficientVector> {
    (coeffs(max_len), class()).prop_map(|(c, k)| project_subspace(&CoefficientVector::new(c, k), k))
}

fn nonzero(c: &CoefficientVector) -> bool {
    c.norm_sqr() > 1e-6
}

fn comb() -> impl Strategy<Value = DeltaComb> {
    prop_oneof![Just(DeltaComb::alternating()), Just(DeltaComb::uniform())]
}

proptest! {
    #[test]
    fn transform_has_period_four(c in vector(24)) {
        let twice = fourier_coefficients(&fourier_coefficients(&c));
        for (n, (a, b)) in c.coeffs.iter().zip(&twice.coeffs).enumerate() {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(*b, a * parity);
        }
        prop_assert_eq!(fourier_coefficients(&fourier_coefficients(&twice)), c);
    }

    #[test]
    fn projection_is_idempotent(c in coeffs(24), k in class()) {
        let once = project_subspace(&CoefficientVector::new(c, SymmetryClass::Full), k);
        prop_assert_eq!(project_subspace(&once, k).coeffs, once.coeffs.clone());
        prop_assert!(CoefficientVector::new(once.coeffs, k).respects_class());
    }

    #[test]
    fn grid_transform_matches_coefficient_transform(c in vector(10)) {
        prop_assume!(nonzero(&c));
        let grid = default_grid(&c);
        let lhs = grid_fourier(&synthesize(&c, &grid).unwrap()).unwrap();
        let rhs = synthesize(&fourier_coefficients(&c), &grid).unwrap();
        prop_assert!(lhs.sup_distance(&rhs).unwrap() < 1e-8 * c.norm_sqr().sqrt());
    }

    #[test]
    fn dilation_keeps_comb_invariants(base in comb(), k in 1i64..200, m in 1i64..200, j in 1i64..50, l in 1i64..50) {
        let mu = ratio(k, m);
        let d = base.dilate(&mu).unwrap();
        let du = d.dual_lattice().unwrap();
        let bu = base.dual_lattice().unwrap();
        prop_assert_eq!(&d.lattice.r * &du.r, &base.lattice.r * &bu.r);
        prop_assert_eq!(d.r_over_b2().unwrap(), base.r_over_b2().unwrap());
        prop_assert!(d.norm_balance_holds().unwrap());
        // dilations compose
        let nu = ratio(j, l);
        prop_assert_eq!(d.dilate(&nu).unwrap(), base.dilate(&(&mu * &nu)).unwrap());
        let p = ratio(4, 3);
        let (c0, c1) = (comb_constants(&base, &p).unwrap(), comb_constants(&d, &p).unwrap());
        prop_assert_eq!(c1.exp_cq, c0.exp_cq);
        prop_assert_eq!(c1.exp_c, c0.exp_c);
        // the L² norm of the limit is dilation invariant
        let g = GaussianProfile2D::symmetric();
        let (n0, n1) = (limit_pnorm(&base, &g, 2.0), limit_pnorm(&d, &g, 2.0));
        prop_assert!((n1 - n0).abs() <= 1e-12 * n0);
    }

    #[test]
    fn conjugate_exponent_is_an_involution(k in 2i64..400, m in 1i64..200) {
        prop_assume!(k > m);
        let p = ratio(k, m);
        prop_assert_eq!(conjugate(&conjugate(&p)), p);
    }

    #[test]
    fn nine_digit_formatting_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = sig9(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-9 * x.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn entropy_never_drops_below_the_gaussian_value(c in vector(6)) {
        prop_assume!(nonzero(&c));
        let total = total_entropy_converged(&c.normalized().unwrap(), 1e-9).unwrap().total;
        prop_assert!(total >= entropy_bound() - 1e-8, "total {total}");
    }
}
