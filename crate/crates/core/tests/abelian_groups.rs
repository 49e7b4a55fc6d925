use std::f64::consts::PI;

use abelian_lattice::abelian_groups::*;
use num_complex::Complex64;
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn ising_fixed_point() {
    let g = FiniteAbelianGroup::cyclic(2).unwrap();
    let w = WeightFunction::from_real(g, &[1.0 + 2f64.sqrt(), 1.0]).unwrap();
    assert!(check_self_dual(&w) < TOL);
    let x = 2f64.sqrt() - 1.0;
    assert!((ising_dual_weight(x) - x).abs() < TOL);
}

#[test]
fn delta_transforms_to_constant() {
    for f in [vec![2], vec![3], vec![2, 3], vec![2, 2]] {
        let g = FiniteAbelianGroup::new(&f).unwrap();
        let n = g.order() as f64;
        let hat = fourier_transform(&WeightFunction::delta(&g));
        assert!(hat
            .values
            .iter()
            .all(|z| (z - c(n.powf(-0.5))).norm() < TOL));
    }
}

#[test]
fn potts_self_dual() {
    let w = self_dual_potts_weight(4).unwrap();
    assert_eq!(w.values, vec![c(3.0), c(1.0), c(1.0), c(1.0)]);
    for q in 2..9 {
        assert!(check_self_dual(&self_dual_potts_weight(q).unwrap()) <= TOL);
    }
}

#[test]
fn fz_examples() {
    let w = fz_weight(2, PI / 4.0).unwrap();
    assert!((w.values[1].re - (PI / 8.0).tan()).abs() < TOL);
    assert!((w.values[1].re - (2f64.sqrt() - 1.0)).abs() < TOL);
    let w = fz_weight(5, PI / 4.0).unwrap();
    assert!((w.values[1] - w.values[4]).norm() < TOL);
    assert!((w.values[2] - w.values[3]).norm() < TOL);
    for r in 2..12 {
        assert!(
            check_self_dual(&fz_weight(r, PI / 4.0).unwrap()) <= TOL,
            "r' = {r}"
        );
    }
    assert!(fz_weight(3, 0.0).is_err());
    assert!(fz_weight(3, PI / 2.0).is_err());
}

#[test]
fn fz_anisotropic_duality() {
    // ℱ w_θ ∝ w_{π/2 − θ}
    for r in 2..8 {
        let th = 0.3;
        let hat = fourier_transform(&fz_weight(r, th).unwrap());
        let other = fz_weight(r, PI / 2.0 - th).unwrap();
        let ratio = hat.values[0] / other.values[0];
        assert!(hat.max_diff(&other.scale(ratio)) < 1e-11, "r' = {r}");
    }
}

#[test]
fn duality_pair_involution() {
    let g = FiniteAbelianGroup::cyclic(2).unwrap();
    let w = WeightFunction::from_real(g, &[1.0, 0.5]).unwrap();
    let (_, res) = duality_pair(&w);
    assert!(res < TOL);
    let ww = fourier_transform(&fourier_transform(&w));
    assert!(ww.max_diff(&w) < TOL);
}

#[test]
fn ashkin_teller() {
    let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
    let check =
        |v: &[f64]| ashkin_teller_check(&WeightFunction::from_real(g.clone(), v).unwrap()).unwrap();
    let a = check(&[3.0, 1.0, 1.0, 1.0]);
    assert!(a.holds() && a.fourier_fixed_standard);
    let b = check(&[1.0, 1.0, 1.0, 1.0]);
    assert!(!b.holds() && !b.sum_condition && !b.fourier_fixed);
    let c2 = check(&[2.0, 1.0, 0.5, 0.5]);
    assert!(c2.holds());
    // with unequal off-diagonal weights the fixed point needs the swapped identification
    assert!(!c2.fourier_fixed_standard);
    let z4 = FiniteAbelianGroup::cyclic(4).unwrap();
    assert!(ashkin_teller_check(&WeightFunction::constant(&z4, 1.0)).is_err());
}

#[test]
fn dft_spectrum() {
    for q in 2..=12 {
        let m = dft_eigen_multiplicities(q);
        assert!((m[0] - (q / 4 + 1) as f64).abs() < 1e-9, "q = {q}: {m:?}");
        assert!((m.iter().sum::<f64>() - q as f64).abs() < 1e-9);
        let f = dft_matrix(q);
        let f4 = &f * &f * &f * &f;
        let id = nalgebra::DMatrix::<Complex64>::identity(q, q);
        assert!((f4 - id).norm() < 1e-10);
    }
}

fn arb_weight() -> impl Strategy<Value = WeightFunction> {
    prop::sample::select(vec![
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![2, 3],
        vec![3, 4],
        vec![2, 2, 3],
        vec![12],
    ])
    .prop_flat_map(|f| {
        let g = FiniteAbelianGroup::new(&f).unwrap();
        let n = g.order();
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n).prop_map(move |v| {
            WeightFunction::new(
                g.clone(),
                v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
            )
            .unwrap()
        })
    })
}

proptest! {
    #[test]
    fn parseval(w in arb_weight()) {
        let hat = fourier_transform(&w);
        prop_assert!((hat.l2_norm_sq() - w.l2_norm_sq()).abs() <= TOL * (1.0 + w.l2_norm_sq()));
    }

    #[test]
    fn order_four(w in arb_weight()) {
        let f4 = fourier_transform(&fourier_transform(&fourier_transform(&fourier_transform(&w))));
        prop_assert!(f4.max_diff(&w) <= TOL * 10.0);
    }

    #[test]
    fn shift_and_modulation(q in 2usize..10, vals in prop::collection::vec(-3.0f64..3.0, 10)) {
        let g = FiniteAbelianGroup::cyclic(q).unwrap();
        let w = WeightFunction::from_real(g, &vals[..q]).unwrap();
        // ℱ(Rw) = χ ℱw and ℱ(χ^{-1} w) = R ℱw
        let lhs = fourier_transform(&w.shift(1));
        let rhs = fourier_transform(&w).modulate(1);
        prop_assert!(lhs.max_diff(&rhs) <= TOL * 10.0);
        let lhs = fourier_transform(&w.modulate(q - 1));
        let rhs = fourier_transform(&w).shift(1);
        prop_assert!(lhs.max_diff(&rhs) <= TOL * 10.0);
    }

    #[test]
    fn fz_recursion(q in 2usize..13) {
        let w = fz_weight(q, PI / 4.0).unwrap();
        let lam = -Complex64::from_polar(1.0, -PI / (2.0 * q as f64));
        let xi = Complex64::from_polar(1.0, 2.0 * PI / q as f64);
        prop_assert!((w.values[0] - c(1.0)).norm() < TOL);
        prop_assert!(w.is_positive() && w.is_symmetric(1e-12));
        for k in 0..q {
            let next = if k + 1 == q { w.values[0] } else { w.values[k + 1] };
            let xk = xi.powi(-(k as i32));
            let r = next * (c(1.0) + lam.powi(3) * xk) + w.values[k] * (lam + lam * lam * xk);
            prop_assert!(r.norm() <= TOL, "k = {} residual {}", k, r.norm());
        }
    }

    #[test]
    fn characters_multiplicative(f in prop::sample::select(vec![vec![2,3], vec![4], vec![2,2,2]]), a in 0usize..64, b in 0usize..64, k in 0usize..64) {
        let g = FiniteAbelianGroup::new(&f).unwrap();
        let n = g.order();
        let (a, b, k) = (a % n, b % n, k % n);
        let lhs = g.character(k, g.add(a, b));
        prop_assert!((lhs - g.character(k, a) * g.character(k, b)).norm() < TOL);
        prop_assert!((g.character(k, a).norm() - 1.0).abs() < TOL);
    }
}
