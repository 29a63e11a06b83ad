use fracspace::direct::{riesz_gradient_quadrature, QuadratureSpec};
use fracspace::interp::{k_curve, log_grid, KMethod};
use fracspace::io::{decode_field, encode_samples, header_of};
use fracspace::norms::{dsp_norm, gagliardo_seminorm, holder_seminorm, NormMethod};
use fracspace::spectral::{bessel_norm, ftc_kernel_apply, riesz_divergence_spectral, riesz_gradient_spectral};
use fracspace::verify::{check_lyapunov, exponents};
use fracspace::{lp_norm, make_grid, translate, Family, Field, Grid64, Rank, Region};
use proptest::prelude::*;

const FULL: Region = Region::FullTorus;

fn grid(dim: usize) -> Grid64 {
    make_grid(dim, if dim == 1 { 64 } else { 16 }, 8.0).unwrap()
}

fn samples(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0e3..1.0e3f64, len)
}

fn bandlimited(dim: usize, seed: u64, band: usize) -> Field<f64> {
    Family::RandomBandlimited { seed, band }.sample(&grid(dim))
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_bytes_round_trip(raw in samples(64), dim in 1usize..=2) {
        let g = grid(dim);
        let raw: Vec<f64> = raw.into_iter().cycle().take(g.node_count()).collect();
        let u = Field::new(g, Rank::Scalar, raw).unwrap();
        let back: Field<f64> = decode_field(&header_of(&u), &encode_samples(&u)).unwrap();
        prop_assert_eq!(
            back.samples().iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            u.samples().iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        let u32: Field<f32> = decode_field(&header_of(&u), &encode_samples(&u)).unwrap();
        let back32: Field<f32> = decode_field(&header_of(&u32), &encode_samples(&u32)).unwrap();
        prop_assert_eq!(back32.samples(), u32.samples());
    }

    #[test]
    fn lattice_shifts_are_invertible_permutations(raw in samples(64), k in -20i64..20) {
        let g = grid(1);
        let u = Field::new(g, Rank::Scalar, raw).unwrap();
        let h = k as f64 * g.spacing();
        let v = translate(&u, &[h]).unwrap();
        let back = translate(&v, &[-h]).unwrap();
        prop_assert_eq!(back.samples(), u.samples());
        let mut a = u.samples().to_vec();
        let mut b = v.samples().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lyapunov_interpolation_inequality(seed in any::<u64>(), band in 1usize..8, p in 1.0..3.0f64, dq in 0.1..3.0f64, dr in 0.1..4.0f64) {
        let u = bandlimited(1, seed, band);
        let (q, r) = (p + dq, p + dq + dr);
        let report = check_lyapunov(&u, p, q, r, &FULL);
        prop_assert!(report.passed, "{:?}", report.measured);
        let theta = (1.0 / p - 1.0 / q) / (1.0 / p - 1.0 / r);
        let lhs = lp_norm(&u, q, &FULL).unwrap();
        let rhs = lp_norm(&u, p, &FULL).unwrap().powf(1.0 - theta) * lp_norm(&u, r, &FULL).unwrap().powf(theta);
        prop_assert!(lhs <= rhs * (1.0 + 1e-12), "{} > {}", lhs, rhs);
    }

    #[test]
    fn translation_ratio_is_scale_invariant(seed in any::<u64>(), c in 1e-3..1e3f64, s in 0.05..0.95f64, p in 1.0..4.0f64, k in 1usize..16) {
        let u = bandlimited(1, seed, 4);
        let h = k as f64 * u.grid().spacing();
        let ratio = |v: &Field<f64>| {
            let tau = lp_norm(&translate(v, &[h]).unwrap().sub(v).unwrap(), p, &FULL).unwrap();
            let d = lp_norm(&riesz_gradient_spectral(v, s).unwrap(), p, &FULL).unwrap();
            tau * s * (1.0 - s) / (h.powf(s) * d)
        };
        let (a, b) = (ratio(&u), ratio(&u.scale(c)));
        prop_assert!(a.is_finite());
        prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b);
    }

    #[test]
    fn r_s_increases_with_q(s in 0.01..0.99f64, p in 1.0..5.0f64, q1 in 1.0..50.0f64, dq in 0.01..50.0f64) {
        let e = exponents(2, s, p).unwrap();
        let (a, b) = (e.r_s(q1), e.r_s(q1 + dq));
        prop_assert!(a < b);
        // r_s(q) lies between p and q
        let (lo, hi) = (p.min(q1), p.max(q1));
        prop_assert!(a >= lo * (1.0 - 1e-12) && a <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn seminorms_are_absolutely_homogeneous(seed in any::<u64>(), c in -1e2..1e2f64, s in 0.1..0.9f64, p in 1.0..3.0f64) {
        let u = bandlimited(1, seed, 5);
        let v = u.scale(c);
        let a = c.abs();
        prop_assert!(close(dsp_norm(&v, s, p).unwrap(), a * dsp_norm(&u, s, p).unwrap(), 1e-12));
        prop_assert!(close(bessel_norm(&v, s, 2.0).unwrap(), a * bessel_norm(&u, s, 2.0).unwrap(), 1e-12));
        prop_assert!(close(lp_norm(&v, p, &FULL).unwrap(), a * lp_norm(&u, p, &FULL).unwrap(), 1e-12));
        let region = Region::ball(2.0);
        prop_assert!(close(holder_seminorm(&v, s, &region).unwrap(), a * holder_seminorm(&u, s, &region).unwrap(), 1e-12));
        let m = NormMethod::FullDoubleSum;
        prop_assert!(close(
            gagliardo_seminorm(&v, s, p, m).unwrap().value,
            a * gagliardo_seminorm(&u, s, p, m).unwrap().value,
            1e-12
        ));
    }

    #[test]
    fn divergence_is_the_negative_adjoint(seed in any::<u64>(), s in 0.05..0.95f64, dim in 1usize..=2) {
        let u = bandlimited(dim, seed, 5);
        let g = *u.grid();
        let comps = (0..dim).map(|j| bandlimited(dim, seed ^ (j as u64 + 1), 5).into_samples()).collect();
        let psi = Field::from_components(g, comps).unwrap();
        let lhs = riesz_gradient_spectral(&u, s).unwrap().inner(&psi).unwrap();
        let rhs = u.inner(&riesz_divergence_spectral(&psi, s).unwrap()).unwrap();
        let scale = dsp_norm(&u, s, 2.0).unwrap() * lp_norm(&psi, 2.0, &FULL).unwrap();
        prop_assert!((lhs + rhs).abs() <= 1e-12 * scale, "{} {}", lhs, rhs);
    }

    #[test]
    fn reconstruction_recovers_mean_free_part(seed in any::<u64>(), s in 0.05..0.95f64, dim in 1usize..=2) {
        let u = bandlimited(dim, seed, 6).without_mean();
        let back = ftc_kernel_apply(&riesz_gradient_spectral(&u, s).unwrap(), s).unwrap();
        let err = lp_norm(&back.sub(&u).unwrap(), 2.0, &FULL).unwrap();
        prop_assert!(err <= 1e-12 * lp_norm(&u, 2.0, &FULL).unwrap());
    }

    #[test]
    fn quadrature_gradient_of_constant_vanishes(c in -1e3..1e3f64, s in 0.05..0.95f64) {
        let g = make_grid(1, 128, 16.0).unwrap();
        let u = Field::constant(g, c);
        let d = riesz_gradient_quadrature(&u, s, &QuadratureSpec::periodic(16.0)).unwrap();
        prop_assert_eq!(d.max_abs(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn k_functional_invariants(seed in any::<u64>(), band in 1usize..8, p in prop::sample::select(vec![1.5, 2.0, 3.0])) {
        let u = bandlimited(1, seed, band);
        let t = log_grid(1e-4, 1e4, 40);
        let method = if p == 2.0 { KMethod::ExactHilbertP2 } else { KMethod::MollifierFamily };
        let k = k_curve(&u, &t, p, method).unwrap().values;
        let norm0 = lp_norm(&u, p, &FULL).unwrap();
        let slack = 1e-9;
        for i in 0..t.len() {
            prop_assert!(k[i] <= norm0 * (1.0 + slack));
            if i > 0 {
                prop_assert!(k[i] >= k[i - 1] * (1.0 - slack), "not monotone at {}", t[i]);
                prop_assert!(k[i] / t[i] <= k[i - 1] / t[i - 1] * (1.0 + slack), "K/t grows at {}", t[i]);
            }
        }
        let doubled = k_curve(&u.scale(2.0), &t, p, method).unwrap().values;
        for (a, b) in k.iter().zip(&doubled) {
            prop_assert!(close(2.0 * a, *b, 1e-12));
        }
    }
}
