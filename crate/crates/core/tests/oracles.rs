use std::f64::consts::PI;

use fracspace::direct::special::gamma;
use fracspace::direct::{constants, kernel_translation_l1, kernel_translation_l1_at_level, QuadratureSpec};
use fracspace::interp::interpolation_norm;
use fracspace::norms::{dsp_norm, gagliardo_seminorm, NormMethod};
use fracspace::spectral::{bessel_norm, riesz_gradient_spectral};
use fracspace::verify::{check_s_limit, gagliardo_constant};
use fracspace::{lp_norm, make_grid, Family, Field, Grid64, Region};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
}

fn grid1(n: usize, l: f64) -> Grid64 {
    make_grid(1, n, l).unwrap()
}

/// Discrete Fourier coefficients by direct summation, in physical units.
fn naive_dft_1d(u: &Field<f64>) -> Vec<(f64, f64)> {
    let g = u.grid();
    let n = g.points_per_axis();
    let h = g.spacing();
    let l = g.extent();
    (0..n)
        .map(|k| {
            let m = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            let xi = m / l;
            let (mut re, mut im) = (0.0, 0.0);
            for (i, &v) in u.samples().iter().enumerate() {
                let th = -2.0 * PI * xi * g.coordinate(i);
                re += v * th.cos() * h;
                im += v * th.sin() * h;
            }
            (xi, re * re + im * im)
        })
        .collect()
}

#[test]
fn gamma_matches_tabulated_values() {
    let table = [
        (0.1, 9.513_507_698_668_732),
        (0.25, 3.625_609_908_221_908),
        (1.0 / 3.0, 2.678_938_534_707_747_6),
        (0.5, PI.sqrt()),
        (1.0, 1.0),
        (5.5, 52.342_777_784_553_52),
        (10.0, 362_880.0),
    ];
    for (x, want) in table {
        let got = gamma(x).unwrap();
        assert!(close(got, want, 1e-13), "Gamma({x}) = {got}, want {want}");
    }
    assert!(gamma(0.0).is_err());
    assert!(gamma(-1.5).is_err());
}

#[test]
fn gradient_constant_at_one_half() {
    let c = constants::<f64>(1, 0.5).unwrap();
    assert!(close(c.c_ns, 1.0 / (2.0 * (2.0 * PI).sqrt()), 1e-14), "{}", c.c_ns);
    assert!(c.gamma_1ps.is_none());
}

#[test]
fn reconstruction_constant_identity_in_two_dimensions() {
    for s in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let c = constants::<f64>(2, s).unwrap();
        let lhs = (2.0 - s - 1.0) / c.gamma_1ps.unwrap();
        assert!(close(lhs, c.c_n_minus_s, 1e-13), "s = {s}: {lhs} vs {}", c.c_n_minus_s);
    }
}

#[test]
fn gagliardo_constant_matches_cosine_integral() {
    // C(1, s) = 4 int_0^inf (1 - cos y) y^{-1-2s} dy = -4 Gamma(-2s) cos(pi s)
    for s in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let want = if (s - 0.5f64).abs() < 1e-12 {
            2.0 * PI
        } else if s < 0.5 {
            4.0 * gamma(1.0 - 2.0 * s).unwrap() / (2.0 * s) * (PI * s).cos()
        } else {
            -4.0 * gamma(2.0 - 2.0 * s).unwrap() / (2.0 * s * (2.0 * s - 1.0)) * (PI * s).cos()
        };
        let got = gagliardo_constant(1, s).unwrap();
        assert!(close(got, want, 1e-12), "s = {s}: {got} vs {want}");
    }
}

#[test]
fn kernel_l1_in_one_dimension_is_four_over_s() {
    // In 1-d the kernel is sign(x)|x|^{s-1}; the difference integrates to 4/s.
    let q = QuadratureSpec::kernel_l1();
    for s in [0.05, 0.2, 0.5, 0.8, 0.95] {
        let v = kernel_translation_l1(1, s, &q).unwrap();
        assert!(close(v, 4.0 / s, 1e-5), "s = {s}: {v}");
    }
}

#[test]
fn kernel_l1_refinement_converges_to_fixture() {
    const FIXTURE: f64 = 8.0;
    let q = QuadratureSpec::kernel_l1();
    let v: Vec<f64> = (1..=3).map(|l| kernel_translation_l1_at_level(1, 0.5, &q, l).unwrap()).collect();
    let d1 = (v[1] - v[0]).abs();
    let d2 = (v[2] - v[1]).abs();
    assert!(d2 <= d1, "{v:?}");
    assert!(close(v[2], FIXTURE, 1e-2), "{v:?}");
}

#[test]
fn kernel_l1_two_dimensional_fixture() {
    let q = QuadratureSpec::kernel_l1();
    let v: Vec<f64> = (1..=3).map(|l| kernel_translation_l1_at_level(2, 0.5, &q, l).unwrap()).collect();
    assert!(close(v[1], v[2], 1e-3), "{v:?}");
    assert!(close(v[2], 36.878, 1e-3), "{v:?}");
}

#[test]
fn gaussian_l2_norm() {
    let u = Family::Gaussian { sigma: 1.0 }.sample(&grid1(512, 16.0));
    let v = lp_norm(&u, 2.0, &Region::FullTorus).unwrap();
    assert!(close(v, PI.powf(0.25), 1e-13), "{v}");
}

#[test]
fn bessel_norm_of_gaussian_matches_frequency_sum() {
    let s = 0.5;
    let u = Family::Gaussian { sigma: 1.0 }.sample(&grid1(512, 16.0));
    let l = u.grid().extent();
    let oracle: f64 = naive_dft_1d(&u)
        .iter()
        .map(|&(xi, e)| (1.0 + 4.0 * PI * PI * xi * xi).powf(s) * e / l)
        .sum::<f64>()
        .sqrt();
    let got = bessel_norm(&u, s, 2.0).unwrap();
    assert!(close(got, oracle, 1e-12), "{got} vs {oracle}");
    // continuum value: int (1 + 4 pi^2 xi^2)^s 2 pi e^{-4 pi^2 xi^2} dxi
    let cont: f64 = {
        let n = 20_000;
        let top = 2.0;
        let dx = top / n as f64;
        (0..n)
            .map(|i| {
                let xi = (i as f64 + 0.5) * dx;
                2.0 * (1.0 + 4.0 * PI * PI * xi * xi).powf(s) * 2.0 * PI * (-4.0 * PI * PI * xi * xi).exp() * dx
            })
            .sum::<f64>()
            .sqrt()
    };
    assert!(close(got, cont, 1e-8), "{got} vs continuum {cont}");
}

#[test]
fn bessel_norm_of_pure_mode() {
    let g = grid1(64, 8.0);
    let (k, amp, s) = (3.0, 1.7, 0.4);
    let u = Field::from_fn(g, |x: [f64; 2]| amp * (2.0 * PI * k * x[0] / 8.0).cos());
    let w2 = 4.0 * PI * PI * (k / 8.0) * (k / 8.0);
    let want = (1.0 + w2).powf(s / 2.0) * (8.0f64 / 2.0).sqrt() * amp;
    assert!(close(bessel_norm(&u, s, 2.0).unwrap(), want, 1e-13));
    let zero = Field::<f64>::zeros(g, fracspace::Rank::Scalar);
    assert_eq!(bessel_norm(&zero, s, 2.0).unwrap(), 0.0);
}

#[test]
fn gagliardo_of_pure_mode_matches_symbol() {
    let g = grid1(256, 8.0);
    let k = 2.0;
    let u = Field::from_fn(g, |x: [f64; 2]| (2.0 * PI * k * x[0] / 8.0).cos());
    let s = 0.5;
    let w = 2.0 * PI * k / 8.0;
    let want = (gagliardo_constant(1, s).unwrap() * w.powf(2.0 * s) * 4.0).sqrt();
    let got = gagliardo_seminorm(&u, s, 2.0, NormMethod::default_for(&g, 1)).unwrap().value;
    assert!(close(got, want, 1e-4), "{got} vs {want}");
}

#[test]
fn interpolation_norm_matches_hilbert_closed_form() {
    let u = Family::Gaussian { sigma: 0.5 }.sample(&grid1(256, 16.0));
    for theta in [0.25, 0.5, 0.75] {
        let got = interpolation_norm(&u, theta, 2.0, 2.0).unwrap();
        let want = (PI / (2.0 * (PI * theta).sin())).sqrt() * bessel_norm(&u, theta, 2.0).unwrap();
        assert!(close(got, want, 1e-4), "theta = {theta}: {got} vs {want}");
    }
}

#[test]
fn s_limit_of_single_mode() {
    let g = grid1(128, 8.0);
    let k = 3.0;
    let u = Field::from_fn(g, |x: [f64; 2]| (2.0 * PI * k * x[0] / 8.0).sin());
    let w = 2.0 * PI * k / 8.0;
    let s_list = [0.9, 0.95, 0.99];
    let r = check_s_limit(&u, 2.0, &s_list);
    assert!(r.passed, "{r:?}");
    let du = w * 2.0;
    for s in s_list {
        let want = (w.powf(s - 1.0) - 1.0).abs() * du;
        let got = r.get(&format!("discrepancy@{s}")).unwrap();
        assert!(close(got, want, 1e-12), "s = {s}: {got} vs {want}");
    }
    assert!(close(r.get("final_relative").unwrap(), (w.powf(-0.01) - 1.0).abs(), 1e-12));
}

#[test]
fn riesz_gradient_of_constant_is_zero() {
    let g = make_grid(2, 32, 8.0).unwrap();
    let u = Field::constant(g, 3.5);
    let d = riesz_gradient_spectral(&u, 0.3).unwrap();
    assert_eq!(d.max_abs(), 0.0);
    assert_eq!(dsp_norm(&u, 0.3, 2.0).unwrap(), lp_norm(&u, 2.0, &Region::FullTorus).unwrap());
}
