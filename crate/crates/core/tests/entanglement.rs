use biphoton::entanglement::{
    covariance_from_form, covariance_from_wavepacket, cross_correlation, free_cross_correlation,
    log_negativity, log_negativity_closed_form, symplectic_spectrum, CovarianceMatrix,
};
use biphoton::propagation::{path_form, slit_wavepacket, PathLabel};
use biphoton::{ErrorKind, ScaleConstants, SlitGeometry, SourceParams};
use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIGMA: f64 = 11.4e-6;

fn source(ratio: f64) -> SourceParams {
    SourceParams::new(702e-9, SIGMA, ratio * SIGMA).unwrap()
}

fn e_n(p: &SourceParams, g: &SlitGeometry) -> f64 {
    let wp = slit_wavepacket(p, g, PathLabel::UU).unwrap();
    log_negativity(&covariance_from_wavepacket(&wp, ScaleConstants::default()).unwrap()).unwrap()
}

fn cov(entries: Matrix4<f64>) -> CovarianceMatrix {
    CovarianceMatrix::new(entries, [0.0; 4], ScaleConstants::default()).unwrap()
}

fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

fn random_symplectic(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
    let mut s = Matrix4::identity();
    for _ in 0..3 {
        let (a, b) = (
            rng.gen_range(-1.0..1.0f64).exp(),
            rng.gen_range(-1.0..1.0f64).exp(),
        );
        let squeeze = Matrix4::from_diagonal(&Vector4::new(a, 1.0 / a, b, 1.0 / b));
        let (t1, t2) = (rng.gen_range(0.0..6.3f64), rng.gen_range(0.0..6.3f64));
        let rot = Matrix4::new(
            t1.cos(),
            t1.sin(),
            0.0,
            0.0, //
            -t1.sin(),
            t1.cos(),
            0.0,
            0.0, //
            0.0,
            0.0,
            t2.cos(),
            t2.sin(), //
            0.0,
            0.0,
            -t2.sin(),
            t2.cos(),
        );
        let phi: f64 = rng.gen_range(0.0..6.3);
        let (c, sn) = (phi.cos(), phi.sin());
        let splitter = Matrix4::new(
            c, 0.0, sn, 0.0, //
            0.0, c, 0.0, sn, //
            -sn, 0.0, c, 0.0, //
            0.0, -sn, 0.0, c,
        );
        s = splitter * two_mode_squeezer(rng.gen_range(-1.0..1.0)) * rot * squeeze * s;
    }
    s
}

#[test]
fn vacuum_is_separable() {
    let m = cov(Matrix4::identity() * 0.5);
    let spec = symplectic_spectrum(&m, true).unwrap();
    assert!((spec.nu_min - 0.5).abs() < 1e-15);
    assert_eq!(log_negativity(&m).unwrap(), 0.0);
}

#[test]
fn two_mode_squeezed_vacuum_negativity() {
    for r in [0.1, 0.5, 1.15] {
        let s = two_mode_squeezer(r);
        let m = cov(s * s.transpose() * 0.5);
        assert!((log_negativity(&m).unwrap() - 2.0 * r).abs() < 1e-12);
    }
}

#[test]
fn unphysical_matrix_is_rejected() {
    let e = CovarianceMatrix::new(
        Matrix4::identity() * 0.4,
        [0.0; 4],
        ScaleConstants::default(),
    )
    .unwrap_err();
    assert_eq!(e.kind(), ErrorKind::Numerical);
    let mut asym = Matrix4::identity() * 0.5;
    asym[(0, 1)] = 0.1;
    assert!(CovarianceMatrix::new(asym, [0.0; 4], ScaleConstants::default()).is_err());
}

#[test]
fn random_symplectic_spectra_agree_across_routes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let s = random_symplectic(&mut rng);
        let (n1, n2) = (
            0.5 + rng.gen_range(0.0..2.0f64),
            0.5 + rng.gen_range(0.0..2.0f64),
        );
        let m = cov(s * Matrix4::from_diagonal(&Vector4::new(n1, n1, n2, n2)) * s.transpose());
        let spec = symplectic_spectrum(&m, false).unwrap();
        let tol = 1e-10 * m.conditioning().max(1.0);
        assert!(
            (spec.nu_min - n1.min(n2)).abs() < tol,
            "{} vs {}",
            spec.nu_min,
            n1.min(n2)
        );
        assert!((spec.nu_max - n1.max(n2)).abs() < tol);
        for pt in [false, true] {
            let spec = symplectic_spectrum(&m, pt).unwrap();
            let (lo, hi) = spec.block_determinant;
            assert!(
                (spec.nu_min - lo).abs() < tol,
                "pt {pt}: {} vs {lo}",
                spec.nu_min
            );
            assert!((spec.nu_max - hi).abs() < tol);
        }
        let en = log_negativity(&m).unwrap();
        let nu = symplectic_spectrum(&m, true).unwrap().nu_min;
        assert_eq!(en > 0.0, nu < 0.5 - 1e-12 - 2.0 * m.resolution());
    }
}

#[test]
fn free_flight_limit() {
    let p = source(10.0);
    let g = SlitGeometry::symmetric(2e-3, 70e-3, 0.0, 1e6 * SIGMA).unwrap();
    let wp = slit_wavepacket(&p, &g, PathLabel::UU).unwrap();
    let m = covariance_from_wavepacket(&wp, ScaleConstants::default()).unwrap();
    let nu = symplectic_spectrum(&m, true).unwrap().nu_min;
    assert!((nu - 0.05).abs() < 1e-6);
    assert!((log_negativity(&m).unwrap() - 10f64.ln()).abs() < 1e-4);
}

#[test]
fn equal_spreads_are_separable() {
    let p = source(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let g = SlitGeometry::symmetric(
            rng.gen_range(0.0..20e-3),
            rng.gen_range(0.0..600e-3),
            rng.gen_range(0.0..400e-6),
            rng.gen_range(3e-6..300e-6),
        )
        .unwrap();
        assert_eq!(e_n(&p, &g), 0.0);
    }
}

#[test]
fn negativity_grows_with_slit_width_as_gouy_phase_shrinks() {
    let p = source(10.0);
    let betas: Vec<f64> = (0..40)
        .map(|i| (5.0 + 195.0 * i as f64 / 39.0) * 1e-6)
        .collect();
    let rows: Vec<(f64, f64)> = betas
        .iter()
        .map(|&b| {
            let g = SlitGeometry::symmetric(2e-3, 70e-3, 0.0, b).unwrap();
            (
                e_n(&p, &g),
                slit_wavepacket(&p, &g, PathLabel::UU)
                    .unwrap()
                    .zeta_slit
                    .abs(),
            )
        })
        .collect();
    assert!(rows.windows(2).all(|w| w[1].0 > w[0].0), "{rows:?}");
    assert!(rows.windows(2).all(|w| w[1].1 < w[0].1), "{rows:?}");
}

#[test]
fn negativity_is_scale_invariant() {
    let p = source(10.0);
    let g = SlitGeometry::symmetric(2e-3, 70e-3, 200e-6, 40e-6).unwrap();
    let wp = slit_wavepacket(&p, &g, PathLabel::UU).unwrap();
    let reference = e_n(&p, &g);
    assert!(reference > 0.0);
    for l in [1e-6, 1e-3, 1.0] {
        for hbar in [1.0, 1.0546e-34] {
            let m = covariance_from_wavepacket(&wp, ScaleConstants::new(hbar, l).unwrap()).unwrap();
            assert!((log_negativity(&m).unwrap() - reference).abs() < 1e-12);
        }
    }
}

#[test]
fn negativity_ignores_flight_after_slits_and_separation() {
    // Free flight is a local symplectic map and the separation only shifts
    // first moments, so neither changes the negativity.
    let p = source(10.0);
    for beta in [20e-6, 60e-6] {
        let base = e_n(
            &p,
            &SlitGeometry::symmetric(2e-3, 0.0, 100e-6, beta).unwrap(),
        );
        for zt in [1e-3, 20e-3, 70e-3, 500e-3] {
            for d in [0.0, 100e-6, 180e-6] {
                let v = e_n(&p, &SlitGeometry::symmetric(2e-3, zt, d, beta).unwrap());
                assert!((v - base).abs() < 1e-9, "zt {zt} d {d}: {v} vs {base}");
            }
        }
    }
}

#[test]
fn negativity_saturates_for_wide_slits() {
    for ratio in [3.5, 5.0, 10.0] {
        let p = source(ratio);
        let v = e_n(
            &p,
            &SlitGeometry::symmetric(2e-3, 70e-3, 200e-6, 1e4 * SIGMA).unwrap(),
        );
        assert!((v - ratio.ln()).abs() < 1e-4, "{ratio}: {v}");
        for b in [5e-6, 50e-6, 500e-6] {
            assert!(
                e_n(
                    &p,
                    &SlitGeometry::symmetric(2e-3, 70e-3, 200e-6, b).unwrap()
                ) < v
            );
        }
    }
}

#[test]
fn wide_slit_correlation_matches_free_flight() {
    for ratio in [1.0, 3.5, 10.0] {
        let p = source(ratio);
        for (z, zt) in [(2e-3, 70e-3), (500e-3, 0.0), (8e-3, 500e-3)] {
            let g = SlitGeometry::symmetric(z, zt, 0.0, 1e6 * SIGMA).unwrap();
            let rho = cross_correlation(&slit_wavepacket(&p, &g, PathLabel::UU).unwrap())
                .unwrap()
                .rho;
            let free = free_cross_correlation(&p, z + zt);
            assert!(
                (rho - free).abs() < 1e-6,
                "{ratio} {z} {zt}: {rho} vs {free}"
            );
        }
    }
    assert_eq!(free_cross_correlation(&source(1.0), 0.3), 0.0);
}

#[test]
fn mirror_pair_correlations_have_opposite_signs() {
    let p = source(10.0);
    let g = SlitGeometry::symmetric(500e-3, 0.0, 100e-6, 5e-6).unwrap();
    let uu = cross_correlation(&slit_wavepacket(&p, &g, PathLabel::UU).unwrap()).unwrap();
    let ud = cross_correlation(&slit_wavepacket(&p, &g, PathLabel::UD).unwrap()).unwrap();
    assert!(uu.rho > 0.9 && ud.rho < -0.9);
    for r in [uu, ud] {
        assert!(r.rho.abs() <= 1.0 && r.rho_centered.abs() <= 1.0);
    }
}

#[test]
fn closed_form_diagnostic_is_reported() {
    let p = source(10.0);
    let mut disagreements = 0;
    for beta in [5e-6, 40e-6, 60e-6, 1e-3] {
        for zt in [0.0, 70e-3, 500e-3] {
            let g = SlitGeometry::symmetric(2e-3, zt, 200e-6, beta).unwrap();
            let wp = slit_wavepacket(&p, &g, PathLabel::UU).unwrap();
            let c = log_negativity_closed_form(&wp, ScaleConstants::default()).unwrap();
            assert_eq!(c.numeric, e_n(&p, &g));
            assert_eq!(
                c.agrees,
                c.value.is_some_and(|v| (v - c.numeric).abs() <= 1e-6)
            );
            if !c.agrees {
                disagreements += 1;
                eprintln!(
                    "beta {beta} zt {zt}: closed {:?} numeric {}",
                    c.value, c.numeric
                );
            }
        }
    }
    eprintln!("closed form disagrees at {disagreements} of 12 points");
}

#[test]
fn every_propagated_path_is_physical() {
    let p = source(10.0);
    for (b1, b2) in [(5e-6, 5e-6), (60e-6, 5e-6), (10e-6, 50e-6), (1e-3, 40e-6)] {
        for (z, zt) in [(1e-3, 0.0), (2e-3, 70e-3), (500e-3, 500e-3), (8e-3, 500e-3)] {
            let g = SlitGeometry::new(z, zt, 200e-6, b1, b2).unwrap();
            for path in PathLabel::ALL {
                let m = covariance_from_form(
                    &path_form(&p, &g, path).unwrap(),
                    ScaleConstants::default(),
                )
                .unwrap();
                let nu = symplectic_spectrum(&m, false).unwrap().nu_min;
                assert!(
                    nu >= 0.5 - 1e-9 - m.resolution(),
                    "{path:?} {b1} {b2} {z} {zt}: {nu}"
                );
            }
        }
    }
}
