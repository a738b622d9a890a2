use curvlab::grid::{BaseGrid, Stencil};
use curvlab::polar::{
    conformal_equation_residual, conformal_scalar_curvature_slice, polar_scalar_curvature_slice,
    slice_average_identity, ConformalFactorField, PolarWarpField,
};
use curvlab::warp::{parse_profile, warped_scalar_curvature, BaseGeometry};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn torus(n: usize, m: usize, stencil: Stencil) -> BaseGeometry {
    BaseGeometry::torus_with_grid(BaseGrid::new(n, m).unwrap().with_stencil(stencil)).unwrap()
}

/// `f = t (2 + cos x1)` on the flat 3-torus; the slice metric is conformally
/// flat with `w = ln f`, so `R(f^2 g) = f^-2 (-4 w'' - 2 w'^2)` in `x1`.
fn closed_polar(t: f64, x1: f64) -> f64 {
    let (c, s) = (x1.cos(), x1.sin());
    let f = t * (2.0 + c);
    let w1 = -s / (2.0 + c);
    let w11 = -(2.0 * c + 1.0) / ((2.0 + c) * (2.0 + c));
    let slice = (-4.0 * w11 - 2.0 * w1 * w1) / (f * f);
    // f_t = 2 + cos x1, f_tt = 0
    slice - 6.0 * (2.0 + c) * (2.0 + c) / (f * f)
}

#[test]
fn polar_matches_closed_form_on_spectral_grid() {
    let base = torus(3, 32, Stencil::Spectral);
    let f = PolarWarpField::parse("t*(2+cos(x1))", 3).unwrap();
    let g = base.grid().unwrap();
    for t in [2.0, 5.0, 40.0] {
        let r = polar_scalar_curvature_slice(&f, &base, t).unwrap();
        for (i, &v) in r.iter().enumerate() {
            let x = g.coords(i);
            let expected = closed_polar(t, x[0]);
            // Fourier coefficients of ln(2 + cos x1) decay like 0.27^k
            assert!(
                (v - expected).abs() <= 1e-8 * expected.abs(),
                "t={t} x={x:?}: {v} vs {expected}"
            );
        }
    }
}

#[test]
fn second_order_stencil_converges() {
    let f = PolarWarpField::parse("t*(2+cos(x1))", 3).unwrap();
    let err = |m: usize| {
        let base = torus(3, m, Stencil::SecondOrder);
        let g = base.grid().unwrap();
        let r = polar_scalar_curvature_slice(&f, &base, 3.0).unwrap();
        r.iter()
            .enumerate()
            .map(|(i, &v)| (v - closed_polar(3.0, g.coords(i)[0])).abs())
            .fold(0.0, f64::max)
    };
    let ratio = err(16) / err(32);
    assert!(ratio > 3.8 && ratio < 4.2, "{ratio}");
}

#[test]
fn reduction_to_warped_formula() {
    for (src, rg_base) in [("t*ln(t)", None), ("exp(t)", None), ("t^2+1", Some(2.0))] {
        let p = parse_profile(src).unwrap();
        let f = PolarWarpField::from_profile(&p, 3);
        let bases = match rg_base {
            None => vec![
                torus(3, 8, Stencil::SecondOrder),
                torus(3, 8, Stencil::Spectral),
            ],
            Some(r) => vec![BaseGeometry::sphere(3, r).unwrap()],
        };
        for base in bases {
            for t in [1.5, 4.0, 20.0] {
                let expected = warped_scalar_curvature(&p, &base, t).unwrap();
                for v in polar_scalar_curvature_slice(&f, &base, t).unwrap() {
                    assert!(
                        (v - expected).abs() <= 1e-12 * expected.abs(),
                        "{src} t={t}"
                    );
                }
            }
        }
    }
}

#[test]
fn rearranged_equation_closes() {
    let base = torus(3, 16, Stencil::SecondOrder);
    let f = PolarWarpField::parse("t*(2+cos(x1)*sin(x2))", 3).unwrap();
    let u = ConformalFactorField::parse("(1+t)^(-1)*(3+sin(x3))", 3).unwrap();
    for t in [2.0, 7.0] {
        let rc = conformal_scalar_curvature_slice(&u, &f, &base, t).unwrap();
        let rbar = polar_scalar_curvature_slice(&f, &base, t).unwrap();
        let res = conformal_equation_residual(&u, &f, &base, t, &rc).unwrap();
        let scale = rbar.iter().chain(&rc).map(|v| v.abs()).fold(0.0, f64::max);
        let worst = res.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-10 * scale, "{worst} vs {scale}");
    }
}

#[test]
fn slice_average_identity_holds() {
    let f = PolarWarpField::parse("t*(2+cos(x1))*(3+sin(x2))", 3).unwrap();
    for (m, stencil, tol) in [
        (32, Stencil::Spectral, 1e-8),
        (32, Stencil::SecondOrder, 5e-2),
    ] {
        let base = torus(3, m, stencil);
        let s = slice_average_identity(&f, &base, 2.5).unwrap();
        let rel = (s.direct - s.via_identity).abs() / s.direct.abs();
        assert!(rel < tol, "{stencil:?}: {s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn discrete_green_identity(seed in any::<u64>(), n in 1usize..=3, m in 8usize..=14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = BaseGrid::new(n, m).unwrap();
        let mu: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = grid.integrate(&mu.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt();
        let total = grid.integrate(&grid.laplacian(&mu));
        prop_assert!(total.abs() < 1e-12 * norm, "{total} vs {norm}");
    }
}
