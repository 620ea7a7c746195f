use proptest::prelude::*;
use sho_delta::greens::*;
use sho_delta::numerics::{finite_diff, one_sided_diff, DiffOrder, Side};
use sho_delta::spectra::{char_one_delta, solve_one_delta};
use sho_delta::units::{DeltaSpike, Epsilon};

fn eps(v: f64) -> Epsilon {
    Epsilon::new(v).unwrap()
}

fn non_pole(e: f64) -> bool {
    let nu = e - 0.5;
    nu < -0.45 || (nu - nu.round()).abs() > 0.05
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bare_symmetry(xi in -4.0f64..4.0, up in -4.0f64..4.0, e in -1.0f64..6.0) {
        prop_assume!(non_pole(e));
        let g = g0_eval(xi, up, eps(e)).unwrap();
        let swapped = g0_eval(up, xi, eps(e)).unwrap();
        let mirrored = g0_eval(-xi, -up, eps(e)).unwrap();
        let scale = g.abs().max(1e-300);
        prop_assert!((g - swapped).abs() <= 1e-12 * scale);
        prop_assert!((g - mirrored).abs() <= 1e-12 * scale);
    }

    #[test]
    fn dressed_symmetry(xi in -3.0f64..3.0, up in -3.0f64..3.0, a in -1.0f64..1.0, l in -1.5f64..1.5, e in -1.0f64..5.0) {
        prop_assume!(non_pole(e) && l.abs() > 1e-3);
        let s = DeltaSpike::new(a, l).unwrap();
        if let Ok(g) = g_delta_eval(xi, up, eps(e), s) {
            let t = g_delta_eval(up, xi, eps(e), s).unwrap();
            prop_assert!((g - t).abs() <= 1e-10 * g.abs().max(1e-12));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn diagonal_jump(up in -2.5f64..2.5, e in -0.4f64..4.0) {
        prop_assume!(non_pole(e));
        let f = |x: f64| g0_eval(x, up, eps(e)).unwrap();
        let h = 1e-3;
        let jump = one_sided_diff(f, up, Side::Right, h) - one_sided_diff(f, up, Side::Left, h);
        prop_assert!((jump + 2.0).abs() < 1e-6, "jump {}", jump);
    }

    #[test]
    fn off_diagonal_ode(xi in -3.0f64..3.0, up in -3.0f64..3.0, e in -0.4f64..4.0) {
        prop_assume!(non_pole(e) && (xi - up).abs() > 0.1);
        let f = |x: f64| g0_eval(x, up, eps(e)).unwrap();
        let d2 = finite_diff(f, xi, DiffOrder::Second, 1e-3);
        let residual = d2 - (xi * xi - 2.0 * e) * f(xi);
        prop_assert!(residual.abs() <= 1e-5, "residual {}", residual);
    }

    #[test]
    fn dressed_jump(up in -2.0f64..2.0, a in -1.0f64..1.0, l in -1.5f64..1.5, e in -0.4f64..4.0) {
        prop_assume!(non_pole(e) && (up - a).abs() > 0.05 && l.abs() > 1e-2);
        let s = DeltaSpike::new(a, l).unwrap();
        let Ok(g_a) = g_delta_eval(a, up, eps(e), s) else { return Ok(()) };
        prop_assume!(g_a.abs() < 1e3);
        let f = |x: f64| g_delta_eval(x, up, eps(e), s).unwrap();
        let h = 1e-3;
        let jump = one_sided_diff(f, a, Side::Right, h) - one_sided_diff(f, a, Side::Left, h);
        prop_assert!((jump - 2.0 * l * g_a).abs() < 1e-5, "{} vs {}", jump, 2.0 * l * g_a);
    }
}

#[test]
fn residue_limits() {
    for n in 0..3 {
        for (xi, up) in [(0.5, -0.4), (0.0, 0.0), (1.2, 0.3)] {
            let closed = g0_residue(n, xi, up);
            let limit = g0_residue_limit(n, xi, up).unwrap();
            assert!((closed - limit).abs() < 1e-6, "n={n} ({xi},{up}): {closed} vs {limit}");
        }
    }
}

#[test]
fn dressed_section_kinks_at_origin() {
    for l in [-1.0, 1.0] {
        let s = DeltaSpike::new(0.0, l).unwrap();
        let f = |x: f64| g_delta_eval(x, x, eps(2.1), s).unwrap();
        let h = 1e-3;
        let right = one_sided_diff(f, 0.0, Side::Right, h);
        let left = one_sided_diff(f, 0.0, Side::Left, h);
        assert!((right - left).abs() > 10.0 * 1e-6, "λ={l}");
        // the bare section is smooth there
        let b = |x: f64| g0_eval(x, x, eps(2.1)).unwrap();
        assert!((one_sided_diff(b, 0.0, Side::Right, h) - one_sided_diff(b, 0.0, Side::Left, h)).abs() < 1e-6);
    }
}

#[test]
fn grid_sections_are_mirror_symmetric() {
    let grid = g_grid(5.0, 201, eps(2.1), None).unwrap();
    let n = grid.n_points();
    for i in 0..n {
        let d = grid.diagonal[i].value;
        let d_m = grid.diagonal[n - 1 - i].value;
        assert!((d - d_m).abs() <= 1e-12 * d.abs().max(1e-300));
        let a = grid.antidiagonal[i].value;
        let a_m = grid.antidiagonal[n - 1 - i].value;
        assert!((a - a_m).abs() <= 1e-12 * a.abs().max(1e-300));
        for j in 0..n {
            let g = grid.at(i, j).value;
            assert!((g - grid.at(j, i).value).abs() <= 1e-12 * g.abs().max(1e-300));
        }
    }
    // the largest |g₀| on the ξ = −υ section sits next to the origin
    let (imax, _) = grid
        .antidiagonal
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.abs().total_cmp(&b.1.value.abs()))
        .unwrap();
    let xi = grid.antidiagonal[imax].xi;
    assert!(xi.abs() < 1.5, "peak at {xi}");
}

#[test]
fn pole_condition_matches_characteristic_roots() {
    for (a, l) in [(0.5, -1.0), (0.5, 1.0), (-0.8, 0.6)] {
        let s = DeltaSpike::new(a, l).unwrap();
        for level in solve_one_delta(s, 4).unwrap().levels {
            let e = level.epsilon;
            assert!(char_one_delta(e, s).unwrap().abs() < 1e-9);
            if nearest_bare_pole(e).is_none() {
                let f = |x: f64| dressed_denominator(eps(x), s).unwrap();
                let slope = finite_diff(f, e.value(), DiffOrder::First, 1e-5);
                let shift = f(e.value()) / slope;
                assert!(shift.abs() < 1e-10, "a={a} λ={l}: {shift:e}");
            }
        }
    }
}
