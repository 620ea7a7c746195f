use std::path::PathBuf;

use proptest::prelude::*;
use sho_delta::numerics::{finite_diff, DiffOrder};
use sho_delta::specfun::{
    gamma, hermite_envelope, hermite_nu, hermite_nu_continuous, hermite_nu_prime, hermite_nu_with,
    kummer_m, recip_gamma, tricomi_u, tricomi_u_by, wronskian_analytic, wronskian_numeric,
    AccuracyPolicy, HermiteOrder, TricomiRoute,
};
use sho_delta::units::Epsilon;

fn fixture(name: &str) -> Vec<Vec<f64>> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let mut rdr = csv::Reader::from_path(&path).expect("fixture present");
    rdr.records()
        .map(|r| r.unwrap().iter().map(|f| f.parse::<f64>().unwrap()).collect())
        .collect()
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn order(nu: f64) -> HermiteOrder {
    HermiteOrder::new(nu).unwrap()
}

#[test]
fn hermite_matches_reference() {
    for row in fixture("hermite_nu.csv") {
        let (nu, x, h, env) = (row[0], row[1], row[2], row[3]);
        let got = hermite_nu(order(nu), x).unwrap();
        let got_env = hermite_envelope(order(nu), x).unwrap();
        assert!(rel_err(got, h) < 1e-12, "H_{nu}({x}) = {got}, want {h}");
        assert!(rel_err(got_env, env) < 1e-12, "envelope {nu} {x}: {got_env} vs {env}");
    }
}

#[test]
fn hermite_half_order_at_one() {
    let want = fixture("hermite_nu.csv")
        .into_iter()
        .find(|r| r[0] == 0.5 && r[1] == 0.9)
        .unwrap()[2];
    let got = hermite_nu(order(0.5), 0.9).unwrap();
    assert!(rel_err(got, want) < 1e-13);
    // extended-precision reference value
    let got = hermite_nu(order(0.5), 1.0).unwrap();
    assert!(rel_err(got, 1.4812843960614078) < 1e-12, "{got}");
}

#[test]
fn kummer_matches_reference() {
    for row in fixture("kummer_m.csv") {
        let got = kummer_m(row[0], row[1], row[2]).unwrap();
        assert!(rel_err(got, row[3]) < 1e-13, "M{row:?} = {got}");
    }
}

#[test]
fn tricomi_matches_reference() {
    for row in fixture("tricomi_u.csv") {
        let got = tricomi_u(row[0], row[1], row[2]).unwrap();
        assert!(rel_err(got, row[3]) < 1e-12, "U{row:?} = {got}");
    }
}

#[test]
fn gamma_matches_reference() {
    for row in fixture("gamma.csv") {
        assert!(rel_err(gamma(row[0]).unwrap(), row[1]) < 1e-13, "gamma({})", row[0]);
        assert!(rel_err(recip_gamma(row[0]), row[2]) < 1e-13, "recip_gamma({})", row[0]);
    }
}

#[test]
fn series_and_asymptotic_routes_overlap() {
    let series = AccuracyPolicy::new(1e-12, 500, 11.0).unwrap();
    let asymptotic = AccuracyPolicy::new(1e-12, 500, 5.0).unwrap();
    let p = AccuracyPolicy::default();
    for &(nu, start) in &[(-0.7, 6.0), (0.3, 6.0), (2.1, 6.5), (4.9, 7.0), (9.4, 8.5)] {
        for k in 0..=8 {
            let y = start + (10.0 - start) * k as f64 / 8.0;
            let a = hermite_nu_with(order(nu), -y, &series).unwrap();
            let b = hermite_nu_with(order(nu), -y, &asymptotic).unwrap();
            assert!(rel_err(a, b) < 1e-10, "nu={nu} x=-{y}: {a} vs {b}");
            let u_int = tricomi_u_by(-0.5 * nu, 0.5, y * y, TricomiRoute::Integral, &p).unwrap();
            let u_asy = tricomi_u_by(-0.5 * nu, 0.5, y * y, TricomiRoute::Asymptotic, &p).unwrap();
            assert!(rel_err(u_int, u_asy) < 1e-10, "nu={nu} x={y}: {u_int} vs {u_asy}");
        }
    }
}

#[test]
fn integer_orders_follow_recurrence_and_parity() {
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    for _ in 0..100 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let x = -5.0 + 10.0 * (state >> 11) as f64 / (1u64 << 53) as f64;
        for n in 1..10 {
            let lhs = hermite_nu(order(n as f64 + 1.0), x).unwrap();
            let rhs = 2.0 * x * hermite_nu(order(n as f64), x).unwrap()
                - 2.0 * n as f64 * hermite_nu(order(n as f64 - 1.0), x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }
        for n in 0..=10 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            let (p, m) = (hermite_nu(order(n as f64), x).unwrap(), hermite_nu(order(n as f64), -x).unwrap());
            assert!((m - s * p).abs() <= 1e-12 * p.abs().max(1e-300));
        }
    }
}

#[test]
fn wronskian_is_constant_and_matches_closed_form() {
    for &nu in &[0.3, 0.7, 2.1, 4.9] {
        let eps = Epsilon::from_nu(nu).unwrap();
        let w = wronskian_analytic(eps);
        let values: Vec<f64> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|&y| wronskian_numeric(eps, y).unwrap())
            .collect();
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        assert!((hi - lo) / w.abs() < 1e-8, "nu={nu}: {values:?}");
        for v in values {
            assert!(rel_err(v, w) < 1e-8, "nu={nu}: {v} vs {w}");
        }
    }
    // ε = 2.1 at five distinct points, including outside the unit range
    let eps = Epsilon::new(2.1).unwrap();
    for &y in &[-3.1, -0.4, 0.25, 1.7, 3.3] {
        assert!(rel_err(wronskian_numeric(eps, y).unwrap(), wronskian_analytic(eps)) < 1e-8);
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let d = hermite_nu_prime(order(2.1), 0.5).unwrap();
    let fd = finite_diff(|x| hermite_nu(order(2.1), x).unwrap(), 0.5, DiffOrder::First, 1e-3);
    assert!((d - fd).abs() < 1e-8, "{d} vs {fd}");
}

#[test]
fn envelope_satisfies_the_oscillator_equation_at_example_point() {
    let nu = 2.1;
    let f = |x: f64| hermite_envelope(order(nu), x).unwrap();
    let x = 0.3;
    let d2 = finite_diff(f, x, DiffOrder::Second, 1e-3);
    assert!((d2 - (x * x - 2.0 * (nu + 0.5)) * f(x)).abs() < 1e-6);
}

#[test]
fn continuous_route_tracks_polynomial_near_integers() {
    for n in 0..6 {
        for &x in &[-0.5, 0.0, 0.7, 2.5] {
            let poly = hermite_nu(order(n as f64), x).unwrap();
            let near = hermite_nu_continuous(order(n as f64 + 1e-9), x).unwrap();
            assert!((poly - near).abs() < 1e-6 * poly.abs().max(1.0), "n={n} x={x}");
        }
    }
}

proptest! {
    #[test]
    fn ode_residual_vanishes(nu in -1.5f64..6.0, x in -4.0f64..4.0) {
        let f = |t: f64| hermite_envelope(order(nu), t).unwrap();
        let d2 = finite_diff(f, x, DiffOrder::Second, 1e-3);
        let residual = d2 - (x * x - 2.0 * nu - 1.0) * f(x);
        let scale = f(x).abs().max(1.0);
        prop_assert!(residual.abs() < 1e-6 * scale, "residual {residual} at nu={nu} x={x}");
    }

    #[test]
    fn gamma_times_reciprocal_is_one(z in -20.0f64..40.0) {
        prop_assume!((z - z.round()).abs() > 1e-6 || z > 0.0);
        let p = gamma(z).unwrap() * recip_gamma(z);
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wronskian_numeric_matches_analytic(nu in -2.0f64..8.0, y in -2.5f64..2.5) {
        let eps = Epsilon::from_nu(nu).unwrap();
        let w = wronskian_analytic(eps);
        prop_assume!(w.abs() > 1e-6);
        let n = wronskian_numeric(eps, y).unwrap();
        prop_assert!(rel_err(n, w) < 1e-9, "nu={nu} y={y}: {n} vs {w}");
    }
}
