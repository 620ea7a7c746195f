use proptest::prelude::*;
use sho_delta::numerics::{one_sided_diff, Side};
use sho_delta::spectra::*;
use sho_delta::specfun::sho_eigenfunction;
use sho_delta::units::{DeltaSpike, Epsilon};

fn spike(a: f64, l: f64) -> DeltaSpike {
    DeltaSpike::new(a, l).unwrap()
}

// ε − 1/2 from an independent high-precision root solve (mpmath, 30 digits).
const CENTRED_EVEN: [(f64, [f64; 6]); 4] = [
    (-0.5, [-0.3444240, 1.8573382, 3.8939526, 5.9118132, 7.9228929, 9.9306242]),
    (0.5, [0.2335176, 2.1354146, 4.1036749, 6.0870275, 8.0764228, 10.0689250]),
    (-1.0, [-0.8424189, 1.7207695, 3.7912270, 5.8257775, 7.8473258, 9.8624224]),
    (1.0, [0.3927440, 2.2546415, 4.2001958, 6.1699091, 8.1500869, 10.1358553]),
];

const OFFSET_HALF: [(f64, [f64; 6]); 4] = [
    (-0.5, [-0.2889817, 0.8950743, 1.9719199, 2.8864710, 3.9994264, 4.9034964]),
    (0.5, [0.1690799, 1.1082274, 2.0264497, 3.1123790, 4.0005705, 5.0943818]),
    (-1.0, [-0.7509008, 0.8098304, 1.9435545, 2.7806897, 3.9988503, 4.8093515]),
    (1.0, [0.2677823, 1.2038464, 2.0503532, 3.2161868, 4.0011375, 5.1827713]),
];

const SYMMETRIC_PAIR: [(f64, [f64; 6]); 4] = [
    (-0.5, [-0.4947600, 0.7112253, 1.9510952, 2.7530130, 3.9988774, 4.8124300]),
    (0.5, [0.3895979, 1.1725595, 2.0617316, 3.2031044, 4.0011666, 5.1888060]),
    (-1.0, [-1.1128600, 0.2309929, 1.9125225, 2.5016417, 3.9977967, 4.6481550]),
    (1.0, [0.6897331, 1.2804716, 2.1380576, 3.3545711, 4.0023794, 5.3573459]),
];

#[test]
fn centred_spike_even_levels() {
    for (lambda, want) in CENTRED_EVEN {
        let r = solve_one_delta(spike(0.0, lambda), 12).unwrap();
        let got = r.epsilons_minus_half();
        for k in 0..6 {
            assert!((got[2 * k] - want[k]).abs() < 1e-6, "λ={lambda} k={k}: {}", got[2 * k]);
            assert!((got[2 * k + 1] - (2 * k + 1) as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn offset_spike_levels() {
    for (lambda, want) in OFFSET_HALF {
        let got = solve_one_delta(spike(0.5, lambda), 6).unwrap().epsilons_minus_half();
        for k in 0..6 {
            assert!((got[k] - want[k]).abs() < 1e-6, "λ={lambda} n={k}: {}", got[k]);
        }
    }
}

#[test]
fn symmetric_pair_levels_and_parity() {
    for (lambda, want) in SYMMETRIC_PAIR {
        let r = solve_two_delta(spike(-0.5, lambda), spike(0.5, lambda), 6).unwrap();
        for (k, level) in r.levels.iter().enumerate() {
            assert!((level.epsilon_minus_half() - want[k]).abs() < 1e-6, "λ={lambda} n={k}");
            let beta = level.beta.unwrap();
            assert!((beta.abs() - 1.0).abs() < 1e-8, "β = {beta}");
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((beta - parity).abs() < 1e-8);
            let wf = wavefunction_for_level(&r, k).unwrap();
            for x in [0.1, 0.45, 0.9, 2.3] {
                assert!((wf.value(-x) - parity * wf.value(x)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn uncoupled_pair_is_free_oscillator() {
    let r = solve_two_delta(spike(-0.3, 0.0), spike(0.8, 0.0), 4).unwrap();
    for (n, level) in r.levels.iter().enumerate() {
        assert!((level.epsilon_minus_half() - n as f64).abs() < 1e-10);
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(level.beta, Some(parity));
    }
    assert!(matches!(
        char_two_delta(Epsilon::new(1.5).unwrap(), spike(-0.3, 0.0), spike(0.8, 0.0)),
        Err(SpectraError::DegenerateRegion { .. })
    ));
}

#[test]
fn asymmetric_pair_matches_beta_equations() {
    let (s1, s2) = (spike(-0.7, 0.8), spike(0.4, -0.6));
    let r = solve_two_delta(s1, s2, 5).unwrap();
    for level in &r.levels {
        let (residual, beta1) = char_two_delta(level.epsilon, s1, s2).unwrap();
        let beta = level.beta.unwrap();
        assert!(residual.abs() < 1e-7 * (1.0 + beta.abs()), "{residual}");
        assert!((beta1 - beta).abs() < 1e-7 * (1.0 + beta.abs()));
    }
}

#[test]
fn weak_spike_recovers_oscillator_states() {
    let r = solve_one_delta(spike(0.3, 1e-12), 4).unwrap();
    for n in 0..4 {
        let wf = wavefunction_for_level(&r, n).unwrap();
        let sign = if sho_eigenfunction(n, -9.0) > 0.0 { 1.0 } else { -1.0 };
        let ov = wf.overlap_with(|x| sign * sho_eigenfunction(n, x)).unwrap();
        assert!((ov - 1.0).abs() < 1e-9, "n={n}: {ov}");
    }
}

#[test]
fn wavefunction_invariants_one_spike() {
    for (a, lambda) in [(0.0, -1.0), (0.5, 1.0), (-1.2, 0.7), (0.5, -0.5)] {
        let s = spike(a, lambda);
        let r = solve_one_delta(s, 5).unwrap();
        let wfs: Vec<_> = (0..5).map(|n| wavefunction_for_level(&r, n).unwrap()).collect();
        for (n, wf) in wfs.iter().enumerate() {
            assert!((wf.norm_integral().unwrap() - 1.0).abs() < 1e-8);
            let xm = wf.x_max();
            assert!(wf.value(xm).abs() < 1e-10 && wf.value(-xm).abs() < 1e-10);
            assert!(wf.continuity_residuals().unwrap()[0].abs() < 1e-10);
            let h = 1e-3;
            let right = one_sided_diff(|x| wf.value(x), a, Side::Right, h);
            let left = one_sided_diff(|x| wf.value(x), a, Side::Left, h);
            let jump = right - left - 2.0 * lambda * wf.value(a);
            assert!(jump.abs() < 1e-6, "a={a} λ={lambda} n={n}: jump {jump}");
            assert!(wf.value(-xm + 1.0) > 0.0);
            for other in &wfs[..n] {
                assert!(wf.overlap(other).unwrap().abs() < 1e-8);
            }
        }
    }
}

#[test]
fn wavefunction_invariants_two_spikes() {
    let (s1, s2) = (spike(-0.7, 0.8), spike(0.4, -0.6));
    let r = solve_two_delta(s1, s2, 4).unwrap();
    let wfs: Vec<_> = (0..4).map(|n| wavefunction_for_level(&r, n).unwrap()).collect();
    for (n, wf) in wfs.iter().enumerate() {
        assert!((wf.norm_integral().unwrap() - 1.0).abs() < 1e-8);
        for (s, rj) in [s1, s2].iter().zip(wf.jump_residuals().unwrap()) {
            assert!(rj.abs() < 1e-6, "n={n} at {}: {rj}", s.position());
        }
        for c in wf.continuity_residuals().unwrap() {
            assert!(c.abs() < 1e-10);
        }
        for other in &wfs[..n] {
            assert!(wf.overlap(other).unwrap().abs() < 1e-8);
        }
    }
}

#[test]
fn spike_on_a_node() {
    // u_1 vanishes at 0, so n = 1 is untouched by any strength there.
    let r = solve_two_delta(spike(0.0, 2.0), spike(1.1, 0.0), 3).unwrap();
    assert!((r.levels[1].epsilon_minus_half() - 1.0).abs() < 1e-9);
    let wf = wavefunction_for_level(&r, 1).unwrap();
    let ov = wf.overlap_with(|x| -sho_eigenfunction(1, x)).unwrap();
    assert!((ov - 1.0).abs() < 1e-8, "{ov}");
}

#[test]
fn branches_are_ordered() {
    let strengths: Vec<f64> = (-15..=15).map(|k| k as f64 * 0.1).collect();
    let rows = sweep_one_delta(0.0, &strengths, 6).unwrap();
    let (decrease, gap) = branch_diagnostics(&rows);
    assert!(decrease < 1e-9, "{decrease}");
    assert!(gap > 0.0);
}

#[test]
fn scan_window_too_small() {
    let scan = ScanConfig {
        lo: -3.0,
        hi: 1.0,
        step: 0.02,
        root_tol: 1e-10,
    };
    assert!(matches!(
        solve_one_delta_with(spike(0.0, 0.5), 4, scan),
        Err(SpectraError::ScanIncomplete { found: 1, requested: 4, .. })
    ));
}

#[test]
fn strong_attraction_widens_window() {
    let r = solve_one_delta(spike(0.0, -3.0), 2).unwrap();
    // bound state of a lone attractive delta sits near −λ²/2
    assert!(r.levels[0].epsilon.value() < -3.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_are_zeros(a in -1.5f64..1.5, lambda in -1.5f64..1.5) {
        let s = spike(a, lambda);
        let r = solve_one_delta(s, 4).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for level in &r.levels {
            prop_assert!(level.epsilon.value() > prev);
            prev = level.epsilon.value();
            let f = char_one_delta(level.epsilon, s).unwrap();
            let scale = char_one_delta(Epsilon::new(level.epsilon.value() + 1e-3).unwrap(), s).unwrap().abs();
            prop_assert!(f.abs() <= 1e-6 * scale.max(1e-10));
        }
    }

    #[test]
    fn levels_interlace_with_oscillator(a in -1.0f64..1.0, lambda in 0.01f64..1.5) {
        let r = solve_one_delta(spike(a, lambda), 4).unwrap();
        for (n, v) in r.epsilons_minus_half().iter().enumerate() {
            prop_assert!(*v >= n as f64 - 1e-9 && *v <= n as f64 + 1.0 + 1e-9);
        }
    }
}
