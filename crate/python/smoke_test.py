"""Smoke test for the sho_delta_py extension module."""
import math

import sho_delta_py as sd


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    spike = sd.Spike(0.0, -1.0)
    spec = sd.solve_spectrum([spike], 6)
    expected = [-0.842419, 1.0, 1.72077, 3.0, 3.79123, 5.0]
    for got, want in zip(spec.epsilons_minus_half, expected):
        close(got, want, 1e-4)

    pair = sd.solve_spectrum([sd.Spike(-0.5, -1.0), sd.Spike(0.5, -1.0)], 6)
    close(pair.epsilons_minus_half[0], -1.11286, 1e-4)
    for n, beta in enumerate(pair.betas):
        close(abs(beta), 1.0, 1e-6)

    wf = pair.wavefunction(1)
    close(wf.norm_integral(), 1.0, 1e-8)
    close(wf(0.7), -wf(-0.7), 1e-10)
    close(wf.overlap(pair.wavefunction(0)), 0.0, 1e-6)

    oracle = sd.oracle_levels([spike], 6)
    for root, o in zip(spec.epsilons, oracle):
        close(root, o, 5e-4)

    close(sd.g0(0.3, -0.2, 2.1), sd.g0(-0.2, 0.3, 2.1), 1e-14)
    axis, rows = sd.greens_grid(2.1, range=5.0, points=3)
    assert len(axis) == 3 and len(rows) == 3
    close(sd.hermite_nu(2.0, 1.5), 4 * 1.5**2 - 2, 1e-12)

    worst = max(row[4] for row in sd.table(2) if not (row[0] == -1.0 and row[1] == 2))
    assert worst < 1e-4, worst

    try:
        sd.g0(0.0, 0.0, 1.5)
    except sd.NumericError:
        pass
    else:
        raise AssertionError("pole not reported")
    try:
        sd.Spike(math.nan, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("nan accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
