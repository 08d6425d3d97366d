"""Smoke test for the mazer Python extension.

Build and install first, e.g. `maturin develop --release` in crates/python.
"""

import math

import mazer


def close(a, b, tol):
    return abs(a - b) < tol


def main():
    p = mazer.MazerParams(0, 0.3, -0.2, 7.0)
    assert p.regime() in {"cold", "intermediate", "hot"}

    closed = mazer.mesa_amplitudes(p)
    oracle = mazer.solve_scattering(p, profile="mesa", slices=1)
    for key in ("rho_a", "tau_a", "rho_b", "tau_b"):
        assert abs(closed[key] - oracle[key]) < 1e-10, key
    total = closed["r_a"] + closed["t_a"] + closed["r_b"] + closed["t_b"]
    assert close(total, 1.0, 1e-10)
    assert close(mazer.emission_probability(p), closed["p_em"], 1e-15)

    blocked = mazer.MazerParams(0, 0.5, 0.5, 10.0)
    assert blocked.regime() == "blocked"
    assert mazer.emission_probability(blocked) == 0.0

    hot = mazer.MazerParams(0, 100.0, 0.0, 100.0 * math.pi)
    assert close(mazer.emission_probability(hot), 1.0, 1e-3)
    assert close(mazer.rabi_emission(hot), 1.0, 1e-12)

    smooth = mazer.solve_scattering(mazer.MazerParams(0, 0.5, 0.1, 8.0), profile="sine2", slices=256)
    assert close(smooth["r_a"] + smooth["t_a"] + smooth["r_b"] + smooth["t_b"], 1.0, 1e-9)

    report = mazer.peak_report(0, 0.0, 0.1, m_max=3)
    assert close(report["amplitude"], 0.5, 1e-15)
    assert all(close(x, (m + 1) * math.pi, 1e-12) for m, x in enumerate(report["positions_kappa_l"]))

    value, validity = mazer.cold_emission_approx(mazer.MazerParams(0, 0.1, 0.0, 3 * math.pi))
    assert close(value, 0.5, 1e-12) and validity["small_detuning"]

    assert mazer.cold_detuning_bounds(0, 0.1) == (-100.0, 0.010000000000000002)
    assert close(mazer.critical_detuning(0, 1.01), 0.0398, 1e-4)
    assert close(mazer.critical_k_ratio(0, 0.0), 1.0, 1e-15)

    csv = mazer.sweep_csv(axis="kappa_l", min=1.0, max=10.0, steps=4, k_over_kappa=0.1, delta_over_g=-0.1)
    rows = [line for line in csv.splitlines() if not line.startswith("#")]
    assert rows[0] == "kappa_l,r_a,t_a,r_b,t_b,p_em,error"
    assert len(rows) == 5
    assert csv == mazer.sweep_csv(axis="kappa_l", min=1.0, max=10.0, steps=4, k_over_kappa=0.1, delta_over_g=-0.1)

    try:
        mazer.MazerParams(0, -1.0, 0.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative momentum accepted")

    try:
        mazer.mesa_amplitudes(mazer.MazerParams(0, 1.0, 0.0, 2.0))
    except mazer.NumericalError:
        pass
    else:
        raise AssertionError("vanishing dressed wavenumber accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
