#!/usr/bin/env python3
"""Smoke test for the align_kinetics_py extension module.

Builds nothing itself: run `cargo build -p align-kinetics-python`
first (or `--release`), then `python3 python/smoke_test.py`.
"""

import math
import pathlib
import shutil
import sys
import tempfile


def load_module():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / f"libalign_kinetics_py{ext}"
        for profile in ("release", "debug")
        for ext in (".so", ".dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "extension not built: run `cargo build -p align-kinetics-python` first"
        )
    tmp = tempfile.mkdtemp(prefix="align_kinetics_py_")
    shutil.copy(built, pathlib.Path(tmp) / "align_kinetics_py.so")
    sys.path.insert(0, tmp)
    import align_kinetics_py

    return align_kinetics_py


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    ak = load_module()

    # order parameter: c(0) = 0, monotone, n = 3 closed form coth k - 1/k
    approx(ak.order_parameter(3, 0.0), 0.0, 1e-12)
    k = 2.0
    approx(ak.order_parameter(3, k), 1.0 / math.tanh(k) - 1.0 / k, 1e-6)

    # equilibrium concentration: threshold and the rho = 4 anchor
    assert ak.kappa_of_rho(3, 2.0) == 0.0
    approx(ak.kappa_of_rho(3, 4.0), 2.3995, 1e-3)

    # closure coefficients: lambda < 0, theta_c defined, compatibility
    co = ak.closure_coefficients(3, 4.0)
    assert co["lambda"] < 0.0
    assert co["theta_c"] is not None
    approx(4.0 * co["c"], co["kappa"], 1e-6)

    # spectra: Lambda_0 = n - 1 at kappa = 0
    spec = ak.poincare_constant(3, 0.0)
    approx(spec["poincare"], 2.0, 1e-3)

    # rates: closed form below threshold, heat mode
    rate, kind = ak.convergence_rate(3, 2.0)
    approx(rate, 2.0 / 3.0, 1e-12)
    assert kind == "exponential-global"
    rate, kind = ak.convergence_rate(3, 4.0, zero_flux=True)
    approx(rate, 6.0, 1e-12)
    assert kind == "heat-mode"

    # characteristic speeds: hyperbolic along the axis, elliptic across
    sd = ak.characteristic_speeds(3, 4.0, 0.0, grid_n=800)
    assert sd["hyperbolic"] and sd["speeds"] is not None
    sd = ak.characteristic_speeds(3, 4.0, math.pi / 2, grid_n=800)
    assert not sd["hyperbolic"] and sd["complex_part"] is not None

    # kinetic relaxation: distance decays
    series = ak.relax_homogeneous(3, 2.0, t_end=5.0, grid_n=100)
    assert series[-1][2] < series[0][2]

    # particles: deterministic in the seed
    a = ak.particle_order(3, 4.0, 500, 7, 1.0)
    b = ak.particle_order(3, 4.0, 500, 7, 1.0)
    assert a == b

    # error mapping: bad input raises ValueError
    try:
        ak.closure_coefficients(3, 2.0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for rho <= n")

    print("smoke test passed")


if __name__ == "__main__":
    main()
