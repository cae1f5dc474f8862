#!/usr/bin/env python3
"""Generate the fixed-node J0/J1 Hankel digital filter shipped in data/hankel/.

The filter evaluates  int_0^inf K(lam) J_nu(rho*lam) dlam ~= (1/rho) sum_s w_s K(exp(t_s)/rho).

In the log variable the transform is a convolution with g(t) = e^t J_nu(e^t), whose Fourier
transform is  G(k) = 2^{-ik} Gamma((nu+1-ik)/2) / Gamma((nu+1+ik)/2).  Weights are samples of g
convolved with a band-limited interpolation kernel whose spectrum is flat up to k_pass and rolls
off smoothly (C-infinity) to zero at 2*pi/delta - k_pass, so no aliasing reaches the pass band.

Usage: design_hankel_filter.py OUTDIR
"""
import sys
from pathlib import Path

import numpy as np
from scipy.special import loggamma

VERSION = 1
DELTA = 0.1          # node spacing in ln(lambda)
K_PASS = 16.0        # flat pass band, rad per unit ln(lambda)
T_MIN, T_MAX = -26.0, 12.0
PANELS, GAUSS = 4000, 32


def g_hat(k, nu):
    return np.exp(-1j * k * np.log(2.0) + loggamma((nu + 1 - 1j * k) / 2) - loggamma((nu + 1 + 1j * k) / 2))


def window(k, k_pass, k_stop):
    x = np.clip((k - k_pass) / (k_stop - k_pass), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / x), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / (1.0 - x)), 0.0)
    return 1.0 - a / (a + b)


def design(nu):
    k_stop = 2 * np.pi / DELTA - K_PASS
    n = int(round((T_MAX - T_MIN) / DELTA))
    t = T_MIN + DELTA * np.arange(n + 1)
    xg, wg = np.polynomial.legendre.leggauss(GAUSS)
    edges = np.linspace(0.0, k_stop, PANELS + 1)
    k = np.concatenate([0.5 * (b - a) * (xg + 1) + a for a, b in zip(edges[:-1], edges[1:])])
    wk = np.concatenate([0.5 * (b - a) * wg for a, b in zip(edges[:-1], edges[1:])])
    spec = g_hat(k, nu) * window(k, K_PASS, k_stop) * wk
    w = np.array([(DELTA / np.pi) * np.sum((spec * np.exp(1j * k * tt)).real) for tt in t])
    return t, w


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/hankel")
    out.mkdir(parents=True, exist_ok=True)
    for nu in (0, 1):
        t, w = design(nu)
        path = out / f"fdem_j{nu}_v{VERSION}.txt"
        with path.open("w") as f:
            f.write(f"# fdem Hankel filter, order {nu}, version {VERSION}\n")
            f.write(f"# nodes: lambda_s = exp(t_s) / rho, t_s = {T_MIN} + s * {DELTA}, {len(t)} nodes\n")
            f.write(f"# design: sinc-interpolated convolution weights, pass band {K_PASS}, C-inf roll-off\n")
            f.write("# columns: t_s weight_s\n")
            for tt, ww in zip(t, w):
                f.write(f"{tt:.1f} {ww:.17e}\n")
        print(path, len(t))


if __name__ == "__main__":
    main()
