"""HCP response over a homogeneous half-space (sigma 0.05 S/m, 9 kHz, rho 4.49 m).

h = 0 from Wait's closed form, h > 0 by oscillatory quadrature of the
reflection-factor integral. Requires mpmath.
"""
import mpmath as mp

mp.mp.dps = 20
mu0 = 4e-7 * mp.pi
sigma, f, rho = 0.05, 9000.0, 4.49
k2 = 1j * 2 * mp.pi * f * mu0 * sigma


def closed_form():
    x = mp.sqrt(k2) * rho
    return 2 / x**2 * (9 - (9 + 9 * x + 4 * x**2 + x**3) * mp.e ** (-x)) - 1


def quadrature(h):
    def integrand(lam):
        u = mp.sqrt(lam * lam + k2)
        return lam**2 * (lam - u) / (lam + u) * mp.e ** (-2 * lam * h) * mp.besselj(0, lam * rho)

    return -rho**3 * mp.quadosc(integrand, [0, mp.inf], omega=rho)


if __name__ == "__main__":
    print("h=0", complex(closed_form()))
    for h in (0.05, 0.1):
        print(f"h={h}", complex(quadrature(h)))
