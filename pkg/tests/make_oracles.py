"""Regenerate ``oracle_values.py`` with mpmath at 40 digits.

Prints the ``ORACLE`` entries.  Nothing here imports the package under test.
"""
import mpmath as mp

mp.mp.dps = 40

QS = ["0.3", "0.5", "0.7"]


def E(z, q):
    return mp.qp(-z, q * q)


def e(z, q):
    return 1 / mp.qp(z, q * q)


def bilateral_Q(z, q):
    q2 = q * q
    return (1 - q2) * mp.nsum(lambda m: 1 / (z * q2 ** m + 1 / (z * q2 ** m)), [-mp.inf, mp.inf])


def c(x):
    x = mp.mpc(x)
    return complex(float(x.real), float(x.imag))


def build():
    out = {}
    for q in QS:
        Q = mp.mpf(q)
        for z in ["0.25", "0.3+0.4j", "-2.5", "5+1j", "1.7j", "0.9j"]:
            Z = mp.mpc(complex(z))
            out[("e", q, z)] = c(e(Z, Q))
            out[("E", q, z)] = c(E(Z, Q))
        for z in ["3", "10", "-37.5"]:
            Z = mp.mpf(z)
            ep, Ep = e(1j * Z, Q), E(1j * Z, Q)
            out[("cos", q, z)] = float(ep.real)
            out[("sin", q, z)] = float(ep.imag)
            out[("Cos", q, z)] = float(Ep.real)
            out[("Sin", q, z)] = float(Ep.imag)
        for z in ["1", "-0.6+0.2j", "4"]:
            Z, q2 = mp.mpc(complex(z)), Q * Q
            out[("phi01", q, z)] = c(mp.nsum(lambda n: Q ** (2 * n * (n - 1)) * Z ** n / mp.qp(q2, q2, n),
                                             [0, mp.inf]))
        out[("theta0", q)] = float(bilateral_Q(1 - Q * Q, Q))
        for z in ["0.37", "2.0", "-5.5"]:
            v = bilateral_Q(mp.mpf(z), Q)
            out[("bigQ", q, z)] = float(v.real) if float(z) > 0 else c(v)
        for nu in ["0.3", "0.5", "0.7"]:
            NU, A = mp.mpf(nu), 1 - Q * Q
            s = mp.fsum(Q ** (2 * NU * m) * (Q ** (-2 * m) + 1j * A) / (Q ** (-2 * m) / A + A * Q ** (2 * m))
                        for m in range(-200, 201))
            out[("c_nu", q, nu)] = c(s)
    return out


if __name__ == "__main__":
    for k, v in build().items():
        print(f"    {k!r}: {v!r},")
