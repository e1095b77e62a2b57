"""Scalar q-special functions on base q^2.

Every function takes its deformation parameter through a :class:`QParams`
instance and accepts scalars or numpy arrays.  Complex input gives complex
output; the trigonometric pairs return real arrays for real input.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergentError, PoleProximityError, ZeroArgumentError

# hard ceiling on the number of lattice terms any adaptive bilateral sum may use
_MAX_DEPTH = 1 << 14


@dataclass(frozen=True)
class QParams:
    """Deformation parameter and the numerical policy used everywhere.

    Attributes
    ----------
    q : float
        Deformation parameter, ``0 < q < 1``.
    series_tol : float
        Absolute tail bound at which series are truncated.
    lattice_depth : int
        Initial half-width ``M`` of bilateral sums (``m = -M..M``).
    pole_guard : float
        Minimum allowed distance from a pole.
    """

    q: float
    series_tol: float = 1e-15
    lattice_depth: int = 48
    pole_guard: float = 1e-8

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0) or not math.isfinite(q):
            raise ValueError(f"q must lie in the open interval (0, 1), got {self.q!r}")
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if not self.pole_guard > 0:
            raise ValueError("pole_guard must be positive")
        if int(self.lattice_depth) != self.lattice_depth or self.lattice_depth < 1:
            raise ValueError("lattice_depth must be a positive integer")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "lattice_depth", int(self.lattice_depth))

    @property
    def q2(self) -> float:
        return self.q * self.q

    @property
    def a(self) -> float:
        """The recurring scale ``1 - q^2``."""
        return 1.0 - self.q * self.q


@dataclass(frozen=True)
class JacobiThetaParams:
    """Modular data ``(tau, u, p = exp(2 pi i tau))`` for the theta oracle."""

    tau: complex
    u: complex

    def __post_init__(self):
        if not complex(self.tau).imag > 0:
            raise ValueError("tau must lie in the upper half plane")

    @property
    def p(self) -> complex:
        return np.exp(2j * np.pi * complex(self.tau))

    @classmethod
    def from_q(cls, z, q: float) -> "JacobiThetaParams":
        tau = -2j * math.log(q) / math.pi
        u = np.log(complex(z)) / (math.pi * 1j) + 0.5
        return cls(tau=tau, u=u)


def _asarray(z):
    arr = np.asarray(z)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return arr[()] if scalar else arr


def _is_real(z) -> bool:
    return not np.iscomplexobj(z)


# --------------------------------------------------------------------------
# q-Pochhammer symbols
# --------------------------------------------------------------------------

def qpoch_finite(a, qq: float, n: int):
    """Finite product ``(a; qq)_n = (1-a)(1-a qq)...(1-a qq^(n-1))``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    arr, scalar = _asarray(a)
    out = np.ones_like(arr, dtype=np.result_type(arr, float))
    factor = arr
    for _ in range(n):
        out = out * (1 - factor)
        factor = factor * qq
    return _out(out, scalar)


def _n_factors(max_abs: float, qq: float, tol: float) -> int:
    # smallest K with max_abs * qq**K < tol
    if max_abs < tol:
        return 0
    return int(math.ceil(math.log(tol / max_abs) / math.log(qq))) + 1


def _qpoch_inf(arr, qq, tol, invert=False):
    out = np.ones_like(arr, dtype=np.result_type(arr, float))
    if arr.size == 0:
        return out
    amax = float(np.max(np.abs(arr)))
    if not math.isfinite(amax):
        raise ValueError("qpoch_inf needs finite arguments")
    n = _n_factors(amax, abs(qq), tol)
    factor = arr
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            out = out * (1 - factor)
            factor = factor * qq
    bad = ~np.isfinite(out) | (np.abs(out) > 1e300)
    if invert:
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = 1.0 / out
    if np.any(bad):
        # overflow: redo those entries in log space; the reciprocal may still be representable
        sub = arr[bad]
        logs = np.zeros(sub.shape, dtype=complex)
        factor = sub.astype(complex)
        for _ in range(n):
            logs = logs + np.log(1 - factor)
            factor = factor * qq
        with np.errstate(over="ignore", under="ignore"):
            vals = np.exp(-logs if invert else logs)
        if np.iscomplexobj(out):
            out[bad] = vals
        else:
            out[bad] = vals.real
    return out


def qpoch_inf(a, qq: float, tol: float = 1e-16):
    """Infinite product ``(a; qq)_inf`` truncated once ``|a qq^k| < tol``."""
    if not abs(qq) < 1:
        raise ValueError("|qq| must be < 1")
    arr, scalar = _asarray(a)
    return _out(_qpoch_inf(arr, qq, tol), scalar)


def qbinom(l: int, i: int, qq2: float) -> float:
    """Gaussian binomial ``[l, i]`` in base ``qq2``."""
    if not 0 <= i <= l:
        raise ValueError(f"need 0 <= i <= l, got l={l}, i={i}")
    return float(qpoch_finite(qq2, qq2, l) / (qpoch_finite(qq2, qq2, i) * qpoch_finite(qq2, qq2, l - i)))


# --------------------------------------------------------------------------
# q^2-exponentials
# --------------------------------------------------------------------------

def _check_real_poles(w, params: QParams, label: str):
    """Raise if any ``w`` is within pole_guard of some q^(-2k), k >= 0."""
    w = np.asarray(w)
    q2 = params.q2
    big = w.real >= 1.0 - params.pole_guard
    if not np.any(big):
        return
    cand = w[big]
    k = np.rint(np.log(np.maximum(cand.real, 1e-300)) / -math.log(q2))
    for dk in (-1, 0, 1):
        kk = np.maximum(k + dk, 0)
        dist = np.abs(cand - q2 ** (-kk))
        bad = dist < params.pole_guard
        if np.any(bad):
            z0 = complex(cand[bad].flat[0])
            k0 = int(kk[bad].flat[0])
            raise PoleProximityError(
                f"{label}: argument {z0} lies within {params.pole_guard:g} of the pole q^(-2*{k0})"
            )


def e_q2_product(z, params: QParams):
    """``1/(z; q^2)_inf`` evaluated directly as a product."""
    arr, scalar = _asarray(z)
    _check_real_poles(arr, params, "e_q2")
    return _out(_qpoch_inf(arr, params.q2, params.series_tol * 1e-1, invert=True), scalar)


def e_q2_partial_fractions(z, params: QParams):
    """Partial-fraction expansion of ``e_q2`` over its poles q^(-2k).

    Globally valid off the poles, but accurate only in the absolute sense:
    for large ``|z|`` the terms cancel down to a much smaller result.
    """
    arr, scalar = _asarray(z)
    _check_real_poles(arr, params, "e_q2")
    q, q2, tol = params.q, params.q2, params.series_tol
    arr = arr.astype(complex)
    total = np.zeros_like(arr)
    coef = 1.0  # (-1)^k q^(k(k+1)) / (q^2;q^2)_k
    k = 0
    while True:
        w = arr * q2 ** k
        total = total + coef / (1 - w)
        k += 1
        coef = -coef * q ** (2 * k) / (1 - q2 ** k)
        # once |z q^(2k)| <= 1/2 every later |1/(1 - z q^(2k))| <= 2
        if np.all(np.abs(arr) * q2 ** k <= 0.5) and 2 * abs(coef) / (1 - q2) < tol:
            break
        if k > _MAX_DEPTH:
            raise NonConvergentError("partial-fraction series for e_q2 did not converge")
    res = total / qpoch_inf(q2, q2, tol * 1e-1)
    return _out(res, scalar)


def e_q2(z, params: QParams, method: str = "product"):
    """Small q^2-exponential ``sum z^n / (q^2;q^2)_n = 1/(z;q^2)_inf``.

    ``method='product'`` (default) keeps relative accuracy on the whole plane;
    ``method='partial'`` uses the partial-fraction expansion over the poles.
    Raises :class:`PoleProximityError` near ``z = q^(-2k)``.
    """
    if method == "product":
        return e_q2_product(z, params)
    if method == "partial":
        return e_q2_partial_fractions(z, params)
    raise ValueError(f"unknown method {method!r}")


def E_q2(z, params: QParams):
    """Big q^2-exponential ``(-z; q^2)_inf``, an entire function."""
    arr, scalar = _asarray(z)
    return _out(qpoch_inf(-arr, params.q2, params.series_tol * 1e-1), scalar)


def small_trig(z, params: QParams, method: str = "product"):
    """``(cos_q2 z, sin_q2 z)`` built from ``e_q2(+-iz)``.

    ``method='partial'`` evaluates the partial-fraction sums in ``z^2``
    directly; this route is only offered for real ``z``.
    """
    arr, scalar = _asarray(z)
    if method == "partial":
        if not _is_real(arr):
            raise ValueError("the partial-fraction route needs real z")
        c, s = _trig_partial(arr.astype(float), params)
        return _out(c, scalar), _out(s, scalar)
    ep = e_q2(1j * arr, params, method)
    em = e_q2(-1j * arr, params, method)
    c = 0.5 * (ep + em)
    s = (ep - em) / 2j
    if _is_real(arr):
        # for real z the two values are conjugate: cos = Re, sin = Im
        c, s = ep.real, ep.imag
    return _out(np.asarray(c), scalar), _out(np.asarray(s), scalar)


def _trig_partial(x, params: QParams):
    q, q2, tol = params.q, params.q2, params.series_tol
    x2 = x * x
    c_sum = np.zeros_like(x)
    s_sum = np.zeros_like(x)
    base = 1.0  # q^(k(k+1)) / (q^2;q^2)_k
    k = 0
    while True:
        denom = 1 + x2 * q2 ** (2 * k)
        sign = -1.0 if k % 2 else 1.0
        c_sum = c_sum + sign * base / denom
        s_sum = s_sum + sign * base * q2 ** k / denom
        k += 1
        base = base * q ** (2 * k) / (1 - q2 ** k)
        if base / (1 - q2) < tol:
            break
    norm = qpoch_inf(q2, q2, tol * 1e-1)
    return c_sum / norm, x * s_sum / norm


def big_trig(z, params: QParams):
    """``(Cos_q2 z, Sin_q2 z)`` built from ``E_q2(+-iz)``."""
    arr, scalar = _asarray(z)
    ep = E_q2(1j * arr, params)
    if _is_real(arr):
        return _out(np.asarray(ep.real), scalar), _out(np.asarray(ep.imag), scalar)
    em = E_q2(-1j * arr, params)
    return _out(0.5 * (ep + em), scalar), _out((ep - em) / 2j, scalar)


def phi01(z, params: QParams):
    """Basic hypergeometric ``0Phi1(-; 0; q^2, z) = sum q^(2n(n-1)) z^n / (q^2;q^2)_n``."""
    arr, scalar = _asarray(z)
    arr = arr.astype(complex)
    q2, tol = params.q2, params.series_tol
    term = np.ones_like(arr)
    total = np.ones_like(arr)
    n = 0
    while True:
        ratio = q2 ** (2 * n) * arr / (1 - q2 ** (n + 1))
        term = term * ratio
        total = total + term
        n += 1
        r_next = np.abs(q2 ** (2 * n) * arr / (1 - q2 ** (n + 1)))
        if np.all(r_next < 0.5):
            bound = np.abs(term) * r_next / (1 - r_next)
            if np.all(bound < tol * np.maximum(1.0, np.abs(total))):
                break
        if n > _MAX_DEPTH:
            raise NonConvergentError("0Phi1 series did not converge")
    return _out(total, scalar)


# --------------------------------------------------------------------------
# bilateral sums: Q, the lattice theta and its normalisation
# --------------------------------------------------------------------------

def _bilateral(term, params: QParams, what: str):
    """Sum ``term(m)`` over m = -M..M, doubling M until both edges are below tol.

    ``term`` maps an integer array of indices to a 2-D array (index, point).
    """
    M = params.lattice_depth
    tol = params.series_tol
    while True:
        m = np.arange(-M, M + 1)
        vals = term(m)
        total = vals.sum(axis=0)
        edge = np.abs(vals[:2]).sum(axis=0) + np.abs(vals[-2:]).sum(axis=0)
        if np.all(edge < tol * np.maximum(1.0, np.abs(total))):
            return total
        M *= 2
        if M > _MAX_DEPTH:
            raise NonConvergentError(f"{what}: bilateral tails stay above {tol:g}")


def bigQ(z, params: QParams):
    """``(1 - q^2) sum_m 1 / (z q^(2m) + z^(-1) q^(-2m))``."""
    arr, scalar = _asarray(z)
    arr = np.atleast_1d(arr).astype(complex)
    if np.any(arr == 0):
        raise ZeroArgumentError("bigQ is undefined at z = 0")
    q2 = params.q2
    # the summand blows up where z^2 q^(4m) = -1
    with np.errstate(divide="ignore", invalid="ignore"):
        m0 = np.rint(np.log(np.abs(arr)) / -math.log(q2))
    for dm in (-1, 0, 1):
        w = arr * q2 ** (m0 + dm)
        d = np.abs(w + 1 / w)
        if np.any(d < params.pole_guard):
            raise PoleProximityError(f"bigQ: argument {complex(arr[d < params.pole_guard][0])} "
                                     "is within pole_guard of a pole of the summand")

    def term(m):
        w = arr[None, :] * q2 ** m[:, None].astype(float)
        return 1.0 / (w + 1.0 / w)

    res = params.a * _bilateral(term, params, "bigQ")
    if scalar:
        return res[0]
    return res.reshape(np.shape(z))


def _theta_product(u, tau, tol=1e-17):
    """``2 p^(1/8) sin(pi u) prod (1 - e^(2 pi i u) p^n)(1 - e^(-2 pi i u) p^n)(1 - p^n)``."""
    p = np.exp(2j * np.pi * tau)
    x = np.exp(2j * np.pi * u)
    out = 2 * np.exp(0.25j * np.pi * tau) * np.sin(np.pi * u)
    n = 1
    while True:
        pn = p ** n
        out = out * (1 - x * pn) * (1 - pn / x) * (1 - pn)
        n += 1
        if abs(p ** n) * max(abs(x), abs(1 / x), 1.0) < tol:
            return out
        if n > _MAX_DEPTH:
            raise NonConvergentError("theta product did not converge")


def _theta_prime0(tau, tol=1e-17):
    """Derivative at ``u = 0`` of the theta product: ``2 pi p^(1/8) prod (1 - p^n)^3``."""
    p = np.exp(2j * np.pi * tau)
    out = 2 * np.pi * np.exp(0.25j * np.pi * tau)
    n = 1
    while abs(p ** n) > tol:
        out = out * (1 - p ** n) ** 3
        n += 1
    return out


def jacobi_theta(u, tau):
    """The theta product in the normalisation used by the Q oracle."""
    JacobiThetaParams(tau=tau, u=u)
    return _theta_product(complex(u), complex(tau))


def bigQ_theta_oracle(z, params: QParams):
    """Independent evaluation of :func:`bigQ` through the Jacobi theta ratio.

    Uses ``tau = -2i ln q / pi`` (so the nome is ``q^4``) and the principal
    branch of ``u = ln z / (pi i) + 1/2``.  The bare theta ratio
    ``R = -theta(u + tau/2) theta'(0) / (2 pi i theta(u) theta(tau/2))`` is
    quasi-periodic, ``R(q^2 z) = q^(-2) R(z)``, so the q^2-invariant
    combination returned here is ``(1 - q^2) z R``.
    """
    arr, scalar = _asarray(z)
    flat = np.atleast_1d(arr).astype(complex).ravel()
    if np.any(flat == 0):
        raise ZeroArgumentError("bigQ_theta_oracle is undefined at z = 0")
    tau = -2j * math.log(params.q) / math.pi
    dth0 = _theta_prime0(tau)
    th_half = _theta_product(tau / 2, tau)
    res = np.empty_like(flat)
    for i, zi in enumerate(flat):
        u = JacobiThetaParams.from_q(zi, params.q).u
        num = _theta_product(u + tau / 2, tau) * dth0
        den = _theta_product(u, tau) * th_half
        res[i] = -params.a * zi * num / (den * 2j * np.pi)
    if scalar:
        return res[0]
    return res.reshape(np.shape(z))


def theta_lattice(z, params: QParams):
    """``(1 - q^2) sum_m sin_q2((1 - q^2) q^(2m) z)``, invariant under ``z -> q^2 z``."""
    arr, scalar = _asarray(z)
    flat = np.atleast_1d(arr).ravel()
    if np.any(flat == 0):
        raise ZeroArgumentError("theta_lattice is undefined at z = 0")
    a, q2 = params.a, params.q2

    def term(m):
        x = a * q2 ** m[:, None].astype(float) * flat[None, :]
        return small_trig(x, params)[1]

    res = a * _bilateral(term, params, "theta_lattice")
    if scalar:
        return res[0]
    return res.reshape(np.shape(z))


@functools.lru_cache(maxsize=64)
def _theta0_cached(params: QParams) -> float:
    return float(np.real(bigQ(params.a, params)))


def theta0(params: QParams) -> float:
    """Inverse-transform normalisation ``Theta(1) = Q(1 - q^2, q)``."""
    return _theta0_cached(params)


def prop24_partial_sums(z, M: int, params: QParams):
    """Left-hand sides of the two telescoping trig identities.

    Returns ``(1-q^2) z sum_{m >= -M} q^(2m) cos_q2((1-q^2) q^(2m) z)`` and the
    same sum with ``sin_q2``.  They equal ``sin_q2((1-q^2) q^(-2M) z)`` and
    ``1 - cos_q2((1-q^2) q^(-2M) z)`` respectively.
    """
    arr, scalar = _asarray(z)
    flat = np.atleast_1d(arr).ravel()
    a, q2, tol = params.a, params.q2, params.series_tol
    zmax = float(np.max(np.abs(flat))) if flat.size else 0.0
    if zmax == 0.0:
        zeros = np.zeros_like(flat, dtype=np.result_type(flat, float))
        return _out(zeros.reshape(np.shape(z)), scalar), _out(zeros.copy().reshape(np.shape(z)), scalar)
    # terms behave like a z q^(2m) once the argument is small
    top = -M + _n_factors(a * zmax * q2 ** (-M) / (1 - q2), q2, tol) + 2
    m = np.arange(-M, max(top, -M + 1))
    x = a * q2 ** m[:, None].astype(float) * flat[None, :]
    c, s = small_trig(x, params)
    w = q2 ** m[:, None].astype(float)
    lc = a * flat * (w * c).sum(axis=0)
    ls = a * flat * (w * s).sum(axis=0)
    return _out(lc.reshape(np.shape(z)), scalar), _out(ls.reshape(np.shape(z)), scalar)
