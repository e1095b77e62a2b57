"""q^2-distributions over skeletons and their Fourier transforms.

A distribution is a small frozen record; :func:`pair` evaluates it on a
skeleton.  Pairing is conjugate-linear in the distribution, matching the
regular pairing ``<f, phi> = int conj(f) phi``.

The transform of a distribution is defined by ``<g, psi> = <f, phi>`` where
``psi`` is the transform of ``phi``.  :func:`parseval_check` tests a closed
form from :func:`fourier_table` against that definition numerically.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    ConvergenceWarning,
    InvalidNuError,
    NonIntegrableError,
    OutOfStripError,
    UnsupportedDistributionError,
    WindowError,
)
from .lattice import (
    Skeleton,
    Window,
    delta_value,
    lattice_points,
    q_derivative,
    sample,
    shift_lambda,
)
from .qcore import E_q2, QParams, _bilateral, e_q2, qpoch_finite, theta0
from .transform import _row_sums, _signed_points, fourier_forward, fourier_inverse

# agreement demanded of the two deepest averages before a delta value is trusted
DELTA_AGREEMENT = 1e-9


# ---------------------------------------------------------------------------
# distribution records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Regular:
    """Distribution given by a function or by a skeleton."""
    rep: Union[Skeleton, Callable]
    name: str = "f"

    @property
    def label(self):
        return self.name


@dataclass(frozen=True)
class ThetaPlus:
    label = "theta+"


@dataclass(frozen=True)
class ThetaMinus:
    label = "theta-"


@dataclass(frozen=True)
class Delta:
    label = "delta"


@dataclass(frozen=True)
class SignS:
    """``sign z``, paired as ``theta+ - theta-``."""
    label = "sign"


@dataclass(frozen=True)
class PowInt:
    """``z^n`` for any integer n; negative powers are regularised by q-derivatives."""
    n: int

    @property
    def label(self):
        return "1" if self.n == 0 else f"z^{self.n}"


@dataclass(frozen=True)
class PowPlusNu:
    """``z_+^(nu - k)``: the power on the positive half-line, ``nu > -1``."""
    nu: float
    k: int = 0

    def __post_init__(self):
        _validate_nu(self.nu, self.k)

    @property
    def label(self):
        return f"z_+^({_fmt(self.nu - self.k)})"


@dataclass(frozen=True)
class PowMinusNu:
    """``z_-^(nu - k)`` with ``z_-^nu = (-z)^nu`` on the negative half-line."""
    nu: float
    k: int = 0

    def __post_init__(self):
        _validate_nu(self.nu, self.k)

    @property
    def label(self):
        return f"z_-^({_fmt(self.nu - self.k)})"


@dataclass(frozen=True)
class PowDelta:
    """``z^(-n) delta(z)``: pairs with the n-th Taylor coefficient at the origin."""
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("PowDelta needs n >= 0")

    @property
    def label(self):
        return "delta" if self.n == 0 else f"z^-{self.n} delta"


@dataclass(frozen=True)
class PowSign:
    """``z^n sign z`` for n >= 0."""
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("PowSign needs n >= 0")

    @property
    def label(self):
        return "sign" if self.n == 0 else f"z^{self.n} sign"


@dataclass(frozen=True)
class Derivative:
    """Distributional q^2-derivative of ``base``."""
    base: "Distribution"

    @property
    def label(self):
        return f"d({self.base.label})"


@dataclass(frozen=True)
class Linear:
    """Finite linear combination ``sum c_j f_j``; never nested."""
    terms: tuple

    def __post_init__(self):
        flat = []
        for c, d in self.terms:
            if isinstance(d, Linear):
                flat.extend((c * c2, d2) for c2, d2 in d.terms)
            else:
                flat.append((complex(c), d))
        object.__setattr__(self, "terms", tuple(flat))

    @property
    def label(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({_fmt(c)})*{d.label}" for c, d in self.terms)


Distribution = Union[Regular, ThetaPlus, ThetaMinus, Delta, SignS, PowInt, PowPlusNu,
                     PowMinusNu, PowDelta, PowSign, Derivative, Linear]


def _fmt(x) -> str:
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:.17g}"
    return f"{x.real:.17g}{x.imag:+.17g}i"


def _validate_nu(nu: float, k: int):
    if k < 0 or int(k) != k:
        raise InvalidNuError("k must be a non-negative integer")
    if not nu > -1:
        raise InvalidNuError(f"nu must exceed -1, got {nu}")
    # (q^(-2 nu); q^2)_k vanishes for nu = 0, 1, ..., k-1
    if k > 0 and float(nu).is_integer() and 0 <= nu <= k - 1:
        raise InvalidNuError(f"nu={nu} makes the regularising Pochhammer symbol vanish")


# ---------------------------------------------------------------------------
# pairing
# ---------------------------------------------------------------------------

def _sum(values, params: QParams, what: str) -> complex:
    """Exactly rounded sum with a warning when either end term is not negligible."""
    values = np.asarray(values, dtype=complex)
    total = complex(math.fsum(values.real), math.fsum(values.imag))
    if len(values):
        edge = max(abs(values[0]), abs(values[-1]))
        if edge > params.series_tol * max(1.0, abs(total)):
            warnings.warn(f"{what}: window edge term {edge:.3g} is not negligible",
                          ConvergenceWarning, stacklevel=3)
    return total


def _kfactor(n: int, params: QParams) -> float:
    """``(q^2;q^2)_n / (1-q^2)^n``."""
    return float(qpoch_finite(params.q2, params.q2, n)) / params.a ** n


def _regularised_power(phi: Skeleton, nu: float, k: int, sign: int) -> complex:
    p = phi.params
    d = q_derivative(phi, k) if k else phi
    x = d.points
    vals = d.pos if sign > 0 else d.neg
    norm = p.a ** (k + 1) / float(qpoch_finite(p.q ** (-2 * nu), p.q2, k))
    if sign < 0:
        norm *= (-1) ** k
    return norm * _sum(x ** (nu + 1) * vals, p, "power pairing")


def _delta(phi: Skeleton, what: str) -> complex:
    deep = delta_value(phi)
    if len(phi.window) > 1:
        prev = 0.5 * (complex(phi.pos[-2]) + complex(phi.neg[-2]))
        if abs(deep - prev) > DELTA_AGREEMENT * max(1.0, abs(deep)):
            warnings.warn(f"{what}: deepest lattice averages differ by {abs(deep - prev):.3g}",
                          ConvergenceWarning, stacklevel=3)
    return deep


def pair(f: Distribution, phi: Skeleton) -> complex:
    """``<f, phi>`` for any supported distribution."""
    p = phi.params
    a = p.a
    x = phi.points
    if isinstance(f, Linear):
        return sum((c.conjugate() * pair(d, phi) for c, d in f.terms), 0j)
    if isinstance(f, Regular):
        if isinstance(f.rep, Skeleton):
            w = f.rep.window.intersect(phi.window)
            fr, ph = f.rep.restrict(w), phi.restrict(w)
        else:
            ph = phi
            fr = sample(f.rep, phi.window, p)
        terms = ph.points * (np.conj(fr.pos) * ph.pos + np.conj(fr.neg) * ph.neg)
        return a * _sum(terms, p, "regular pairing")
    if isinstance(f, ThetaPlus):
        return a * _sum(x * phi.pos, p, "theta+ pairing")
    if isinstance(f, ThetaMinus):
        return a * _sum(x * phi.neg, p, "theta- pairing")
    if isinstance(f, SignS):
        return a * _sum(x * (phi.pos - phi.neg), p, "sign pairing")
    if isinstance(f, Delta):
        return _delta(phi, "delta pairing")
    if isinstance(f, PowInt):
        if f.n >= 0:
            return a * _sum(x ** (f.n + 1) * (phi.pos + (-1) ** f.n * phi.neg), p, "power pairing")
        k = -f.n - 1
        d = q_derivative(phi, k) if k else phi
        norm = a ** (k + 1) / float(qpoch_finite(p.q2, p.q2, k))
        return norm * _sum(d.pos - d.neg, p, "negative power pairing")
    if isinstance(f, PowPlusNu):
        return _regularised_power(phi, f.nu, f.k, +1)
    if isinstance(f, PowMinusNu):
        return _regularised_power(phi, f.nu, f.k, -1)
    if isinstance(f, PowDelta):
        d = q_derivative(phi, f.n) if f.n else phi
        return _delta(d, "z^-n delta pairing") / _kfactor(f.n, p)
    if isinstance(f, PowSign):
        return a * _sum(x ** (f.n + 1) * (phi.pos - (-1) ** f.n * phi.neg), p, "z^n sign pairing")
    if isinstance(f, Derivative):
        # <d f, phi> = -<Lambda f, d phi> = -q^-2 <f, Lambda^-1 d phi>
        inner = shift_lambda(q_derivative(phi, 1), -1)
        return -pair(f.base, inner) / p.q2
    raise UnsupportedDistributionError(f"cannot pair {type(f).__name__}")


def dist_derivative(f: Distribution) -> Distribution:
    """q^2-derivative in the sense ``<d f, phi> = -<Lambda f, d phi>``."""
    if isinstance(f, Linear):
        return Linear(tuple((c, dist_derivative(d)) for c, d in f.terms))
    return Derivative(f)


def scale(c: complex, f: Distribution) -> Linear:
    return Linear(((complex(c), f),))


# ---------------------------------------------------------------------------
# numeric transform of integrable representatives
# ---------------------------------------------------------------------------

def _representative(f: Distribution, window: Window, params: QParams) -> Skeleton:
    x = lattice_points(window, params)
    zero = np.zeros_like(x)
    if isinstance(f, Regular):
        if isinstance(f.rep, Skeleton):
            return f.rep.restrict(f.rep.window.intersect(window))
        return sample(f.rep, window, params)
    if isinstance(f, PowInt):
        return Skeleton(params, window, x ** f.n, (-x) ** f.n)
    if isinstance(f, ThetaPlus):
        return Skeleton(params, window, np.ones_like(x), zero)
    if isinstance(f, ThetaMinus):
        return Skeleton(params, window, zero, np.ones_like(x))
    if isinstance(f, SignS):
        return Skeleton(params, window, np.ones_like(x), -np.ones_like(x))
    if isinstance(f, PowSign):
        return Skeleton(params, window, x ** f.n, -((-x) ** f.n))
    if isinstance(f, PowPlusNu) and f.k == 0:
        return Skeleton(params, window, x ** f.nu, zero)
    if isinstance(f, PowMinusNu) and f.k == 0:
        return Skeleton(params, window, zero, x ** f.nu)
    if isinstance(f, Linear):
        out = Skeleton(params, window, zero, zero)
        for c, d in f.terms:
            out = out + _representative(d, window, params) * c
        return out
    raise UnsupportedDistributionError(f"{type(f).__name__} has no pointwise representative")


def fourier_numeric(f: Distribution, window: Window, params: QParams,
                    out_window: Window | None = None) -> Skeleton:
    """``g(s) = (1/2 Theta_0) int d_z f(z) e_q2(i(1-q^2) z s)`` at each lattice s.

    The kernel is the normal-ordered collapse of ``E_q2(i(1-q^2) zs)``.
    Raises :class:`NonIntegrableError` when the summand is still large at a
    window edge for some output point.
    """
    rep = _representative(f, window, params)
    out_window = out_window or rep.window
    src = _signed_points(rep.window, params)
    dst = _signed_points(out_window, params)
    x = lattice_points(rep.window, params)
    w = params.a * np.concatenate([x, x])
    vals = np.concatenate([rep.pos, rep.neg])
    with np.errstate(over="ignore", invalid="ignore"):
        terms = e_q2(1j * params.a * src[None, :] * dst[:, None], params) * (w * vals)[None, :]
    terms[:, vals == 0] = 0
    if not np.all(np.isfinite(terms)):
        raise OverflowError("fourier_numeric terms overflow on this window")
    out = _row_sums(terms, None) / (2 * theta0(params))
    m = len(x)
    # the two branches pair up at each |z|
    edge = np.maximum(np.abs(terms[:, 0] + terms[:, m]), np.abs(terms[:, m - 1] + terms[:, -1]))
    scale_ = np.maximum(1.0, np.abs(out) * 2 * theta0(params))
    worst = float(np.max(edge / scale_))
    if worst > 1e-6:
        raise NonIntegrableError(f"fourier_numeric: summand edge weight {worst:.3g} at a window end")
    if worst > params.series_tol:
        warnings.warn(f"fourier_numeric: summand edge weight {worst:.3g}", ConvergenceWarning,
                      stacklevel=2)
    n = len(out_window)
    return Skeleton(params, out_window, out[:n], out[n:])


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def c_nu(nu: float, params: QParams) -> complex:
    """``sum_m q^(2 nu m) (q^(-2m) + i(1-q^2)) / ((1-q^2)^-1 q^(-2m) + (1-q^2) q^(2m))``.

    Summed directly for ``0 < nu < 1``, where both tails are geometric.
    """
    nu = float(nu)
    if not 0.0 < nu < 1.0:
        raise OutOfStripError(f"c_nu needs 0 < nu < 1, got {nu}")
    a, q2 = params.a, params.q2

    def term(m):
        m = m.astype(float)[:, None]
        out = np.empty(m.shape, dtype=complex)
        # rescaled per half so that no power of q overflows
        up = m >= 0
        mu = np.where(up, m, 0.0)
        md = np.where(up, 0.0, m)
        pos = q2 ** (nu * mu) * (1 + 1j * a * q2 ** mu) / (1 / a + a * q2 ** (2 * mu))
        neg = q2 ** ((nu - 1) * md) * (q2 ** (-md) + 1j * a) / (q2 ** (-2 * md) / a + a)
        out[:] = np.where(up, pos, neg)
        return out

    return complex(_bilateral(term, params, "c_nu")[0])


def nu_prefactor(nu: float, params: QParams) -> float:
    """``e_q2(q^2) E_q2(-q^(2(1-nu))) / (2 Theta_0)``."""
    q2 = params.q2
    return float(np.real(e_q2(q2, params) * E_q2(-(params.q ** (2 * (1 - nu))), params))
                 / (2 * theta0(params)))


def prop_c2_direct(nu: float, params: QParams, s: float = 1.0) -> complex:
    """Direct lattice sum ``(1-q^2)/(2 Theta_0) sum_m q^(2 nu m) e_q2(i(1-q^2) q^(2m) s)``."""
    if not 0.0 < nu < 1.0:
        raise OutOfStripError(f"needs 0 < nu < 1, got {nu}")
    a, q2 = params.a, params.q2

    def term(m):
        x = q2 ** m.astype(float)
        return (q2 ** (nu * m.astype(float)) * e_q2(1j * a * x * s, params))[:, None]

    return complex(a * _bilateral(term, params, "nu transform")[0] / (2 * theta0(params)))


@dataclass(frozen=True)
class TransformTableEntry:
    source: Distribution
    image: Distribution
    normalization: complex
    source_label: str
    image_label: str
    nu: float | None = None


def fourier_table(f: Distribution, params: QParams) -> TransformTableEntry:
    """Closed-form transform of one of the tabulated distributions."""
    t0 = theta0(params)
    q = params.q
    if isinstance(f, Linear):
        entries = [fourier_table(d, params) for _, d in f.terms]
        image = Linear(tuple((c, e.image) for (c, _), e in zip(f.terms, entries)))
        return TransformTableEntry(f, image, complex("nan"), f.label, image.label)
    if isinstance(f, Delta):
        c = 1 / (2 * t0)
        return TransformTableEntry(f, scale(c, PowInt(0)), c, "delta", "1/(2 Theta0)")
    if isinstance(f, ThetaPlus):
        c = 1j / (2 * t0)
        image = Linear(((c, PowInt(-1)), (1, Delta())))
        return TransformTableEntry(f, image, c, "theta+", "i/(2 Theta0) s^-1 + delta")
    if isinstance(f, ThetaMinus):
        c = -1j / (2 * t0)
        image = Linear(((c, PowInt(-1)), (1, Delta())))
        return TransformTableEntry(f, image, c, "theta-", "-i/(2 Theta0) s^-1 + delta")
    if isinstance(f, SignS):
        c = 1j / t0
        return TransformTableEntry(f, scale(c, PowInt(-1)), c, "sign", "i/Theta0 s^-1")
    if isinstance(f, PowInt):
        if f.n >= 0:
            n = f.n
            c = 2 * 1j ** n * q ** (-n * (n + 1)) * _kfactor(n, params)
            return TransformTableEntry(f, scale(c, PowDelta(n)), c, f"z^n (n={n})",
                                       f"2 i^n q^(-n(n+1)) (q^2;q^2)_n/(1-q^2)^n s^-n delta (n={n})")
        n = -f.n - 1
        c = 1j ** (n + 1) / _kfactor(n, params)
        return TransformTableEntry(f, scale(c, PowSign(n)), c, f"z^(-n-1) (n={n})",
                                   f"i^(n+1) (1-q^2)^n/(q^2;q^2)_n s^n sign s (n={n})")
    if isinstance(f, (PowPlusNu, PowMinusNu)):
        nu = f.nu - f.k + 1
        if not 0.0 < nu < 1.0:
            raise OutOfStripError(f"table rows for z_+-^(nu-1) need 0 < nu < 1, got nu={nu}")
        cn = c_nu(nu, params)
        pre = nu_prefactor(nu, params)
        s_minus, s_plus = PowMinusNu(-nu), PowPlusNu(-nu)
        if isinstance(f, PowPlusNu):
            image = Linear(((pre * cn.conjugate(), s_minus), (pre * cn, s_plus)))
            return TransformTableEntry(f, image, pre * cn, "z_+^(nu-1)",
                                       "K (conj(c_nu) s_-^-nu + c_nu s_+^-nu)", nu)
        # reflection z -> -z maps z_+ to z_- and s to -s
        image = Linear(((pre * cn, s_minus), (pre * cn.conjugate(), s_plus)))
        return TransformTableEntry(f, image, pre * cn, "z_-^(nu-1)",
                                   "K (c_nu s_-^-nu + conj(c_nu) s_+^-nu)", nu)
    raise UnsupportedDistributionError(f"{getattr(f, 'label', type(f).__name__)} is not in the table")


def table_rows(params: QParams, nu: float | None = None, n: int = 1) -> list[TransformTableEntry]:
    """All tabulated rows; the two power rows use the given n, the last two need nu."""
    rows = [fourier_table(d, params) for d in (Delta(), ThetaPlus(), ThetaMinus(),
                                                PowInt(n), PowInt(-n - 1))]
    if nu is not None:
        rows.append(fourier_table(PowPlusNu(nu - 1), params))
        rows.append(fourier_table(PowMinusNu(nu - 1), params))
    return rows


# ---------------------------------------------------------------------------
# Parseval verification
# ---------------------------------------------------------------------------

def _parity_split(psi: Skeleton) -> tuple[Skeleton, Skeleton]:
    even = (psi.pos + psi.neg) / 2
    odd = (psi.pos - psi.neg) / 2
    return (Skeleton(psi.params, psi.window, even, even),
            Skeleton(psi.params, psi.window, odd, -odd))


def parseval_sides(entry: TransformTableEntry, test: Skeleton,
                   route: str = "inverse") -> tuple[complex, complex]:
    """``(<image, psi>, <source, phi>)`` for a test function and its partner.

    ``route='inverse'`` takes ``test`` as ``psi`` on the s-lattice and builds
    ``phi = F^-1 psi`` (separately for the even and odd parts, which keeps
    small-z values accurate).  ``route='forward'`` takes ``test`` as ``phi``
    and builds ``psi = F phi``.
    """
    if route == "inverse":
        psi = test
        lhs = pair(entry.image, psi)
        rhs = 0j
        for part in _parity_split(psi):
            if part.max_abs() == 0:
                continue
            rhs += pair(entry.source, fourier_inverse(part, check=False))
        return lhs, rhs
    if route == "forward":
        phi = test
        psi = fourier_forward(phi)
        return pair(entry.image, psi), pair(entry.source, phi)
    raise ValueError("route must be 'inverse' or 'forward'")


def parseval_check(entry: TransformTableEntry, test: Skeleton, route: str = "inverse") -> float:
    """``|<image, psi> - <source, phi>| / max(1, |<source, phi>|)``."""
    lhs, rhs = parseval_sides(entry, test, route)
    if not (cmath.isfinite(lhs) and cmath.isfinite(rhs)):
        return math.inf
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def delta_is_trustworthy(phi: Skeleton) -> bool:
    """The two deepest averages agree to the delta tolerance."""
    if len(phi.window) < 2:
        raise WindowError("need at least two lattice indices")
    deep = delta_value(phi)
    prev = 0.5 * (complex(phi.pos[-2]) + complex(phi.neg[-2]))
    return abs(deep - prev) <= DELTA_AGREEMENT * max(1.0, abs(deep))
