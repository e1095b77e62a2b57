"""Skeletons: functions restricted to the two-sided lattice {+-q^(2m)}.

A :class:`Skeleton` stores ``pos[m] = f(q^(2m))`` and ``neg[m] = f(-q^(2m))``
for ``m_min <= m <= m_max``.  Small ``m`` are large lattice points; large ``m``
approach the origin.  Operations that need neighbouring values shrink the
window rather than pad it.
"""
from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConvergenceWarning, NonConvergentError, WindowError
from .qcore import QParams, qpoch_finite


@dataclass(frozen=True)
class Window:
    m_min: int
    m_max: int

    def __post_init__(self):
        if int(self.m_min) != self.m_min or int(self.m_max) != self.m_max:
            raise WindowError("window bounds must be integers")
        if self.m_min > self.m_max:
            raise WindowError(f"empty window [{self.m_min}, {self.m_max}]")
        object.__setattr__(self, "m_min", int(self.m_min))
        object.__setattr__(self, "m_max", int(self.m_max))

    def __len__(self):
        return self.m_max - self.m_min + 1

    def __contains__(self, m):
        return self.m_min <= m <= self.m_max

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.m_min, self.m_max + 1)

    def intersect(self, other: "Window") -> "Window":
        return Window(max(self.m_min, other.m_min), min(self.m_max, other.m_max))

    def shrink(self, lo: int = 0, hi: int = 0) -> "Window":
        """Drop ``lo`` indices from the large-point end and ``hi`` from the small-point end."""
        return Window(self.m_min + lo, self.m_max - hi)

    def grow(self, n: int) -> "Window":
        return Window(self.m_min - n, self.m_max + n)


def default_window(params: QParams) -> Window:
    """Window covering roughly ``2^-96 <= |z| <= 2^48`` whatever ``q`` is.

    At ``q = 0.5`` this is exactly ``[-24, 48]``.
    """
    step = -2.0 * math.log(params.q)
    lo = math.ceil(48 * math.log(2) / step - 1e-9)
    hi = math.ceil(96 * math.log(2) / step - 1e-9)
    return Window(-lo, hi)


def lattice_points(window: Window, params: QParams) -> np.ndarray:
    """Positive lattice points ``q^(2m)`` over the window."""
    return params.q2 ** window.indices.astype(float)


@dataclass(frozen=True, eq=False)
class Skeleton:
    params: QParams
    window: Window
    pos: np.ndarray
    neg: np.ndarray

    def __post_init__(self):
        pos = np.array(self.pos, dtype=complex)
        neg = np.array(self.neg, dtype=complex)
        n = len(self.window)
        if pos.shape != (n,) or neg.shape != (n,):
            raise WindowError(f"pos/neg must both have length {n}, got {pos.shape} and {neg.shape}")
        if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(neg))):
            raise ValueError("skeleton entries must be finite")
        pos.flags.writeable = False
        neg.flags.writeable = False
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)

    @property
    def points(self) -> np.ndarray:
        return lattice_points(self.window, self.params)

    def value(self, m: int, sign: int = 1) -> complex:
        if m not in self.window:
            raise WindowError(f"index {m} outside window [{self.window.m_min}, {self.window.m_max}]")
        arr = self.pos if sign > 0 else self.neg
        return complex(arr[m - self.window.m_min])

    def restrict(self, window: Window) -> "Skeleton":
        if window.m_min < self.window.m_min or window.m_max > self.window.m_max:
            raise WindowError("restriction must lie inside the current window")
        i, j = window.m_min - self.window.m_min, window.m_max - self.window.m_min + 1
        return Skeleton(self.params, window, self.pos[i:j], self.neg[i:j])

    def map_values(self, fn) -> "Skeleton":
        return Skeleton(self.params, self.window, fn(self.pos), fn(self.neg))

    def times_coordinate(self, power: int = 1) -> "Skeleton":
        """Multiply by ``z**power`` pointwise."""
        x = self.points ** power
        return Skeleton(self.params, self.window, self.pos * x, self.neg * (-1) ** power * x)

    def conj(self) -> "Skeleton":
        return self.map_values(np.conj)

    def _check_compatible(self, other: "Skeleton"):
        if other.params != self.params:
            raise ValueError("skeletons carry different QParams")
        if other.window != self.window:
            raise WindowError("skeletons live on different windows")

    def __add__(self, other):
        if not isinstance(other, Skeleton):
            return NotImplemented
        self._check_compatible(other)
        return Skeleton(self.params, self.window, self.pos + other.pos, self.neg + other.neg)

    def __sub__(self, other):
        if not isinstance(other, Skeleton):
            return NotImplemented
        self._check_compatible(other)
        return Skeleton(self.params, self.window, self.pos - other.pos, self.neg - other.neg)

    def __mul__(self, c):
        if isinstance(c, Skeleton):
            self._check_compatible(c)
            return Skeleton(self.params, self.window, self.pos * c.pos, self.neg * c.neg)
        return Skeleton(self.params, self.window, self.pos * c, self.neg * c)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(self.pos)), np.max(np.abs(self.neg))))

    # JSON interchange -----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "q": self.params.q,
            "m_min": self.window.m_min,
            "m_max": self.window.m_max,
            "pos": [[float(v.real), float(v.imag)] for v in self.pos],
            "neg": [[float(v.real), float(v.imag)] for v in self.neg],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str, params: QParams | None = None) -> "Skeleton":
        doc = json.loads(text)
        try:
            q = float(doc["q"])
            window = Window(doc["m_min"], doc["m_max"])
            pos = [complex(re, im) for re, im in doc["pos"]]
            neg = [complex(re, im) for re, im in doc["neg"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed skeleton document: {exc}") from exc
        if params is None:
            params = QParams(q)
        elif params.q != q:
            raise ValueError(f"skeleton file has q={q}, expected q={params.q}")
        return cls(params, window, pos, neg)


def skeletons_close(a: Skeleton, b: Skeleton, rtol: float) -> bool:
    """Max-norm comparison scaled by the larger skeleton's own magnitude."""
    scale = max(a.max_abs(), b.max_abs())
    diff = max(np.max(np.abs(a.pos - b.pos)), np.max(np.abs(a.neg - b.neg)))
    return diff <= rtol * scale


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def sample(f: Callable, window: Window, params: QParams) -> Skeleton:
    """Evaluate ``f`` at every lattice point ``+-q^(2m)`` of the window."""
    x = lattice_points(window, params)
    pos = np.empty(len(window), dtype=complex)
    neg = np.empty(len(window), dtype=complex)
    for i, xi in enumerate(x):
        for arr, pt in ((pos, xi), (neg, -xi)):
            try:
                arr[i] = f(pt)
            except Exception as exc:
                raise ValueError(f"evaluation failed at lattice point {pt!r} "
                                 f"(m={window.m_min + i}): {exc}") from exc
    return Skeleton(params, window, pos, neg)


def basis(n: int, sign: int, window: Window, params: QParams) -> Skeleton:
    """Indicator of the single lattice point ``sign * q^(2n)``."""
    if n not in window:
        raise WindowError(f"basis index {n} outside window [{window.m_min}, {window.m_max}]")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pos = np.zeros(len(window), dtype=complex)
    neg = np.zeros(len(window), dtype=complex)
    (pos if sign > 0 else neg)[n - window.m_min] = 1.0
    return Skeleton(params, window, pos, neg)


def zeros(window: Window, params: QParams) -> Skeleton:
    n = len(window)
    return Skeleton(params, window, np.zeros(n), np.zeros(n))


# ---------------------------------------------------------------------------
# calculus on the lattice
# ---------------------------------------------------------------------------

def shift_lambda(phi: Skeleton, k: int = 1) -> Skeleton:
    """``(Lambda^k phi)(z) = phi(q^(2k) z)``; the window is intersected with the input's."""
    src = phi.window
    lo, hi = src.m_min - k, src.m_max - k
    lo, hi = max(lo, src.m_min), min(hi, src.m_max)
    if lo > hi:
        raise WindowError(f"shift by {k} leaves an empty window")
    target = Window(lo, hi)
    i = lo + k - src.m_min
    j = hi + k - src.m_min + 1
    return Skeleton(phi.params, target, phi.pos[i:j], phi.neg[i:j])


def q_derivative(phi: Skeleton, k: int = 1) -> Skeleton:
    """Apply ``(f(z) - f(q^2 z)) / ((1 - q^2) z)`` k times.

    Each application consumes one index at the small-point end.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if len(phi.window) <= k:
        raise WindowError(f"window of {len(phi.window)} points is too small for {k} derivatives")
    a = phi.params.a
    out = phi
    for _ in range(k):
        w = out.window.shrink(hi=1)
        x = lattice_points(w, phi.params)
        pos = (out.pos[:-1] - out.pos[1:]) / (a * x)
        neg = (out.neg[:-1] - out.neg[1:]) / (-a * x)
        out = Skeleton(phi.params, w, pos, neg)
    return out


class TailInfo(NamedTuple):
    converged: bool
    head: float  # |q^(2m) f| at the large-point end
    tail: float  # |q^(2m) f| at the small-point end


def _tails(phi: Skeleton) -> TailInfo:
    x = phi.points
    head = float(x[0] * (abs(phi.pos[0]) + abs(phi.neg[0])))
    tail = float(x[-1] * (abs(phi.pos[-1]) + abs(phi.neg[-1])))
    tol = phi.params.series_tol
    return TailInfo(head < tol and tail < tol, head, tail)


def jackson_integral(phi: Skeleton, full_output: bool = False):
    """Bilateral Jackson integral ``(1-q^2) sum q^(2m) [f(q^(2m)) + f(-q^(2m))]``.

    A :class:`ConvergenceWarning` is issued when either window edge still
    carries weight above ``series_tol``; ``full_output=True`` also returns
    the :class:`TailInfo`.
    """
    x = phi.points
    terms = x * (phi.pos + phi.neg)
    value = phi.params.a * complex(_fsum_complex(terms))
    info = _tails(phi)
    if not info.converged:
        warnings.warn(f"Jackson sum tails not negligible (head={info.head:.3g}, tail={info.tail:.3g})",
                      ConvergenceWarning, stacklevel=2)
    if full_output:
        return value, info
    return value


def _fsum_complex(values) -> complex:
    values = np.asarray(values)
    return complex(math.fsum(values.real), math.fsum(values.imag))


def finite_q_integral(f: Callable, a: float, b: float, params: QParams) -> complex:
    """``(1-q^2) sum_{m>=0} q^(2m) [b f(b q^(2m)) - a f(a q^(2m))]``."""
    q2, tol = params.q2, params.series_tol
    max_terms = 10 * params.lattice_depth
    terms = []
    quiet = 0
    for m in range(max_terms):
        w = q2 ** m
        t = 0j
        try:
            if b != 0:
                t += b * w * complex(f(b * w))
            if a != 0:
                t -= a * w * complex(f(a * w))
        except (OverflowError, ZeroDivisionError) as exc:
            raise NonConvergentError(f"q-integral over [{a}, {b}] diverges near 0: {exc}") from exc
        if not cmath.isfinite(t):
            raise NonConvergentError(f"q-integral over [{a}, {b}] diverges near 0")
        terms.append(t)
        quiet = quiet + 1 if abs(t) < tol else 0
        # two consecutive negligible terms, and the remaining geometric weight is small
        if quiet >= 2 and max(abs(a), abs(b)) * w / (1 - q2) < 1:
            return params.a * _fsum_complex(terms)
    raise NonConvergentError(f"q-integral over [{a}, {b}] did not converge within {max_terms} terms")


class IntegrabilityReport(NamedTuple):
    integrable: bool
    total: float
    head: float
    tail: float


def abs_integrable_check(phi: Skeleton) -> IntegrabilityReport:
    """Whether ``sum q^(2m) (|f(q^(2m))| + |f(-q^(2m))|)`` passes the window tail test."""
    x = phi.points
    total = float(np.sum(x * (np.abs(phi.pos) + np.abs(phi.neg))))
    info = _tails(phi)
    return IntegrabilityReport(info.converged and math.isfinite(total), total, info.head, info.tail)


def seminorm(phi: Skeleton, k: int, l: int) -> float:
    """``max |z^k (d_z^l phi)(z)|`` over the window left after ``l`` derivatives."""
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    d = q_derivative(phi, l)
    x = d.points ** k
    vals = np.concatenate([np.abs(d.pos) * x, np.abs(d.neg) * x])
    return float(np.max(vals))


def delta_value(phi: Skeleton) -> complex:
    """Value at the origin: the average of the two deepest lattice values."""
    return 0.5 * (complex(phi.pos[-1]) + complex(phi.neg[-1]))


def power_rule_coefficient(n: int, k: int, q: float) -> float:
    """Coefficient ``c`` with ``d_z^k z^n = c z^(n-k)``, for either sign of ``n``."""
    q2 = q * q
    if n >= 0:
        if k > n:
            return 0.0
        return float(qpoch_finite(q2, q2, n) / (qpoch_finite(q2, q2, n - k) * (1 - q2) ** k))
    m = -n - 1
    return float((-1) ** k * q ** (-k * (2 * m + k + 1)) * qpoch_finite(q2, q2, m + k)
                 / (qpoch_finite(q2, q2, m) * (1 - q2) ** k))
