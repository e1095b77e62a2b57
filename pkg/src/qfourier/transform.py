"""Forward and inverse q^2-Fourier transforms of skeletons.

Both transforms are direct Jackson sums over the input lattice, evaluated at
every point of the same window on the dual side.  Integrand kernels are
normal ordered (z on the left, s on the right), so once z and s are numbers
the forward kernel is ``E_q2(i(1-q^2) q^2 z s)`` and the inverse kernel is
``e_q2(-i(1-q^2) z s)``.

Every output point is an exactly rounded sum (``math.fsum``), so results do
not depend on summation order or on the number of worker threads.
"""
from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceWarning, NonIntegrableError, WindowError
from .lattice import (
    Skeleton,
    Window,
    abs_integrable_check,
    lattice_points,
    q_derivative,
    shift_lambda,
)
from .qcore import E_q2, QParams, e_q2, theta0


class TransformDirection(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def kernel_forward(z, s, params: QParams):
    """Forward kernel ``E_q2(i (1-q^2) q^2 z s)``."""
    return E_q2(1j * params.a * params.q2 * np.multiply(z, s), params)


def kernel_inverse(z, s, params: QParams):
    """Inverse kernel ``e_q2(-i (1-q^2) z s)``; never near a pole for real z, s."""
    return e_q2(-1j * params.a * np.multiply(z, s), params)


def _signed_points(window: Window, params: QParams) -> np.ndarray:
    x = lattice_points(window, params)
    return np.concatenate([x, -x])


def _row_sums(matrix: np.ndarray, workers: int | None) -> np.ndarray:
    def one(i):
        row = matrix[i]
        return complex(math.fsum(row.real), math.fsum(row.imag))

    n = matrix.shape[0]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.array(list(pool.map(one, range(n))), dtype=complex)
    return np.array([one(i) for i in range(n)], dtype=complex)


def _jackson_apply(values: Skeleton, kernel, out_window: Window, workers, scale=1.0) -> Skeleton:
    params = values.params
    src = _signed_points(values.window, params)
    dst = _signed_points(out_window, params)
    x = lattice_points(values.window, params)
    weights = params.a * np.concatenate([x, x])
    f = np.concatenate([values.pos, values.neg])
    with np.errstate(over="ignore", invalid="ignore"):
        K = kernel(src[None, :], dst[:, None], params)
        terms = K * (weights * f)[None, :]
    # zero input entries contribute nothing even where the kernel overflowed
    terms[:, f == 0] = 0
    if not np.all(np.isfinite(terms)):
        raise OverflowError("transform terms overflow double precision on this window")
    out = scale * _row_sums(terms, workers)
    n = len(out_window)
    return Skeleton(params, out_window, out[:n], out[n:])


def _require_integrable(phi: Skeleton, what: str):
    report = abs_integrable_check(phi)
    if not report.integrable:
        raise NonIntegrableError(
            f"{what}: input is not absolutely q^2-integrable on its window "
            f"(edge weights {report.head:.3g}, {report.tail:.3g})"
        )


def fourier_forward(phi: Skeleton, window: Window | None = None, workers: int | None = None,
                    check: bool = True) -> Skeleton:
    """``psi(s) = sum_z (1-q^2)|z| phi(z) E_q2(i(1-q^2) q^2 z s)`` on the dual lattice."""
    if check:
        _require_integrable(phi, "fourier_forward")
    return _jackson_apply(phi, kernel_forward, window or phi.window, workers)


def fourier_inverse(psi: Skeleton, window: Window | None = None, workers: int | None = None,
                    check: bool = True) -> Skeleton:
    """``phi(z) = (1 / 2 Theta_0) sum_s (1-q^2)|s| e_q2(-i(1-q^2) z s) psi(s)``."""
    if check:
        _require_integrable(psi, "fourier_inverse")
    # kernel_inverse is symmetric in its two lattice arguments
    return _jackson_apply(psi, kernel_inverse, window or psi.window, workers,
                          scale=1.0 / (2.0 * theta0(psi.params)))


class OrthogonalityResult(NamedTuple):
    points: np.ndarray  # signed lattice points, positive branch first
    values: np.ndarray  # may hold inf where the truncated sum overflows
    converged: np.ndarray  # both window edges below series_tol

    def at(self, point: float) -> complex:
        i = int(np.argmin(np.abs(self.points - point)))
        return complex(self.values[i])


def _pochhammer_ratio(num, den, params: QParams):
    """``(num; q^2)_inf / (den; q^2)_inf`` as one product of factor ratios."""
    num, den = np.broadcast_arrays(np.asarray(num, dtype=complex), np.asarray(den, dtype=complex))
    q2, tol = params.q2, params.series_tol * 1e-1
    amax = float(max(np.max(np.abs(num)), np.max(np.abs(den))))
    n = int(math.ceil(math.log(tol / amax) / math.log(q2))) + 1 if amax > tol else 0
    out = np.ones(num.shape, dtype=complex)
    logs = np.zeros(num.shape, dtype=complex)
    a, b = num.copy(), den.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            r = (1 - a) / (1 - b)
            out = out * r
            logs = logs + np.log(r)
            a = a * q2
            b = b * q2
    bad = ~np.isfinite(out)
    if np.any(bad):
        with np.errstate(over="ignore"):
            out[bad] = np.exp(logs[bad])
    return out


def orthogonality(n: int, direction: TransformDirection | str, params: QParams,
                  window: Window) -> OrthogonalityResult:
    """Kernel orthogonality sums at every lattice point of ``window``.

    Forward: ``q^(2n) int d_z e_q2(-i(1-q^2) q^(2n) z) E_q2(i(1-q^2) q^2 z s)`` at each s.
    Inverse: ``q^(2n) int d_s e_q2(-i(1-q^2) z s) E_q2(i(1-q^2) q^2 q^(2n) s)`` at each z.
    Both equal ``2 Theta_0 / (1-q^2)`` at the diagonal point ``q^(2n)`` and
    vanish at every point where the sum converges.  Where it does not, the
    truncated sum is returned with ``converged`` False.
    """
    direction = TransformDirection(direction)
    a, q2 = params.a, params.q2
    x = lattice_points(window, params)
    pts = np.concatenate([x, -x])
    w = a * np.concatenate([x, x])
    c = q2 ** n
    # rows: output points, columns: integration points
    if direction is TransformDirection.FORWARD:
        out, var = pts[:, None], pts[None, :]
        ratio = _pochhammer_ratio(-1j * a * q2 * var * out, -1j * a * c * var, params)
    else:
        out, var = pts[:, None], pts[None, :]
        ratio = _pochhammer_ratio(-1j * a * q2 * c * var, -1j * a * out * var, params)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = c * ratio * w[None, :]
    m = len(x)
    # the Jackson sum pairs the two branches at each |point|
    with np.errstate(over="ignore", invalid="ignore"):
        edge = np.abs(terms[:, 0] + terms[:, m]) + np.abs(terms[:, m - 1] + terms[:, -1])
    converged = edge < params.series_tol
    values = np.empty(2 * m, dtype=complex)
    for i in range(2 * m):
        row = terms[i]
        if np.all(np.isfinite(row)):
            values[i] = complex(math.fsum(row.real), math.fsum(row.imag))
        else:
            values[i] = complex(np.inf, np.inf)
    if not np.all(converged):
        warnings.warn(f"orthogonality: {int((~converged).sum())} of {converged.size} sums "
                      "have non-negligible tails", ConvergenceWarning, stacklevel=2)
    return OrthogonalityResult(pts, values, converged)


# ---------------------------------------------------------------------------
# commutation relations
# ---------------------------------------------------------------------------

RELATIONS = ("lambda", "dz", "z", "inv_lambda", "inv_ds", "inv_s")


def _common(a: Skeleton, b: Skeleton):
    w = a.window.intersect(b.window)
    return a.restrict(w), b.restrict(w)


def relation_sides(phi: Skeleton, relation: str) -> tuple[Skeleton, Skeleton]:
    """Both sides of one commutation relation on their common window.

    Forward relations take ``phi`` on the z-lattice, inverse ones take it as a
    function on the s-lattice.
    """
    q2 = phi.params.q2
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}; expected one of {RELATIONS}")
    if len(phi.window) < 4:
        raise WindowError("window too small for a commutation check")
    fw = lambda f: fourier_forward(f, check=False)  # noqa: E731
    iv = lambda f: fourier_inverse(f, check=False)  # noqa: E731
    if relation == "lambda":
        lhs = fw(shift_lambda(phi, 1))
        rhs = shift_lambda(fw(phi), -1) * (1 / q2)
    elif relation == "dz":
        lhs = fw(q_derivative(phi, 1))
        rhs = fw(phi).times_coordinate() * -1j
    elif relation == "z":
        lhs = fw(phi.times_coordinate())
        rhs = shift_lambda(q_derivative(fw(phi), 1), -1) * (-1j / q2)
    elif relation == "inv_lambda":
        lhs = iv(shift_lambda(phi, 1))
        rhs = shift_lambda(iv(phi), -1) * (1 / q2)
    elif relation == "inv_ds":
        lhs = iv(q_derivative(phi, 1))
        rhs = shift_lambda(iv(phi).times_coordinate(), -1) * 1j
    else:  # inv_s
        lhs = iv(phi.times_coordinate())
        rhs = q_derivative(iv(phi), 1) * 1j
    return _common(lhs, rhs)


def relative_residual(lhs: Skeleton, rhs: Skeleton, floor: float = 0.0) -> float:
    """``max |lhs - rhs| / max(max |lhs|, max |rhs|, floor)`` over the whole window."""
    a = np.concatenate([lhs.pos, lhs.neg])
    b = np.concatenate([rhs.pos, rhs.neg])
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), floor)
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(a - b))) / scale


def commutation_check(phi: Skeleton, relation: str, floor: float = 0.0) -> float:
    """Scaled max-norm residual of one commutation relation."""
    lhs, rhs = relation_sides(phi, relation)
    return relative_residual(lhs, rhs, floor)
