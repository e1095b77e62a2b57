"""Exact arithmetic in the algebra generated by z, s with ``z s = q^2 s z``.

Elements are stored in normal order: a finite sum of monomials ``z^a s^b``
with every z-power left of every s-power.  Coefficients are exact elements of
the rational function field Q(i)(q, a); the symbol ``a`` is a free scalar used
by the kernel identities.  Nothing here touches floating point.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import sympy
from sympy import QQ_I, field

FIELD, Q, A = field("q,a", QQ_I)
I = FIELD(QQ_I(0, 1))
ONE = FIELD.one
ZERO = FIELD.zero

Coeff = type(ONE)


def coeff(value) -> Coeff:
    """Coerce an int, Fraction-like rational, sympy expression or field element."""
    if isinstance(value, Coeff):
        return value
    if isinstance(value, complex):
        raise TypeError("floating-point coefficients are not exact")
    if isinstance(value, int):
        return FIELD(value)
    return FIELD.from_expr(sympy.sympify(value))


def q_number(n: int) -> Coeff:
    """``[n] = (1 - q^(2n)) / (1 - q^2)``, valid for negative n too."""
    return (1 - Q ** (2 * n)) / (1 - Q ** 2)


def q2_pochhammer(n: int) -> Coeff:
    """``(q^2; q^2)_n`` for n >= 0."""
    out = ONE
    for k in range(1, n + 1):
        out *= 1 - Q ** (2 * k)
    return out


def to_complex(c: Coeff, q: float, a: complex = 1.0) -> complex:
    """Numeric value of an exact coefficient at given q and a."""
    expr = c.as_expr()
    return complex(expr.subs({sympy.Symbol("q"): q, sympy.Symbol("a"): a}).evalf(30))


class NCLaurent:
    """Normal-ordered Laurent polynomial ``sum c_ab z^a s^b``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (za, sb), c in (terms or {}).items():
            c = coeff(c)
            if c != 0:
                clean[(int(za), int(sb))] = c
        self._terms = clean

    @classmethod
    def monomial(cls, za: int, sb: int, c=1) -> "NCLaurent":
        return cls({(za, sb): c})

    @classmethod
    def scalar(cls, c) -> "NCLaurent":
        return cls({(0, 0): c})

    @property
    def terms(self) -> dict[tuple[int, int], Coeff]:
        return dict(self._terms)

    def coefficient(self, za: int, sb: int) -> Coeff:
        return self._terms.get((za, sb), ZERO)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, NCLaurent):
            other = NCLaurent.scalar(other)
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "NCLaurent(0)"
        parts = [f"({c.as_expr()})*z^{za}*s^{sb}" for (za, sb), c in sorted(self._terms.items())]
        return "NCLaurent(" + " + ".join(parts) + ")"

    def __add__(self, other):
        if not isinstance(other, NCLaurent):
            other = NCLaurent.scalar(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, ZERO) + c
        return NCLaurent(out)

    __radd__ = __add__

    def __neg__(self):
        return NCLaurent({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, NCLaurent) else NCLaurent.scalar(-coeff(other)))

    def __mul__(self, other):
        if isinstance(other, NCLaurent):
            return nc_mul(self, other)
        c = coeff(other)
        return NCLaurent({k: v * c for k, v in self._terms.items()})

    def __rmul__(self, other):
        # scalars are central
        return self * other

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials; use inverse()")
        out = NCLaurent.scalar(1)
        for _ in range(n):
            out = nc_mul(out, self)
        return out

    def inverse(self) -> "NCLaurent":
        """Inverse of a single monomial ``c z^a s^b``."""
        if len(self._terms) != 1:
            raise ValueError("only monomials are invertible here")
        (za, sb), c = next(iter(self._terms.items()))
        # (z^a s^b)^{-1} = s^{-b} z^{-a} = q^{-2ab} z^{-a} s^{-b}
        return NCLaurent({(-za, -sb): Q ** (-2 * za * sb) / c})

    def truncate(self, order: int) -> "NCLaurent":
        """Keep monomials whose s-power is at most ``order``."""
        return NCLaurent({k: c for k, c in self._terms.items() if k[1] <= order})

    def evaluate(self, z: complex, s: complex, q: float, a: complex = 1.0) -> complex:
        """Substitute commuting numbers for z and s (the normal-ordered reading)."""
        return sum(to_complex(c, q, a) * z ** za * s ** sb for (za, sb), c in self._terms.items())


Z = NCLaurent.monomial(1, 0)
S = NCLaurent.monomial(0, 1)


def nc_mul(x: NCLaurent, y: NCLaurent) -> NCLaurent:
    """Product, re-ordered with ``s^b z^c = q^(-2bc) z^c s^b``."""
    out: dict[tuple[int, int], Coeff] = {}
    for (a1, b1), c1 in x.terms.items():
        for (a2, b2), c2 in y.terms.items():
            k = (a1 + a2, b1 + b2)
            out[k] = out.get(k, ZERO) + c1 * c2 * Q ** (-2 * b1 * a2)
    return NCLaurent(out)


def nc_apply_dz(x: NCLaurent) -> NCLaurent:
    """q^2-derivative in z acting on the (leftmost) z-powers."""
    out: dict[tuple[int, int], Coeff] = {}
    for (za, sb), c in x.terms.items():
        if za != 0:
            out[(za - 1, sb)] = c * q_number(za)
    return NCLaurent(out)


DS_CONVENTIONS = ("left", "right")


def nc_apply_ds(x: NCLaurent, convention: str = "left") -> NCLaurent:
    """q^2-derivative in s.

    ``convention='left'`` places ``s^-1`` left of the difference, so ``d_s``
    picks up ``q^(2a)`` when it passes ``z^a`` (``d_s z = q^2 z d_s``).
    ``convention='right'`` places ``s^-1`` on the right and treats the z-part
    of a normal-ordered monomial as a left coefficient; this is the reading
    under which the transform kernels obey their difference equations.
    """
    if convention not in DS_CONVENTIONS:
        raise ValueError(f"convention must be one of {DS_CONVENTIONS}")
    out: dict[tuple[int, int], Coeff] = {}
    for (za, sb), c in x.terms.items():
        if sb != 0:
            factor = Q ** (2 * za) if convention == "left" else ONE
            out[(za, sb - 1)] = c * factor * q_number(sb)
    return NCLaurent(out)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def e_coefficients(order: int) -> list[Coeff]:
    """Taylor coefficients ``1/(q^2;q^2)_n`` of e_q2."""
    return [1 / q2_pochhammer(n) for n in range(order + 1)]


def E_coefficients(order: int) -> list[Coeff]:
    """Taylor coefficients ``q^(n(n-1))/(q^2;q^2)_n`` of E_q2."""
    return [Q ** (n * (n - 1)) / q2_pochhammer(n) for n in range(order + 1)]


def phi01_coefficients(order: int) -> list[Coeff]:
    """Taylor coefficients ``q^(2n(n-1))/(q^2;q^2)_n`` of 0Phi1(-;0;q^2,.)."""
    return [Q ** (2 * n * (n - 1)) / q2_pochhammer(n) for n in range(order + 1)]


def normal_order_series(g: Iterable, c=1) -> NCLaurent:
    """``sum_r g_r c^r z^r s^r``: the series g with every z moved left."""
    c = coeff(c)
    return NCLaurent({(r, r): coeff(gr) * c ** r for r, gr in enumerate(g)})


def series_in_zs(g: Iterable, c=1) -> NCLaurent:
    """``sum_r g_r c^r (zs)^r`` with the noncommutative powers expanded."""
    c = coeff(c)
    zs = nc_mul(Z, S)
    out = NCLaurent()
    power = NCLaurent.scalar(1)
    for r, gr in enumerate(g):
        if r:
            power = nc_mul(power, zs)
        out = out + power * (coeff(gr) * c ** r)
    return out


# ---------------------------------------------------------------------------
# identity checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCheck:
    name: str
    holds: bool
    required: bool = True
    # first mismatching monomial with both exact coefficients
    mismatch: tuple[tuple[int, int], Coeff, Coeff] | None = None

    def describe(self) -> str:
        if self.holds:
            return f"{self.name}: exact"
        (za, sb), lhs, rhs = self.mismatch
        return (f"{self.name}: mismatch at z^{za} s^{sb}: "
                f"{lhs.as_expr()} != {rhs.as_expr()}")


@dataclass(frozen=True)
class KernelReport:
    order: int
    ds_convention: str
    checks: tuple[IdentityCheck, ...]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks if c.required)

    def __getitem__(self, name: str) -> IdentityCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def compare(name: str, lhs: NCLaurent, rhs: NCLaurent, required: bool = True) -> IdentityCheck:
    keys = sorted(set(lhs.terms) | set(rhs.terms), key=lambda k: (k[1], k[0]))
    for k in keys:
        left, right = lhs.coefficient(*k), rhs.coefficient(*k)
        if left != right:
            return IdentityCheck(name, False, required, (k, left, right))
    return IdentityCheck(name, True, required)


def check_kernel_identities(N: int = 12, ds_convention: str = "right") -> KernelReport:
    """Exact coefficientwise check of the transform-kernel identities to order N.

    * ``0Phi1(c (zs)) = ‡E_q2(c zs)‡`` with ``c = i(1-q^2)q^2``;
    * ``E_q2(-i(1-q^2)(zs)) = ‡e_q2(-i(1-q^2) zs)‡`` (and, as a non-required
      entry, the variant with ``+i`` inside the normal-ordered side);
    * the four difference equations of ``‡E_q2((1-q^2) a zs)‡`` and
      ``‡e_q2((1-q^2) a zs)‡`` under ``d_z`` and ``d_s``.
    """
    if N < 2:
        raise ValueError("truncation order must be at least 2")
    b = 1 - Q ** 2
    checks = []

    c_fwd = I * b * Q ** 2
    checks.append(compare("phi01_normal_order",
                          series_in_zs(phi01_coefficients(N), c_fwd),
                          normal_order_series(E_coefficients(N), c_fwd)))
    c_inv = -I * b
    big = series_in_zs(E_coefficients(N), c_inv)
    checks.append(compare("E_normal_order", big, normal_order_series(e_coefficients(N), c_inv)))
    checks.append(compare("E_normal_order_plus_i", big,
                          normal_order_series(e_coefficients(N), -c_inv), required=False))

    lower = N - 1
    for label, coeffs in (("E", E_coefficients), ("e", e_coefficients)):
        kern = normal_order_series(coeffs(N), b * A)
        # E shifts its argument by q^2 under both derivatives; e does not
        shifted = normal_order_series(coeffs(lower), b * A * (Q ** 2 if label == "E" else 1))
        lhs = nc_apply_dz(kern).truncate(lower + 1)
        rhs = nc_mul(shifted * A, S)
        checks.append(compare(f"dz_{label}", lhs, rhs))
        lhs = nc_apply_ds(kern, ds_convention).truncate(lower)
        rhs = nc_mul(Z * A, shifted)
        checks.append(compare(f"ds_{label}", lhs, rhs))
    return KernelReport(N, ds_convention, tuple(checks))


def zs_power_check(n: int) -> IdentityCheck:
    """``(zs)^n = q^(-n(n-1)) z^n s^n``."""
    lhs = nc_mul(Z, S) ** n
    rhs = NCLaurent.monomial(n, n, Q ** (-n * (n - 1)))
    return compare(f"zs_power_{n}", lhs, rhs)


def relation_checks(monomials: Iterable[tuple[int, int]],
                    ds_convention: str = "left") -> tuple[IdentityCheck, ...]:
    """The four defining relations of the algebra as operator identities on monomials.

    ``zs = q^2 sz``, ``d_z s = q^-2 s d_z``, ``d_s z = q^2 z d_s`` and
    ``d_z d_s = q^2 d_s d_z``.
    """
    dz = nc_apply_dz

    def ds(x):
        return nc_apply_ds(x, ds_convention)

    lhs = {k: [] for k in ("zs", "dz_s", "ds_z", "dz_ds")}
    rhs = {k: [] for k in lhs}
    for za, sb in monomials:
        x = NCLaurent.monomial(za, sb)
        lhs["zs"].append(Z * S * x)
        rhs["zs"].append(S * Z * x * Q ** 2)
        lhs["dz_s"].append(dz(S * x))
        rhs["dz_s"].append(S * dz(x) * Q ** -2)
        lhs["ds_z"].append(ds(Z * x))
        rhs["ds_z"].append(Z * ds(x) * Q ** 2)
        lhs["dz_ds"].append(dz(ds(x)))
        rhs["dz_ds"].append(ds(dz(x)) * Q ** 2)
    out = []
    for k in lhs:
        res = [compare(k, left, right) for left, right in zip(lhs[k], rhs[k])]
        bad = [r for r in res if not r.holds]
        out.append(bad[0] if bad else IdentityCheck(k, True))
    return tuple(out)


def associativity_check(monomials: Iterable[tuple[int, int]]) -> bool:
    """``(xy)w = x(yw)`` for every ordered triple of the given monomials."""
    mons = [NCLaurent.monomial(a, b) for a, b in monomials]
    return all(nc_mul(nc_mul(x, y), w) == nc_mul(x, nc_mul(y, w))
               for x, y, w in itertools.product(mons, repeat=3))
