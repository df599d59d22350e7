"""Physical parameters, channels, and the closed-form bound spectrum.

Units are Hartree atomic units with the velocity of light c kept explicit,
so rest energy is c^2 and the coupling is zeta = Z/c. A channel is fixed by
the total angular momentum j and the parity label eps = +-1 (eps = +1 when
the upper component has l = j + 1/2, eps = -1 when l = j - 1/2); its radial
quantum number is tau = eps (j + 1/2) and the defect exponent is the positive
root s of s^2 = tau^2 - zeta^2.

The discrete spectrum in channel (j, eps) is

    E_n = c^2 [1 + zeta^2 / (s + n)^2]^(-1/2),   n = 0, 1, 2, ...

degenerate in the sign of eps at fixed N = j + 1/2 + n. The bottom rung n = 0
solves the coupled first-order system only when tau < 0; the n = 0 entry of a
tau > 0 channel is an algebraic artifact carried by the representation theory
but absent from the physical spectrum, and is flagged as such downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp
from mpmath.libmp import prec_to_dps

from .qsfield import QsNumber, Rational, _frac, embed_fraction

DEFAULT_PRECISION = 256
_GUARD = 32

SCHEMA_TAG = "dirac-su11/1"

Z_MIN, Z_MAX = 1, 118  # xi = j(j+1) - zeta^2 stays positive at j = 1/2


class DomainError(ValueError):
    """Raised for parameter values outside the physical domain."""


@dataclass(frozen=True, slots=True)
class PhysicalParams:
    """Speed of light and nuclear charge, both exact."""

    c: Fraction
    Z: int

    @property
    def zeta(self) -> Fraction:
        return Fraction(self.Z) / self.c

    @property
    def c2(self) -> Fraction:
        return self.c * self.c

    def c2_mp(self, precision: int = DEFAULT_PRECISION) -> mp.mpf:
        return embed_fraction(self.c2, precision)


def make_params(c: Rational | str = "137.035999084", Z: int = 1) -> PhysicalParams:
    c = _frac(c)
    if c <= 0:
        raise DomainError("c must be positive")
    if not isinstance(Z, int) or not (Z_MIN <= Z <= Z_MAX):
        raise DomainError(f"Z must be an integer in [{Z_MIN}, {Z_MAX}]")
    return PhysicalParams(c, Z)


@dataclass(frozen=True, slots=True)
class Channel:
    """A (j, eps) relativistic channel with its exact derived constants."""

    params: PhysicalParams
    j: Fraction
    eps: int
    tau: Fraction
    s2: Fraction
    xi: Fraction

    @property
    def s(self) -> QsNumber:
        return QsNumber.s_root(self.s2)

    @property
    def lam(self) -> QsNumber:
        """lambda = s + 1/2, the Bargmann index of the discrete series."""
        return QsNumber.of(Fraction(1, 2), 1, s2=self.s2)

    @property
    def zeta(self) -> Fraction:
        return self.params.zeta

    def qs(self, a: Rational, b: Rational = 0) -> QsNumber:
        return QsNumber.of(a, b, s2=self.s2)

    def key(self) -> tuple:
        return (self.params.c, self.params.Z, self.j, self.eps)

    def __str__(self) -> str:
        return f"channel(j={self.j}, eps={self.eps:+d}, Z={self.params.Z})"


def make_channel(params: PhysicalParams, j: Rational | str, eps: int) -> Channel:
    j = _frac(j)
    if j.denominator != 2 or j.numerator < 1:
        raise DomainError("j must be a positive half-odd-integer (denominator 2)")
    if eps not in (-1, 1):
        raise DomainError("eps must be +1 or -1")
    tau = eps * (j + Fraction(1, 2))
    zeta = params.zeta
    s2 = tau * tau - zeta * zeta
    if s2 <= 0:
        raise DomainError("tau^2 - zeta^2 <= 0: channel collapses at this coupling")
    xi = j * (j + 1) - zeta * zeta
    # xi = lambda(lambda - 1) = s^2 - 1/4, by construction
    assert xi == s2 - Fraction(1, 4)
    return Channel(params, j, eps, tau, s2, xi)


@dataclass(frozen=True, slots=True)
class SpectralPoint:
    """One bound level: exact mode data plus embedded energy quantities."""

    channel: Channel
    n: int
    precision: int
    mu: QsNumber          # lambda + n, exact
    N: int                # principal quantum number j + 1/2 + n
    E: mp.mpf
    k: mp.mpf             # sqrt(c^4 - E^2)
    nu: mp.mpf            # sqrt((c^2 - E) / (c^2 + E))
    binding: mp.mpf       # E - c^2, computed cancellation-free
    eps_j: mp.mpf         # quantum defect j + 1/2 - s

    @property
    def is_physical(self) -> bool:
        """The n = 0 rung of a tau > 0 channel solves no radial problem."""
        return not (self.n == 0 and self.channel.tau > 0)

    @property
    def w2(self) -> QsNumber:
        """w^2 = (s + n)^2 + zeta^2 = tau^2 + n^2 + 2 n s, exact in Q(s)."""
        ch = self.channel
        return ch.qs(ch.tau * ch.tau + self.n * self.n, 2 * self.n)


def spectral_point(
    channel: Channel, n: int, precision: int = DEFAULT_PRECISION
) -> SpectralPoint:
    if not isinstance(n, int) or n < 0:
        raise DomainError("n must be a nonnegative integer")
    ch = channel
    mu = ch.lam + n
    N = int(ch.j + Fraction(1, 2)) + n

    with mp.workprec(precision + _GUARD):
        c2 = embed_fraction(ch.params.c2, precision + _GUARD)
        zeta = embed_fraction(ch.zeta, precision + _GUARD)
        sn = ch.s.embed(precision + _GUARD) + n
        w = mp.sqrt(sn * sn + zeta * zeta)
        E = c2 * sn / w
        k = c2 * zeta / w
        nu = k / (c2 + E)
        binding = -c2 * zeta * zeta / (w * (sn + w))
        eps_j = embed_fraction(ch.j + Fraction(1, 2), precision + _GUARD) - (sn - n)
    with mp.workprec(precision):
        E, k, nu, binding, eps_j = +E, +k, +nu, +binding, +eps_j

    point = SpectralPoint(ch, n, precision, mu, N, E, k, nu, binding, eps_j)
    _check_point(point)
    return point


def _check_point(p: SpectralPoint) -> None:
    c2 = p.channel.params.c2
    if not (0 < p.E < embed_fraction(c2, p.precision)):
        raise AssertionError("bound-state energy left (0, c^2)")
    # representation bound 2 mu^2 >= xi, strict for bound modes
    gap = 2 * p.mu * p.mu - p.channel.qs(p.channel.xi)
    if gap.sign() <= 0:
        raise AssertionError("representation bound 2 mu^2 >= xi violated")


def mu_from_energy(
    params: PhysicalParams, E: mp.mpf, precision: int = DEFAULT_PRECISION
) -> mp.mpf:
    """Invert the energy formula: mu = zeta E / sqrt(c^4 - E^2) + 1/2."""
    with mp.workprec(precision + _GUARD):
        c2 = embed_fraction(params.c2, precision + _GUARD)
        E = mp.mpf(E)
        if not (0 < E < c2):
            raise DomainError("energy must lie strictly between 0 and c^2")
        zeta = embed_fraction(params.zeta, precision + _GUARD)
        out = zeta * E / mp.sqrt((c2 - E) * (c2 + E)) + mp.mpf(1) / 2
    with mp.workprec(precision):
        return +out


# -- nonrelativistic limit ---------------------------------------------------


@dataclass(frozen=True, slots=True)
class LimitRow:
    c: Fraction
    binding: mp.mpf
    bohr: mp.mpf
    difference: mp.mpf


@dataclass(frozen=True, slots=True)
class LimitTable:
    rows: tuple
    fitted_exponent: mp.mpf


def nonrelativistic_limit_table(
    j: Rational | str,
    eps: int,
    n: int,
    c_schedule: Sequence[Rational | str] = ("1e2", "1e3", "1e4"),
    Z: int = 1,
    precision: int = DEFAULT_PRECISION,
) -> LimitTable:
    """Binding energies against the Bohr value -Z^2/(2 N^2) along a c schedule.

    The difference is O(c^-2); the returned exponent is the least-squares
    slope of log |difference| against log c.
    """
    rows = []
    xs, ys = [], []
    with mp.workprec(precision + _GUARD):
        for c in c_schedule:
            params = make_params(c, Z)
            ch = make_channel(params, j, eps)
            pt = spectral_point(ch, n, precision)
            bohr = -mp.mpf(Z) ** 2 / (2 * mp.mpf(pt.N) ** 2)
            diff = pt.binding - bohr
            rows.append(LimitRow(params.c, pt.binding, bohr, diff))
            xs.append(mp.log(embed_fraction(params.c, precision)))
            ys.append(mp.log(abs(diff)))
        xbar = sum(xs) / len(xs)
        ybar = sum(ys) / len(ys)
        num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
        den = sum((x - xbar) ** 2 for x in xs)
        slope = num / den
    with mp.workprec(precision):
        return LimitTable(tuple(rows), +slope)


# -- serialization ------------------------------------------------------------


def mp_str(x: mp.mpf, precision: int) -> str:
    """Deterministic decimal form carrying the full precision."""
    return mp.nstr(x, prec_to_dps(precision), strip_zeros=True)


def point_to_dict(p: SpectralPoint) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "j": str(p.channel.j),
        "eps": p.channel.eps,
        "n": p.n,
        "N": p.N,
        "Z": p.channel.params.Z,
        "c": str(p.channel.params.c),
        "precision": p.precision,
        "mu": mp_str(p.mu.embed(p.precision), p.precision),
        "E": mp_str(p.E, p.precision),
        "binding": mp_str(p.binding, p.precision),
        "physical": p.is_physical,
    }


def point_from_dict(d: dict) -> SpectralPoint:
    if d.get("schema") != SCHEMA_TAG:
        raise DomainError(f"unknown schema tag {d.get('schema')!r}")
    params = make_params(d["c"], int(d["Z"]))
    ch = make_channel(params, d["j"], int(d["eps"]))
    return spectral_point(ch, int(d["n"]), int(d["precision"]))
