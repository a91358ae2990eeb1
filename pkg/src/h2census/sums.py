r"""Divisor-sum functions behind the convergence of the census constants.

The parametric census sums reorganize, for prime n, into sums of::

    F(x, k, q)    = sum_{1 <= m <= x, m = k mod q} sigma(m)
    F_ow(x, k, q) = same congruence, odd divisors only
    F_oh(x, k, q) = m = k + q mod 2q, divisors with odd cofactor

with main terms (x^2/q) C prod_{p|q} (1 - p^-2) + O(x log x), where C is
pi^2/12 for F, pi^2/24 for F_ow (odd q, odd k), and pi^2/24 or pi^2/32 for
F_oh according to q even/odd.  The normalized sums::

    S(n, a) = (a / n^2) F(n - a, n, a),   S(n) = sum_{a >= 1} S(n, a) / a^2

converge over primes to 5/4, with parity pieces S_ow -> 1/2, S_oh -> 1/2 and
the mixed remainder S_eo -> 1/4.  The relevant Euler sums are::

    sum_{a >= 1} (1/a^2) prod_{p|a} (1 - p^-2) = zeta(2)/zeta(4) = 15/pi^2

and 12/pi^2, 3/pi^2 for its odd / even restrictions.

Everything exact is integer or Fraction arithmetic on a sigma table; the
table is a numpy sieve shared process-wide and grown on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ValidationError
from .census import euler_factor, is_prime

_PI2_12 = math.pi**2 / 12
_PI2_24 = math.pi**2 / 24
_PI2_32 = math.pi**2 / 32

S_LIMIT = Fraction(5, 4)
S_OW_LIMIT = Fraction(1, 2)
S_OH_LIMIT = Fraction(1, 2)
S_EO_LIMIT = Fraction(1, 4)


class DivisorSieve:
    """Tables of sigma(m), odd-divisor and odd-cofactor sums for m <= limit."""

    def __init__(self, limit: int):
        if limit < 1:
            raise ValidationError("sieve limit must be positive")
        self.limit = limit
        sigma = np.zeros(limit + 1, dtype=np.int64)
        for b in range(1, limit + 1):
            sigma[b::b] += b
        m = np.arange(limit + 1, dtype=np.int64)
        odd_part = m.copy()
        while True:
            even = (odd_part > 0) & (odd_part % 2 == 0)
            if not even.any():
                break
            odd_part[even] //= 2
        self.sigma = sigma
        # b odd, b | m  <->  b | oddpart(m)
        self.sigma_odd = sigma[odd_part]
        self.sigma_odd[0] = 0
        # m/b odd  <->  b = 2^v2(m) * d with d | oddpart(m)
        with np.errstate(divide="ignore", invalid="ignore"):
            two_part = np.ones(limit + 1, dtype=np.int64)
            two_part[1:] = m[1:] // odd_part[1:]
        self.sigma_oddcof = two_part * self.sigma_odd

    def _range_sum(self, table, x: int, start: int, step: int) -> int:
        if x < start:
            return 0
        return int(table[start : x + 1 : step].sum())


_sieve: DivisorSieve | None = None


def get_sieve(limit: int) -> DivisorSieve:
    """Process-wide sieve, grown geometrically to amortize rebuilds."""
    global _sieve
    if _sieve is None or _sieve.limit < limit:
        size = max(limit, 1 << 12)
        if _sieve is not None:
            size = max(size, 2 * _sieve.limit)
        _sieve = DivisorSieve(size)
    return _sieve


def _residue_start(k: int, q: int) -> int:
    r = k % q
    return r if r >= 1 else q


def F(x: int, k: int, q: int) -> int:
    """sum of sigma(m) over 1 <= m <= x with m = k (mod q), exact.

    >>> F(5, 1, 2)
    11
    >>> F(4, 5, 1)
    15
    >>> F(6, 2, 4)
    15
    """
    if x < 0 or q < 1:
        raise ValidationError("F needs x >= 0 and q >= 1")
    if x == 0:
        return 0
    sv = get_sieve(x)
    return sv._range_sum(sv.sigma, x, _residue_start(k, q), q)


def F_ow(x: int, k: int, q: int) -> int:
    """Odd-divisor variant of F: the inner sum runs over odd b | m.

    >>> F_ow(10, 1, 3)
    16
    """
    if x < 0 or q < 1:
        raise ValidationError("F_ow needs x >= 0 and q >= 1")
    if x == 0:
        return 0
    sv = get_sieve(x)
    return sv._range_sum(sv.sigma_odd, x, _residue_start(k, q), q)


def F_oh(x: int, k: int, q: int) -> int:
    """Odd-cofactor variant: m = k + q (mod 2q), summing b | m with m/b odd.

    >>> F_oh(20, 1, 3)
    32
    """
    if x < 0 or q < 1:
        raise ValidationError("F_oh needs x >= 0 and q >= 1")
    if x == 0:
        return 0
    sv = get_sieve(x)
    return sv._range_sum(sv.sigma_oddcof, x, _residue_start(k + q, 2 * q), 2 * q)


def F_predicted(x: float, k: int, q: int) -> float:
    """Main term (x^2/q)(pi^2/12) prod_{p|q}(1 - p^-2); needs gcd(k, q) = 1."""
    if q < 1:
        raise ValidationError("q must be positive")
    if math.gcd(k, q) != 1:
        raise ValidationError("the F main term requires gcd(k, q) = 1")
    return x * x / q * _PI2_12 * float(euler_factor(q))


def F_ow_predicted(x: float, k: int, q: int) -> float:
    """Main term (x^2/q)(pi^2/24) prod(1 - p^-2); odd q, odd k, coprime."""
    if q < 1:
        raise ValidationError("q must be positive")
    if q % 2 == 0 or k % 2 == 0:
        raise ValidationError("the F_ow main term requires odd q and odd k")
    if math.gcd(k, q) != 1:
        raise ValidationError("the F_ow main term requires gcd(k, q) = 1")
    return x * x / q * _PI2_24 * float(euler_factor(q))


def F_oh_predicted(x: float, k: int, q: int) -> float:
    """Main term with constant pi^2/24 for even q and pi^2/32 for odd q."""
    if q < 1:
        raise ValidationError("q must be positive")
    if k % 2 == 0:
        raise ValidationError("the F_oh main term requires odd k")
    if math.gcd(k, q) != 1:
        raise ValidationError("the F_oh main term requires gcd(k, q) = 1")
    const = _PI2_24 if q % 2 == 0 else _PI2_32
    return x * x / q * const * float(euler_factor(q))


# ---------------------------------------------------------------------------
# the S sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SumReport:
    """Exact values of S(n) and its parity pieces, with distances to limits."""

    n: int
    s: Fraction
    s_ow: Fraction
    s_oh: Fraction
    s_eo: Fraction

    @property
    def err_s(self) -> Fraction:
        return abs(self.s - S_LIMIT)

    @property
    def err_ow(self) -> Fraction:
        return abs(self.s_ow - S_OW_LIMIT)

    @property
    def err_oh(self) -> Fraction:
        return abs(self.s_oh - S_OH_LIMIT)

    @property
    def err_eo(self) -> Fraction:
        return abs(self.s_eo - S_EO_LIMIT)


def S_term(n: int, a: int) -> Fraction:
    """S(n, a) = (a/n^2) F(n-a, n, a)."""
    if a < 1 or a >= n:
        raise ValidationError("S(n, a) needs 1 <= a < n")
    return Fraction(a, n * n) * F(n - a, n, a)


def S_sums(n: int) -> SumReport:
    """Exact S(n), S_ow(n), S_oh(n) and S_eo(n) for an odd prime n.

    S_eo is evaluated both from its mixed-parity definition and as
    S - S_ow - S_oh; the two must agree exactly.
    """
    if not is_prime(n) or n == 2:
        raise ValidationError("S sums are defined for odd primes")
    sv = get_sieve(n)
    sigma, sodd, soddc = sv.sigma, sv.sigma_odd, sv.sigma_oddcof

    s = Fraction(0)
    s_ow = Fraction(0)
    s_oh = Fraction(0)
    s_eo_direct = Fraction(0)
    for a in range(1, n):
        acc = acc_ow = acc_oh = acc_eo = 0
        a_odd = a % 2 == 1
        for h in range(1, (n - 1) // a + 1):
            m = n - a * h
            if m <= 0:
                break
            sg = int(sigma[m])
            so = int(sodd[m])
            sc = int(soddc[m])
            acc += sg
            h_odd = h % 2 == 1
            if a_odd:
                acc_ow += so
            if h_odd:
                acc_oh += sc
            # mixed parity: not (a and b odd) and not (h and y odd)
            if a_odd:
                if h_odd:
                    acc_eo += sg - so - sc + (sg if m % 2 == 1 else 0)
                else:
                    acc_eo += sg - so
            else:
                if h_odd:
                    acc_eo += sg - sc
                else:
                    acc_eo += sg
        s += Fraction(acc, a)
        if a_odd:
            s_ow += Fraction(acc_ow, a)
        s_oh += Fraction(acc_oh, a)
        s_eo_direct += Fraction(acc_eo, a)
    nn = Fraction(1, n * n)
    s *= nn
    s_ow *= nn
    s_oh *= nn
    s_eo_direct *= nn
    s_eo = s - s_ow - s_oh
    if s_eo != s_eo_direct:
        raise ValidationError(
            f"mixed-parity sum mismatch at n={n}: {s_eo} != {s_eo_direct}"
        )
    return SumReport(n=n, s=s, s_ow=s_ow, s_oh=s_oh, s_eo=s_eo)


def census_bridge_sum(n: int) -> Fraction:
    """S(n) recomputed from raw cusp parameters (a < b dropped), exact.

    Equals S(n) for prime n where the coprimality of heights is automatic.
    """
    total = Fraction(0)
    for a in range(1, n):
        for h in range(1, (n - 1) // a + 1):
            m = n - a * h
            if m <= 0:
                break
            for y in range(1, m + 1):
                if m % y == 0:
                    total += Fraction(m // y, a)
    return total / n**2


def S_sums_restricted(n: int) -> Fraction:
    """The a < b part of S(n): what the census actually sums, normalized."""
    total = Fraction(0)
    for a in range(1, n):
        for h in range(1, (n - 1) // a + 1):
            m = n - a * h
            if m <= 0:
                break
            for y in range(1, m + 1):
                if m % y == 0 and m // y > a:
                    total += Fraction(m // y, a)
    return total / n**2


# ---------------------------------------------------------------------------
# Euler-product partial sums
# ---------------------------------------------------------------------------

def euler_partial(limit: int, parity: str | None = None) -> float:
    """sum_{a <= limit} (1/a^2) prod_{p|a} (1 - p^-2), optionally odd/even a.

    The tail beyond ``limit`` is below 1/limit, so at limit 10^6 the partial
    sums determine 15/pi^2, 12/pi^2 and 3/pi^2 to better than 1e-5.
    """
    if limit < 1:
        raise ValidationError("limit must be positive")
    if parity not in (None, "odd", "even"):
        raise ValidationError("parity must be None, 'odd' or 'even'")
    j = np.ones(limit + 1, dtype=np.float64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, limit + 1):
        if sieve[p]:
            sieve[2 * p :: p] = False
            j[p::p] *= 1.0 - 1.0 / (p * p)
    a = np.arange(limit + 1, dtype=np.float64)
    a[0] = 1.0
    terms = j / (a * a)
    terms[0] = 0.0
    if parity == "odd":
        terms[0::2] = 0.0
    elif parity == "even":
        terms[1::2] = 0.0
    # ascending order keeps the float error of the million-term sum tiny
    return float(terms[::-1].sum())
