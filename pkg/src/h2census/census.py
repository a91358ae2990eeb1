r"""Cusp census of SL(2,Z)-orbits and the normalized regular-cylinder constant.

For an origami ``S`` with ``n`` squares and SL(2,Z)-orbit ``D``, the quantity
of interest is::

    tilde_c(S) = (n / #D) * sum over two-cylinder cusps of cw(C) / w1^2

where ``cw`` is the cusp width and ``w1`` the narrow cylinder's width.  Over
odd prime ``n`` there are two orbits: all cusps with both heights odd lie in
orbit A, all cusps with both widths odd in orbit B, and cusps of mixed parity
contribute half of their surfaces to each.  ``tilde_c`` can therefore be
evaluated either by walking the orbit (the oracle) or parametrically from the
cusp parameters ``(a, b, h, y)`` with ``a*h + b*y = n``; the two pipelines
must agree exactly.

Orbit sizes at odd prime ``n``, fitted from orbit enumeration at small primes
and re-verified exactly by the test suite up to n = 31::

    #A_n = (3/16) (n - 1) n^2 prod_{p | n} (1 - p^-2)
    #B_n = (3/16) (n - 3) n^2 prod_{p | n} (1 - p^-2)

Their sum is (3/8) (n - 2) n^2 prod (1 - p^-2), asymptotic to the familiar
(3/8) n^3 prod (1 - p^-2) count of all primitive surfaces.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .cylinders import (
    TwoCylCoords,
    build_two_cylinder,
    cusp_width_formula,
    horizontal_decomposition,
)
from .errors import ConsistencyError, ValidationError
from .origami import Origami, OrbitResult, canonical_form, is_primitive, orbit_bfs, stratum_of

#: Largest prime for which tilde_c_parametric fetches exact orbit sizes by BFS.
PRIME_EXACT_MAX = 31

DEFAULT_ORBIT_BUDGET = 200_000


class OrbitLabel(enum.Enum):
    A = "A"
    B = "B"
    E = "E"
    SINGLE = "SingleOrbit"
    NONPRIMITIVE = "NonPrimitive"
    OTHER = "Other"

    def __str__(self):
        return self.value


class ParityClass(enum.Enum):
    HODD = "HOdd"
    WODD = "WOdd"
    MIXED = "Mixed"

    def __str__(self):
        return self.value


@dataclass(frozen=True, slots=True)
class CuspParams:
    """Width/height parameters of a two-cylinder cusp: a*h + b*y = n, a < b."""

    a: int
    b: int
    h: int
    y: int

    def __post_init__(self):
        for name in ("a", "b", "h", "y"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if not self.a < self.b:
            raise ValidationError(f"a < b violated: a={self.a}, b={self.b}")
        if gcd(self.h, self.y) != 1:
            raise ValidationError(f"gcd(h, y) = 1 violated: h={self.h}, y={self.y}")

    @property
    def n(self) -> int:
        return self.a * self.h + self.b * self.y

    @property
    def surface_count(self) -> int:
        """Number of surfaces sharing these parameters: all twist pairs, a*b."""
        return self.a * self.b

    @property
    def cusp_width(self) -> int:
        return cusp_width_formula(self)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f <= isqrt(n):
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# parameter enumeration and parity classes
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _spf_table(limit: int) -> list[int]:
    spf = list(range(limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            for m in range(p * p, limit + 1, p):
                if spf[m] == m:
                    spf[m] = p
    return spf


def _divisors(m: int, spf) -> list[int]:
    divs = [1]
    while m > 1:
        p = spf[m]
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        divs = [d * p**e for d in divs for e in range(k + 1)]
    divs.sort()
    return divs


def enumerate_params(n: int, *, coprime_filter: bool = True) -> tuple[CuspParams, ...]:
    """All (a, b, h, y) with a*h + b*y = n, a < b, and gcd(h, y) = 1.

    For prime n the gcd condition is vacuous: a common divisor of h and y
    would divide n.  ``coprime_filter=False`` drops the condition, which is
    only meaningful at primes (the output is identical there).
    """
    if n < 3:
        raise ValidationError("two-cylinder parameters need n >= 3")
    spf = _spf_table(n)
    out = []
    for a in range(1, n):
        for h in range(1, (n - 1) // a + 1):
            m = n - a * h
            if m <= 0:
                break
            for y in _divisors(m, spf):
                if coprime_filter and gcd(h, y) != 1:
                    continue
                b = m // y
                if b > a:
                    out.append(CuspParams(a=a, b=b, h=h, y=y))
    return tuple(out)


def classify(p: CuspParams) -> ParityClass:
    """Parity class of a cusp tuple; defined for odd n only.

    HOdd (both heights odd) lies in orbit A, WOdd (both widths odd) in orbit
    B, Mixed contributes half of its surfaces to each orbit.
    """
    if p.n % 2 == 0:
        raise ValidationError("parity classification requires odd n")
    if p.h % 2 == 1 and p.y % 2 == 1:
        return ParityClass.HODD
    if p.a % 2 == 1 and p.b % 2 == 1:
        return ParityClass.WODD
    if (p.a - p.b) % 2 and (p.h - p.y) % 2:
        return ParityClass.MIXED
    raise ConsistencyError(f"parity trichotomy violated for {p!r}")


def _class_sums(n: int, weight) -> dict[ParityClass, Fraction]:
    """Sum ``weight(p)`` over enumerate_params(n), split by parity class."""
    sums = {cls: Fraction(0) for cls in ParityClass}
    for p in enumerate_params(n):
        sums[classify(p)] += weight(p)
    return sums


def euler_factor(n: int) -> Fraction:
    """prod over primes p | n of (1 - p^-2), exact."""
    out = Fraction(1)
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out *= 1 - Fraction(1, p * p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out *= 1 - Fraction(1, m * m)
    return out


def closed_form_total(n: int) -> Fraction:
    """Asymptotic count (3/8) n^3 prod_{p|n} (1 - p^-2) of primitive surfaces."""
    return Fraction(3, 8) * n**3 * euler_factor(n)


def closed_form_orbit_size(n: int, label: OrbitLabel) -> Fraction:
    """Exact orbit size at odd prime n (empirical fit, BFS-verified to 31)."""
    if label == OrbitLabel.A:
        return Fraction(3, 16) * (n - 1) * n**2 * euler_factor(n)
    if label == OrbitLabel.B:
        return Fraction(3, 16) * (n - 3) * n**2 * euler_factor(n)
    raise ValidationError(f"no closed form for orbit label {label}")


# ---------------------------------------------------------------------------
# orbit census (BFS oracle)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CuspRecord:
    """One cusp (U-orbit): its width and the decomposition of a representative."""

    width: int
    n_cylinders: int
    params: CuspParams | None  # two-cylinder cusps only
    twists: tuple[int, int] | None
    one_cyl: tuple[int, int] | None  # (width, height) for one-cylinder cusps
    rep_index: int


@dataclass(frozen=True, slots=True)
class OrbitSummary:
    """Census of one SL(2,Z)-orbit."""

    n: int
    label: OrbitLabel
    size: int
    cusps: tuple[CuspRecord, ...]

    @property
    def two_cylinder_cusps(self) -> tuple[CuspRecord, ...]:
        return tuple(c for c in self.cusps if c.n_cylinders == 2)

    @property
    def one_cylinder_cusps(self) -> tuple[CuspRecord, ...]:
        return tuple(c for c in self.cusps if c.n_cylinders == 1)

    @property
    def two_cylinder_surface_count(self) -> int:
        return sum(c.width for c in self.two_cylinder_cusps)

    @property
    def tilde_c(self) -> Fraction:
        """(n / size) * sum of cw / w1^2 over two-cylinder cusps."""
        total = sum(
            (Fraction(c.width, c.params.a ** 2) for c in self.two_cylinder_cusps),
            Fraction(0),
        )
        return Fraction(self.n, self.size) * total

    @property
    def tilde_c_irregular(self) -> Fraction:
        """Irregular analogue: cw / w2^2 over two-cylinder cusps plus cw / w^2."""
        total = sum(
            (Fraction(c.width, c.params.b ** 2) for c in self.two_cylinder_cusps),
            Fraction(0),
        )
        total += sum(
            (Fraction(c.width, c.one_cyl[0] ** 2) for c in self.one_cylinder_cusps),
            Fraction(0),
        )
        return Fraction(self.n, self.size) * total


@dataclass(frozen=True, slots=True)
class OrbitCensus:
    n: int
    orbits: tuple[OrbitSummary, ...]

    @property
    def total_size(self) -> int:
        return sum(o.size for o in self.orbits)

    def orbit(self, label: OrbitLabel) -> OrbitSummary:
        for o in self.orbits:
            if o.label == label:
                return o
        raise ValidationError(f"census of n={self.n} has no orbit labeled {label}")


def _summarize_orbit(n: int, label: OrbitLabel, result: OrbitResult) -> OrbitSummary:
    records = []
    for block in result.cusps:
        rep = result.origamis[block[0]]
        dec = horizontal_decomposition(rep)
        if len(dec) == 2:
            c1, c2 = dec
            params = CuspParams(a=c1.width, b=c2.width, h=c1.height, y=c2.height)
            rec = CuspRecord(
                width=len(block), n_cylinders=2, params=params,
                twists=(c1.twist, c2.twist), one_cyl=None, rep_index=block[0],
            )
        else:
            (c,) = dec
            rec = CuspRecord(
                width=len(block), n_cylinders=1, params=None,
                twists=None, one_cyl=(c.width, c.height), rep_index=block[0],
            )
        records.append(rec)
    return OrbitSummary(n=n, label=label, size=result.size, cusps=tuple(records))


def standard_seed(n: int, label: OrbitLabel) -> Origami:
    """Primitive two-cylinder seed whose cusp parity matches the orbit label.

    Orbit A is seeded from (a, b, h, y) = (1, n-1, 1, 1) (heights odd) and
    orbit B from (1, n-2, 2, 1) (widths odd); both have a height-one wide
    cylinder glued to itself somewhere, hence are primitive for every n.
    """
    if label == OrbitLabel.A or label == OrbitLabel.SINGLE:
        return build_two_cylinder(TwoCylCoords(a=1, b=n - 1, h=1, y=1))
    if label == OrbitLabel.B:
        if n < 5:
            raise ValidationError("orbit B exists only for odd n >= 5")
        return build_two_cylinder(TwoCylCoords(a=1, b=n - 2, h=2, y=1))
    raise ValidationError(f"no standard seed for orbit label {label}")


@lru_cache(maxsize=64)
def orbit_census(n: int, max_size: int = DEFAULT_ORBIT_BUDGET) -> OrbitCensus:
    """Enumerate all SL(2,Z)-orbits of primitive n-square H(2) origamis.

    For odd prime n > 3 the two orbits come from the standard parity seeds;
    n = 3 has a single orbit.  Other n run in exploratory mode: every
    primitive two-cylinder surface is tried as a seed and orbits are labeled
    E (even n) or by the parity class of the seed (odd composite n).
    """
    if n < 3:
        raise ValidationError("the census needs n >= 3")
    if n == 3:
        res = orbit_bfs(standard_seed(3, OrbitLabel.SINGLE), max_size=max_size)
        return OrbitCensus(n=3, orbits=(_summarize_orbit(3, OrbitLabel.SINGLE, res),))
    if n % 2 == 1 and is_prime(n):
        res_a = orbit_bfs(standard_seed(n, OrbitLabel.A), max_size=max_size)
        res_b = orbit_bfs(standard_seed(n, OrbitLabel.B), max_size=max_size)
        in_a = set(o.sigma_h + o.sigma_v for o in res_a.origamis)
        if (res_b.origamis[0].sigma_h + res_b.origamis[0].sigma_v) in in_a:
            raise ConsistencyError(f"parity seeds for n={n} landed in one orbit")
        return OrbitCensus(
            n=n,
            orbits=(
                _summarize_orbit(n, OrbitLabel.A, res_a),
                _summarize_orbit(n, OrbitLabel.B, res_b),
            ),
        )
    return _exploratory_census(n, max_size)


def _exploratory_census(n: int, max_size: int) -> OrbitCensus:
    visited: set[tuple[int, ...]] = set()
    summaries = []
    for params in enumerate_params(n):
        for t1 in range(params.a):
            for t2 in range(params.b):
                o = build_two_cylinder(
                    TwoCylCoords(a=params.a, b=params.b, h=params.h, y=params.y, t1=t1, t2=t2)
                )
                co = canonical_form(o)
                key = co.sigma_h + co.sigma_v
                if key in visited or not is_primitive(co):
                    continue
                res = orbit_bfs(co, max_size=max_size)
                visited.update(x.sigma_h + x.sigma_v for x in res.origamis)
                if n % 2 == 0:
                    label = OrbitLabel.E if not summaries else OrbitLabel.OTHER
                else:
                    cls = classify(params)
                    label = {
                        ParityClass.HODD: OrbitLabel.A,
                        ParityClass.WODD: OrbitLabel.B,
                        ParityClass.MIXED: OrbitLabel.OTHER,
                    }[cls]
                    if any(s.label == label for s in summaries):
                        label = OrbitLabel.OTHER
                summaries.append(_summarize_orbit(n, label, res))
    return OrbitCensus(n=n, orbits=tuple(summaries))


# ---------------------------------------------------------------------------
# tilde_c: oracle and parametric evaluation
# ---------------------------------------------------------------------------

def _require_census_seed(seed: Origami) -> None:
    if not stratum_of(seed).is_h2:
        raise ValidationError("seed must lie in H(2)")
    if not is_primitive(seed):
        raise ValidationError("seed must be primitive")


def tilde_c_oracle(seed: Origami, max_size: int = DEFAULT_ORBIT_BUDGET) -> Fraction:
    """Exact tilde_c of the orbit of ``seed``, by full orbit enumeration."""
    _require_census_seed(seed)
    res = orbit_bfs(seed, max_size=max_size)
    total = Fraction(0)
    for block in res.cusps:
        dec = horizontal_decomposition(res.origamis[block[0]])
        if len(dec) == 2:
            total += Fraction(len(block), dec[0].width ** 2)
    return Fraction(seed.n, res.size) * total


def tilde_c_irregular(seed: Origami, max_size: int = DEFAULT_ORBIT_BUDGET) -> Fraction:
    """Irregular-cylinder analogue of tilde_c for the orbit of ``seed``."""
    _require_census_seed(seed)
    res = orbit_bfs(seed, max_size=max_size)
    total = Fraction(0)
    for block in res.cusps:
        dec = horizontal_decomposition(res.origamis[block[0]])
        total += Fraction(len(block), dec[-1].width ** 2)
    return Fraction(seed.n, res.size) * total


_CLASS_OF_ORBIT = {OrbitLabel.A: ParityClass.HODD, OrbitLabel.B: ParityClass.WODD}


def parametric_inner_sum(n: int, label: OrbitLabel) -> Fraction:
    """sum of b/a over the orbit's parity class plus half the mixed-class sum."""
    if label not in _CLASS_OF_ORBIT:
        raise ValidationError("parametric sums exist for orbits A and B only")
    sums = _class_sums(n, lambda p: Fraction(p.b, p.a))
    return sums[_CLASS_OF_ORBIT[label]] + Fraction(1, 2) * sums[ParityClass.MIXED]


def parametric_two_cylinder_count(n: int, label: OrbitLabel) -> int:
    """Number of two-cylinder surfaces in the orbit: sum of a*b, mixed halved."""
    if label not in _CLASS_OF_ORBIT:
        raise ValidationError("parametric counts exist for orbits A and B only")
    sums = _class_sums(n, lambda p: Fraction(p.surface_count))
    value = sums[_CLASS_OF_ORBIT[label]] + Fraction(1, 2) * sums[ParityClass.MIXED]
    if value.denominator != 1:
        raise ConsistencyError(f"two-cylinder count for n={n} is not an integer")
    return int(value)


def tilde_c_parametric(
    n: int,
    label: OrbitLabel,
    orbit_size: int | Fraction | None = None,
) -> Fraction:
    """tilde_c from the cusp-parameter sums: n/size * (class sum + mixed/2).

    ``orbit_size`` defaults to the BFS-exact size for primes up to
    PRIME_EXACT_MAX and to the closed form beyond.
    """
    if not is_prime(n) or n <= 3:
        raise ValidationError("parametric tilde_c is defined for odd primes n > 3")
    if orbit_size is None:
        if n <= PRIME_EXACT_MAX:
            orbit_size = orbit_census(n).orbit(label).size
        else:
            orbit_size = closed_form_orbit_size(n, label)
    return n * parametric_inner_sum(n, label) / orbit_size


TILDE_C_LIMIT = Fraction(10, 3)


# ---------------------------------------------------------------------------
# consistency report
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CensusReport:
    n: int
    ok: bool
    failures: tuple[str, ...]
    census: OrbitCensus


def census_consistency(n: int, max_size: int = DEFAULT_ORBIT_BUDGET) -> CensusReport:
    """Cross-check the BFS census of an odd prime n against the cusp lemma.

    Verifies, per parameter tuple: the number of cusps is gcd(a,h)*gcd(b,y),
    each has the formula width, and the widths add up to a*b (split evenly
    between the orbits for mixed parity).  Verifies, per orbit: the cusp
    widths add up to the orbit size, the two-cylinder surface count matches
    the parametric count, and the oracle tilde_c equals the parametric one.
    """
    if not is_prime(n) or n % 2 == 0:
        raise ValidationError("census consistency checks run at odd primes")
    failures: list[str] = []
    census = orbit_census(n, max_size=max_size)

    by_tuple: dict[CuspParams, dict[OrbitLabel, list[int]]] = {}
    for orb in census.orbits:
        if sum(c.width for c in orb.cusps) != orb.size:
            failures.append(f"orbit {orb.label}: cusp widths do not sum to the orbit size")
        for c in orb.two_cylinder_cusps:
            by_tuple.setdefault(c.params, {}).setdefault(orb.label, []).append(c.width)

    for params in enumerate_params(n):
        g = gcd(params.a, params.h) * gcd(params.b, params.y)
        width = params.cusp_width
        seen = by_tuple.get(params, {})
        widths = [w for ws in seen.values() for w in ws]
        if len(widths) != g:
            failures.append(f"{params}: expected {g} cusps, found {len(widths)}")
        if any(w != width for w in widths):
            failures.append(f"{params}: cusp width mismatch (formula {width}, got {widths})")
        if sum(widths) != params.surface_count:
            failures.append(f"{params}: widths sum to {sum(widths)}, not a*b")
        cls = classify(params)
        if n > 3 and cls is ParityClass.MIXED:
            half = Fraction(params.surface_count, 2)
            for lab in (OrbitLabel.A, OrbitLabel.B):
                got = sum(seen.get(lab, []))
                if got != half:
                    failures.append(f"{params}: orbit {lab} holds {got} surfaces, not {half}")
        elif n > 3:
            expect = OrbitLabel.A if cls is ParityClass.HODD else OrbitLabel.B
            wrong = [lab for lab in seen if lab != expect]
            if wrong:
                failures.append(f"{params}: {cls} cusps found in orbit(s) {wrong}")

    if n > 3:
        for lab in (OrbitLabel.A, OrbitLabel.B):
            orb = census.orbit(lab)
            if orb.two_cylinder_surface_count != parametric_two_cylinder_count(n, lab):
                failures.append(f"orbit {lab}: two-cylinder surface count mismatch")
            if orb.tilde_c != tilde_c_parametric(n, lab, orbit_size=orb.size):
                failures.append(f"orbit {lab}: oracle and parametric tilde_c differ")

    return CensusReport(n=n, ok=not failures, failures=tuple(failures), census=census)
