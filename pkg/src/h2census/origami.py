r"""Square-tiled surfaces as pairs of permutations, and the SL(2,Z) action.

A square-tiled surface (origami) with ``n`` unit squares is encoded by two
permutations of ``{0, ..., n-1}``: ``sigma_h`` sends each square to its right
neighbour and ``sigma_v`` to its upper neighbour.  The pair must generate a
transitive group so that the surface is connected.

Frozen conventions
------------------

* Commutator: ``c = sigma_h . sigma_v . sigma_h^-1 . sigma_v^-1`` applied
  right to left.  Its cycles of length ``k > 1`` mark the squares whose
  bottom-left corner is a cone point of angle ``2*pi*k``; the multiset of
  those lengths is the stratum signature (``(3,)`` for genus two with a
  single cone point of angle ``6*pi``).
* Generators: ``T = [[1,1],[0,1]]`` is the horizontal shear and
  ``S = [[0,-1],[1,0]]`` the quarter turn.  On pairs they act by
  ``T.(h, v) = (h, v.h^-1)`` and ``S.(h, v) = (v^-1, h)``; matrices act on
  column vectors and compose as a left action, ``(M1*M2).o = M1.(M2.o)``.
* Equivalence of origamis is simultaneous conjugation of both permutations.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .errors import ConsistencyError, OrbitBudgetError, ValidationError

Perm = tuple[int, ...]
Matrix = tuple[int, int, int, int]  # (a, b, c, d) for [[a, b], [c, d]]

GEN_T = "T"
GEN_T_INV = "T^-1"
GEN_S = "S"

T_MATRIX: Matrix = (1, 1, 0, 1)
T_INV_MATRIX: Matrix = (1, -1, 0, 1)
S_MATRIX: Matrix = (0, -1, 1, 0)
IDENTITY_MATRIX: Matrix = (1, 0, 0, 1)

_GEN_MATRICES = {GEN_T: T_MATRIX, GEN_T_INV: T_INV_MATRIX, GEN_S: S_MATRIX}


# ---------------------------------------------------------------------------
# permutations as tuples of images
# ---------------------------------------------------------------------------

def perm_check(images) -> Perm:
    """Validate that ``images`` is a bijection of {0..n-1}; return it as a tuple."""
    p = tuple(int(x) for x in images)
    n = len(p)
    seen = bytearray(n)
    for x in p:
        if x < 0 or x >= n or seen[x]:
            raise ValidationError(f"not a permutation of 0..{n - 1}: {list(images)!r}")
        seen[x] = 1
    return p


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_compose(p: Perm, q: Perm) -> Perm:
    """Composition ``p o q``, i.e. ``x -> p[q[x]]``."""
    return tuple(p[x] for x in q)


def perm_cycles(p: Perm) -> list[list[int]]:
    """Cycles of ``p``, each starting at its least element, sorted by that element."""
    n = len(p)
    seen = bytearray(n)
    cycles = []
    for x in range(n):
        if not seen[x]:
            cyc = [x]
            seen[x] = 1
            y = p[x]
            while y != x:
                seen[y] = 1
                cyc.append(y)
                y = p[y]
            cycles.append(cyc)
    return cycles


def perm_power(p: Perm, k: int) -> Perm:
    """``p**k`` for any integer ``k``, computed cycle by cycle."""
    n = len(p)
    out = [0] * n
    for cyc in perm_cycles(p):
        m = len(cyc)
        s = k % m
        for i, x in enumerate(cyc):
            out[x] = cyc[(i + s) % m]
    return tuple(out)


def perm_order(p: Perm) -> int:
    return lcm(*(len(c) for c in perm_cycles(p))) if p else 1


def _is_transitive(h: Perm, v: Perm) -> bool:
    # Forward reachability suffices: a finite set closed under a bijection is
    # closed under its inverse as well.
    n = len(h)
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    count = 1
    while stack:
        x = stack.pop()
        for y in (h[x], v[x]):
            if not seen[y]:
                seen[y] = 1
                count += 1
                stack.append(y)
    return count == n


# ---------------------------------------------------------------------------
# origamis
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Origami:
    """A connected square-tiled surface given by its two neighbour permutations."""

    sigma_h: Perm
    sigma_v: Perm

    def __post_init__(self):
        h = perm_check(self.sigma_h)
        v = perm_check(self.sigma_v)
        if len(h) != len(v):
            raise ValidationError("sigma_h and sigma_v must have the same degree")
        if len(h) == 0:
            raise ValidationError("an origami needs at least one square")
        object.__setattr__(self, "sigma_h", h)
        object.__setattr__(self, "sigma_v", v)
        if not _is_transitive(h, v):
            raise ValidationError("permutation pair is not transitive (surface disconnected)")

    @property
    def n(self) -> int:
        """Number of squares."""
        return len(self.sigma_h)

    def __repr__(self):
        return f"Origami(sigma_h={list(self.sigma_h)}, sigma_v={list(self.sigma_v)})"


@dataclass(frozen=True, slots=True)
class StratumSignature:
    """Multiset of cone orders: cycle lengths > 1 of the commutator."""

    cone_orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cone_orders", tuple(sorted(self.cone_orders)))

    @property
    def genus(self) -> int:
        return sum(k - 1 for k in self.cone_orders) // 2 + 1

    @property
    def is_h2(self) -> bool:
        return self.cone_orders == (3,)


def commutator(o: Origami) -> Perm:
    """``sigma_h . sigma_v . sigma_h^-1 . sigma_v^-1`` applied right to left."""
    h, v = o.sigma_h, o.sigma_v
    hi = perm_inverse(h)
    vi = perm_inverse(v)
    return tuple(h[v[hi[vi[x]]]] for x in range(len(h)))


def stratum_of(o: Origami) -> StratumSignature:
    """Stratum signature of ``o``: the nontrivial cycle lengths of its commutator.

    The empty signature means an unbranched torus cover.
    """
    comm = commutator(o)
    orders = tuple(len(c) for c in perm_cycles(comm) if len(c) > 1)
    sig = StratumSignature(orders)
    if sum(k - 1 for k in sig.cone_orders) % 2:
        raise ConsistencyError(f"odd total cone order defect for {o!r}")
    return sig


def is_primitive(o: Origami) -> bool:
    """True iff the absolute period lattice of ``o`` is all of Z^2.

    A spanning tree of the square-adjacency graph assigns each square a
    position in Z^2; holonomies of the non-tree edges generate the period
    lattice, and the origami factors through a larger torus exactly when
    that lattice is proper.
    """
    h, v = o.sigma_h, o.sigma_v
    n = o.n
    pos: list[tuple[int, int] | None] = [None] * n
    pos[0] = (0, 0)
    stack = [0]
    vectors: list[tuple[int, int]] = []
    while stack:
        x = stack.pop()
        px, py = pos[x]  # type: ignore[misc]
        for y, dx, dy in ((h[x], 1, 0), (v[x], 0, 1)):
            if pos[y] is None:
                pos[y] = (px + dx, py + dy)
                stack.append(y)
            else:
                qx, qy = pos[y]
                hol = (px + dx - qx, py + dy - qy)
                if hol != (0, 0):
                    vectors.append(hol)
    return _lattice_index(vectors) == 1


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _lattice_index(vectors) -> int:
    """Index in Z^2 of the lattice spanned by ``vectors`` (0 if rank < 2)."""
    ux = uy = 0
    g2 = 0
    for x, y in vectors:
        if x == 0:
            g2 = gcd(g2, y)
            continue
        if ux == 0:
            ux, uy = (x, y) if x > 0 else (-x, -y)
            continue
        g, s, t = _ext_gcd(ux, x)
        g2 = gcd(g2, (ux * y - x * uy) // g)
        ux, uy = g, s * uy + t * y
    return abs(ux * g2)


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------

def _relabel_pair(h: Perm, v: Perm, base: int) -> tuple[Perm, Perm]:
    """Relabel squares in breadth-first discovery order from ``base``.

    Edge order is fixed: right neighbour first, then upper neighbour.
    """
    n = len(h)
    new = [-1] * n
    order = [base]
    new[base] = 0
    count = 1
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in (h[x], v[x]):
            if new[y] < 0:
                new[y] = count
                count += 1
                order.append(y)
    nh = [0] * n
    nv = [0] * n
    for x in range(n):
        nh[new[x]] = new[h[x]]
        nv[new[x]] = new[v[x]]
    return tuple(nh), tuple(nv)


def _canonical_pair(h: Perm, v: Perm) -> tuple[Perm, Perm]:
    n = len(h)
    hi = perm_inverse(h)
    vi = perm_inverse(v)
    bases = [x for x in range(n) if h[v[hi[vi[x]]]] != x]
    if not bases:
        # unbranched torus cover: no distinguished squares, try every base
        bases = list(range(n))
    best = None
    for base in bases:
        cand = _relabel_pair(h, v, base)
        if best is None or cand < best:
            best = cand
    return best  # type: ignore[return-value]


def canonical_form(o: Origami) -> Origami:
    """Canonical representative of ``o`` under simultaneous relabeling.

    Two origamis have equal canonical forms iff one is obtained from the
    other by conjugating both permutations by the same relabeling.  The
    representative is the lexicographically least pair over breadth-first
    relabelings started at each square marked by the commutator (at each
    square, for torus covers), so it is conjugation-invariant and the map
    is idempotent.
    """
    return Origami(*_canonical_pair(o.sigma_h, o.sigma_v))


# ---------------------------------------------------------------------------
# SL(2, Z) action
# ---------------------------------------------------------------------------

def apply_word(o: Origami, word) -> Origami:
    """Apply a word in the generators {T, T^-1, S}, first letter first.

    ``T`` preserves every horizontal cylinder and shifts its twist by its
    height; ``S`` exchanges the horizontal and vertical directions.
    """
    h, v = o.sigma_h, o.sigma_v
    letters = list(word)
    i = 0
    while i < len(letters):
        g = letters[i]
        if g == GEN_S:
            h, v = perm_inverse(v), h
            i += 1
        elif g in (GEN_T, GEN_T_INV):
            k = 0
            while i < len(letters) and letters[i] in (GEN_T, GEN_T_INV):
                k += 1 if letters[i] == GEN_T else -1
                i += 1
            if k:
                v = perm_compose(v, perm_power(h, -k))
        else:
            raise ValidationError(f"unknown generator {g!r}; expected 'T', 'T^-1' or 'S'")
    return Origami(h, v)


def word_matrix(word) -> Matrix:
    """Matrix of a generator word: the word acts on origamis as this matrix.

    Letters apply first to last, so the matrix is the product of the letter
    matrices in reversed order.
    """
    m = IDENTITY_MATRIX
    for g in word:
        try:
            m = matrix_mul(_GEN_MATRICES[g], m)
        except KeyError:
            raise ValidationError(f"unknown generator {g!r}") from None
    return m


def matrix_mul(m1: Matrix, m2: Matrix) -> Matrix:
    a1, b1, c1, d1 = m1
    a2, b2, c2, d2 = m2
    return (a1 * a2 + b1 * c2, a1 * b2 + b1 * d2, c1 * a2 + d1 * c2, c1 * b2 + d1 * d2)


def matrix_apply(m: Matrix, vec: tuple[int, int]) -> tuple[int, int]:
    a, b, c, d = m
    x, y = vec
    return (a * x + b * y, c * x + d * y)


@lru_cache(maxsize=1 << 16)
def matrix_factors(m: Matrix) -> tuple[str, ...]:
    """Generator letters whose left-to-right matrix product equals ``m``.

    Euclidean algorithm on the first column; ``det m = 1`` is required.
    """
    a, b, c, d = m
    if a * d - b * c != 1:
        raise ValidationError(f"matrix {m} does not have determinant 1")
    letters: list[str] = []
    # Reduce m to the identity by left-multiplying with generator matrices,
    # recording the inverse of each step; the record multiplies back to m.
    while c:
        k = a // c
        if k:
            a -= k * c
            b -= k * d
            letters.extend([GEN_T] * k if k > 0 else [GEN_T_INV] * (-k))
        a, b, c, d = -c, -d, a, b
        letters.extend([GEN_S] * 3)
    if a == 1:
        if b:
            letters.extend([GEN_T] * b if b > 0 else [GEN_T_INV] * (-b))
    else:
        # a == d == -1: remaining matrix is S^2 * T^{-b}
        if b:
            letters.extend([GEN_T_INV] * b if b > 0 else [GEN_T] * (-b))
        letters.extend([GEN_S] * 2)
    return tuple(letters)


def apply_matrix(o: Origami, m) -> Origami:
    """Apply ``m`` in SL(2, Z) to ``o`` (left action on column vectors)."""
    mt = tuple(int(x) for x in (m if len(m) == 4 else (m[0][0], m[0][1], m[1][0], m[1][1])))
    factors = matrix_factors(mt)  # product(factors) == mt, applied last to first
    return apply_word(o, reversed(factors))


# ---------------------------------------------------------------------------
# U-orbits and SL(2, Z)-orbits
# ---------------------------------------------------------------------------

def u_orbit_length(o: Origami) -> int:
    """Least ``k >= 1`` with ``T^k . o`` equivalent to ``o``.

    This is the width of the cusp of ``o``; it divides the order of
    ``sigma_h``, which bounds the loop.
    """
    h, v = o.sigma_h, o.sigma_v
    target = _canonical_pair(h, v)
    hi = perm_inverse(h)
    bound = perm_order(h)
    cur = v
    for k in range(1, bound + 1):
        cur = perm_compose(cur, hi)
        if _canonical_pair(h, cur) == target:
            return k
    raise ConsistencyError("T-orbit did not close within the order of sigma_h")


@dataclass(frozen=True, slots=True)
class OrbitResult:
    """An SL(2, Z)-orbit as canonical forms, partitioned into U-orbits."""

    origamis: tuple[Origami, ...]
    cusps: tuple[tuple[int, ...], ...]  # index blocks; block sizes are cusp widths

    @property
    def size(self) -> int:
        return len(self.origamis)


def orbit_bfs(seed: Origami, max_size: int = 200_000) -> OrbitResult:
    """Enumerate the SL(2, Z)-orbit of ``seed`` and its U-orbit partition.

    The search runs over canonical forms with generators T, T^-1, S.  If the
    orbit exceeds ``max_size`` surfaces an :class:`OrbitBudgetError` is
    raised; mathematical failures raise :class:`ConsistencyError` instead.
    """
    start = _canonical_pair(seed.sigma_h, seed.sigma_v)
    index = {start: 0}
    reps = [start]
    queue = deque([start])
    while queue:
        h, v = queue.popleft()
        neighbours = (
            (h, perm_compose(v, perm_inverse(h))),  # T
            (h, perm_compose(v, h)),                # T^-1
            (perm_inverse(v), h),                   # S
        )
        for nh, nv in neighbours:
            cp = _canonical_pair(nh, nv)
            if cp not in index:
                if len(reps) >= max_size:
                    raise OrbitBudgetError(
                        f"orbit of seed exceeds max_size={max_size} surfaces"
                    )
                index[cp] = len(reps)
                reps.append(cp)
                queue.append(cp)
    assigned = bytearray(len(reps))
    blocks = []
    for i, pair in enumerate(reps):
        if assigned[i]:
            continue
        block = []
        cur = pair
        while True:
            j = index[cur]
            if assigned[j]:
                raise ConsistencyError("U-orbit walk crossed into another block")
            assigned[j] = 1
            block.append(j)
            h, v = cur
            cur = _canonical_pair(h, perm_compose(v, perm_inverse(h)))
            if cur == pair:
                break
        blocks.append(tuple(block))
    return OrbitResult(tuple(Origami(*p) for p in reps), tuple(blocks))


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def origami_to_json(o: Origami) -> str:
    """Serialize to the shared text format, e.g. {"n":3,"sigma_h":[...],"sigma_v":[...]}."""
    payload = {"n": o.n, "sigma_h": list(o.sigma_h), "sigma_v": list(o.sigma_v)}
    return json.dumps(payload, separators=(",", ":"))


def origami_from_json(text: str) -> Origami:
    """Parse the shared text format; rejects malformed input with ValidationError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON for origami: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError("origami JSON must be an object")
    try:
        n = data["n"]
        sh = data["sigma_h"]
        sv = data["sigma_v"]
    except KeyError as exc:
        raise ValidationError(f"origami JSON missing field {exc}") from None
    if not isinstance(sh, list) or not isinstance(sv, list) or len(sh) != n or len(sv) != n:
        raise ValidationError("origami JSON arrays must both have length n")
    return Origami(tuple(sh), tuple(sv))
