r"""Horizontal cylinder decompositions of origamis in the genus-two stratum.

Every origami whose stratum signature is ``(3,)`` decomposes into one or two
horizontal cylinders.  In the one-cylinder case each boundary circle carries
three saddle connections; in the two-cylinder case the narrow cylinder is the
regular one (one saddle connection per boundary circle) and the wide one has
two per circle, with strictly distinct widths.

Two-cylinder surfaces are parametrised by coordinates ``(a, b, h, y, t1, t2)``
with widths ``a < b``, heights ``h, y`` and twists ``t1, t2``:

* cylinder 2 occupies labels ``0 .. b*y-1`` row-major, cylinder 1 the labels
  ``b*y .. b*y + a*h - 1``;
* rows stack straight inside a cylinder and all the shearing sits in the top
  gluing: the top edge over column ``c`` of cylinder ``i`` attaches to
  position ``(c - t_i) mod w_i`` of the receiving circle;
* cylinder 2's bottom circle carries the narrow cylinder's top on positions
  ``[0, a)`` and cylinder 2's own top on positions ``[a, b)``; cylinder 1's
  bottom circle receives the remaining arc of cylinder 2's top.

With these conventions the horizontal shear T keeps all widths and heights
and sends ``t_i`` to ``t_i + h_i (mod w_i)``, and the decomposition below
recovers the coordinates of a built origami exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from .errors import ConsistencyError, ValidationError
from .origami import Origami, commutator, stratum_of


@dataclass(frozen=True, slots=True)
class Cylinder:
    """One horizontal cylinder: width, height, twist, and boundary data."""

    width: int
    height: int
    twist: int
    top_sc_count: int
    bottom_sc_count: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValidationError("cylinder width and height must be positive")
        if not 0 <= self.twist < self.width:
            raise ValidationError("twist must lie in [0, width)")
        if self.top_sc_count < 1 or self.bottom_sc_count < 1:
            raise ValidationError("boundary circles carry at least one saddle connection")

    @property
    def is_regular(self) -> bool:
        return self.top_sc_count == 1 and self.bottom_sc_count == 1

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True, slots=True)
class CylinderDecomposition:
    """Cylinders of a horizontal decomposition, ordered by increasing width."""

    cylinders: tuple[Cylinder, ...]

    def __post_init__(self):
        widths = [c.width for c in self.cylinders]
        if widths != sorted(widths):
            raise ValidationError("cylinders must be ordered by increasing width")
        if len(self.cylinders) == 2 and widths[0] == widths[1]:
            raise ConsistencyError("equal widths cannot occur in a two-cylinder H(2) surface")

    def __len__(self):
        return len(self.cylinders)

    def __iter__(self):
        return iter(self.cylinders)

    def __getitem__(self, i):
        return self.cylinders[i]

    @property
    def area(self) -> int:
        return sum(c.area for c in self.cylinders)

    def as_two_cylinder_coords(self) -> "TwoCylCoords":
        if len(self.cylinders) != 2:
            raise ValidationError("not a two-cylinder decomposition")
        c1, c2 = self.cylinders
        return TwoCylCoords(
            a=c1.width, b=c2.width, h=c1.height, y=c2.height, t1=c1.twist, t2=c2.twist
        )


@dataclass(frozen=True, slots=True)
class TwoCylCoords:
    """Coordinates (a, b, h, y, t1, t2) of a two-cylinder H(2) origami.

    ``a < b`` are the widths, ``h, y`` the heights with ``gcd(h, y) = 1``
    (a common factor would make the surface cover a taller torus), and
    ``t1, t2`` the twists with ``0 <= t_i < w_i``.
    """

    a: int
    b: int
    h: int
    y: int
    t1: int = 0
    t2: int = 0

    def __post_init__(self):
        for name in ("a", "b", "h", "y"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{name} must be positive")
        if not self.a < self.b:
            raise ValidationError(f"a < b violated: a={self.a}, b={self.b}")
        if gcd(self.h, self.y) != 1:
            raise ValidationError(f"gcd(h, y) = 1 violated: h={self.h}, y={self.y}")
        if not 0 <= self.t1 < self.a:
            raise ValidationError(f"0 <= t1 < a violated: t1={self.t1}, a={self.a}")
        if not 0 <= self.t2 < self.b:
            raise ValidationError(f"0 <= t2 < b violated: t2={self.t2}, b={self.b}")

    @property
    def n(self) -> int:
        return self.a * self.h + self.b * self.y

    def to_json(self) -> str:
        import json

        return json.dumps(
            {"a": self.a, "b": self.b, "h": self.h, "y": self.y, "t1": self.t1, "t2": self.t2},
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, text: str) -> "TwoCylCoords":
        import json

        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON for coordinates: {exc}") from None
        if not isinstance(data, dict):
            raise ValidationError("coordinate JSON must be an object")
        try:
            return cls(
                a=int(data["a"]), b=int(data["b"]), h=int(data["h"]), y=int(data["y"]),
                t1=int(data.get("t1", 0)), t2=int(data.get("t2", 0)),
            )
        except KeyError as exc:
            raise ValidationError(f"coordinate JSON missing field {exc}") from None


def build_two_cylinder(c: TwoCylCoords) -> Origami:
    """Origami with the given two-cylinder coordinates, deterministically labeled."""
    a, b, h, y, t1, t2 = c.a, c.b, c.h, c.y, c.t1, c.t2
    n = c.n
    base1 = b * y  # first label of cylinder 1
    sh = [0] * n
    sv = [0] * n
    for r in range(y):
        for col in range(b):
            sh[r * b + col] = r * b + (col + 1) % b
    for r in range(h):
        for col in range(a):
            sh[base1 + r * a + col] = base1 + r * a + (col + 1) % a
    for r in range(y - 1):
        for col in range(b):
            sv[r * b + col] = (r + 1) * b + col
    for r in range(h - 1):
        for col in range(a):
            sv[base1 + r * a + col] = base1 + (r + 1) * a + col
    for col in range(b):
        q = (col - t2) % b
        sv[(y - 1) * b + col] = base1 + q if q < a else q
    for col in range(a):
        sv[base1 + (h - 1) * a + col] = (col - t1) % a
    return Origami(tuple(sh), tuple(sv))


def horizontal_decomposition(o: Origami) -> CylinderDecomposition:
    """Decompose an H(2) origami into its horizontal cylinders.

    Rows are the cycles of ``sigma_h``; consecutive rows belong to the same
    cylinder exactly when ``sigma_v`` maps one onto the other commuting with
    ``sigma_h`` there (no cone point on the circle between them).  Boundary
    saddle connections are counted at the squares whose bottom-left corner
    is the cone point, i.e. the support of the commutator.
    """
    if not stratum_of(o).is_h2:
        raise ValidationError("horizontal_decomposition requires an origami in H(2)")
    h, v = o.sigma_h, o.sigma_v
    n = o.n

    row_id = [-1] * n
    rows: list[list[int]] = []
    for x in range(n):
        if row_id[x] < 0:
            cyc = [x]
            row_id[x] = len(rows)
            z = h[x]
            while z != x:
                row_id[z] = len(rows)
                cyc.append(z)
                z = h[z]
            rows.append(cyc)

    nrows = len(rows)
    rigid = [all(v[h[x]] == h[v[x]] for x in rows[r]) for r in range(nrows)]
    above = [row_id[v[rows[r][0]]] if rigid[r] else -1 for r in range(nrows)]
    is_bottom = [True] * nrows
    for r in range(nrows):
        if rigid[r]:
            is_bottom[above[r]] = False

    chains: list[list[int]] = []
    used = bytearray(nrows)
    for r in range(nrows):
        if is_bottom[r]:
            chain = [r]
            used[r] = 1
            cur = r
            while rigid[cur]:
                cur = above[cur]
                if used[cur]:
                    raise ConsistencyError("cylinder rows form a loop")
                used[cur] = 1
                chain.append(cur)
            chains.append(chain)
    if not all(used):
        raise ConsistencyError("some rows belong to no cylinder chain")

    col = [-1] * n
    for chain in chains:
        base = min(rows[chain[0]])
        col[base] = 0
        z = h[base]
        cnum = 1
        while z != base:
            col[z] = cnum
            cnum += 1
            z = h[z]
        for r in chain[:-1]:
            for x in rows[r]:
                col[v[x]] = col[x]

    comm = commutator(o)
    sing = [comm[x] != x for x in range(n)]

    infos = []
    for chain in chains:
        bottom = rows[chain[0]]
        top = rows[chain[-1]]
        width = len(bottom)
        height = len(chain)
        bottom_sc = sum(1 for x in bottom if sing[x])
        top_sc = sum(1 for x in top if sing[v[x]])
        infos.append((width, height, bottom, top, top_sc, bottom_sc))
    infos.sort(key=lambda t: t[0])

    if len(infos) == 1:
        width, height, bottom, top, top_sc, bottom_sc = infos[0]
        if (top_sc, bottom_sc) != (3, 3):
            raise ConsistencyError("one-cylinder H(2) boundaries must carry 3 saddle connections")
        x0 = next(x for x in top if col[x] == 0)
        twist = col[v[x0]] % width
        cyls = (Cylinder(width, height, twist, top_sc, bottom_sc),)
    elif len(infos) == 2:
        (w1, h1, bot1, top1, t1sc, b1sc), (w2, h2, bot2, top2, t2sc, b2sc) = infos
        if w1 == w2:
            raise ConsistencyError("equal widths cannot occur in a two-cylinder H(2) surface")
        if (t1sc, b1sc, t2sc, b2sc) != (1, 1, 2, 2):
            raise ConsistencyError("two-cylinder H(2) boundary profile must be ((1,1),(2,2))")
        in_bot1 = set(bot1)
        in_bot2 = set(bot2)
        # The wide cylinder's bottom circle splits at its two cone-point
        # corners into the arc receiving the narrow cylinder's top (length
        # w1) and the arc receiving the wide cylinder's own top.  The
        # receiving arc may wrap past column 0, so twists are read off
        # relative to the arc's starting corner.
        corners = sorted(col[x] for x in bot2 if sing[x])
        if len(corners) != 2:
            raise ConsistencyError("wide cylinder bottom must carry two cone-point corners")
        targets1 = {col[v[x]] for x in top1 if v[x] in in_bot2}
        if len(targets1) != w1:
            raise ConsistencyError("narrow cylinder must glue onto the wide one")
        start = next(
            (s for s in corners if targets1 == {(s + i) % w2 for i in range(w1)}), None
        )
        if start is None:
            raise ConsistencyError("narrow cylinder top does not fill a boundary arc")
        t1_vals = {(col[x] - (col[v[x]] - start) % w2) % w1 for x in top1}
        t2_vals = set()
        narrow_arc = 0
        for x in top2:
            tgt = v[x]
            if tgt in in_bot2:
                t2_vals.add((col[x] - col[tgt]) % w2)
            elif tgt in in_bot1:
                narrow_arc += 1
            else:
                raise ConsistencyError("wide cylinder top must glue onto the two bottoms")
        if len(t1_vals) != 1 or len(t2_vals) != 1 or narrow_arc != w1:
            raise ConsistencyError("boundary gluing is not the two-cylinder H(2) pattern")
        cyls = (
            Cylinder(w1, h1, t1_vals.pop(), t1sc, b1sc),
            Cylinder(w2, h2, t2_vals.pop(), t2sc, b2sc),
        )
    else:
        raise ConsistencyError("an H(2) origami has one or two horizontal cylinders")

    dec = CylinderDecomposition(cyls)
    if dec.area != n:
        raise ConsistencyError("cylinder areas do not add up to the number of squares")
    return dec


def regular_cylinders(d: CylinderDecomposition) -> tuple[Cylinder, ...]:
    """Cylinders whose two boundary circles each carry a single saddle connection."""
    return tuple(c for c in d if c.is_regular)


def cusp_width_formula(c) -> int:
    """Cusp width of a two-cylinder surface from its coordinates.

    ``lcm(a / gcd(a, h), b / gcd(b, y))``; for prime total area the two
    factors are coprime and the lcm is their product.  Works on any object
    with fields ``a, b, h, y``.

    >>> cusp_width_formula(TwoCylCoords(a=1, b=2, h=3, y=1))
    2
    >>> cusp_width_formula(TwoCylCoords(a=2, b=3, h=1, y=1))
    6
    """
    return lcm(c.a // gcd(c.a, c.h), c.b // gcd(c.b, c.y))


def canonical_cusp_rep(c: TwoCylCoords) -> TwoCylCoords:
    """Reduce each twist modulo gcd(width, height); canonical in the U-orbit."""
    return TwoCylCoords(
        a=c.a, b=c.b, h=c.h, y=c.y,
        t1=c.t1 % gcd(c.a, c.h), t2=c.t2 % gcd(c.b, c.y),
    )
