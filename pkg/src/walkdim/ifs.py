"""Equal-ratio, rotation-free iterated function systems on rational points.

A gasket system is a list of similitudes x -> ratio*x + t sharing one
contraction ratio, plus a declared boundary vertex set V0.  Validation
checks the structural properties that the rest of the package relies on
(finite ramification, connectivity); dimensions come out as exact
LogRatio values.
"""

from __future__ import annotations

import functools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from ._geometry import Point, convex_hull, hull_intersection, point_in_hull
from .errors import ValidationError
from .logratio import LogRatio
from .rational import as_fraction, format_rational

# Boundary points are accepted when fixed by some composition of at most
# this many maps; covers every shipped preset at length 1.
_BOUNDARY_WORD_DEPTH = 3


@dataclass(frozen=True)
class Similitude:
    """The map x -> ratio*x + translation, with 0 < ratio < 1."""

    ratio: Fraction
    translation: Point

    def __post_init__(self):
        ratio = as_fraction(self.ratio)
        tx, ty = self.translation
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(
            self, "translation", (as_fraction(tx), as_fraction(ty))
        )
        if not (0 < self.ratio < 1):
            raise ValueError("similitude ratio must lie in (0, 1)")

    def apply(self, p: Point) -> Point:
        return (
            self.ratio * p[0] + self.translation[0],
            self.ratio * p[1] + self.translation[1],
        )

    def fixed_point(self) -> Point:
        s = 1 - self.ratio
        return (self.translation[0] / s, self.translation[1] / s)

    def after(self, inner: "Similitude") -> "Similitude":
        """self o inner as a single similitude."""
        return Similitude(
            self.ratio * inner.ratio,
            (
                self.ratio * inner.translation[0] + self.translation[0],
                self.ratio * inner.translation[1] + self.translation[1],
            ),
        )

    def to_json(self) -> dict:
        return {
            "ratio": format_rational(self.ratio),
            "translate": [
                format_rational(self.translation[0]),
                format_rational(self.translation[1]),
            ],
        }


@dataclass(frozen=True)
class IfsSpec:
    name: str
    maps: tuple[Similitude, ...]
    boundary: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(
            self,
            "boundary",
            tuple((as_fraction(x), as_fraction(y)) for x, y in self.boundary),
        )

    @property
    def ratio(self) -> Fraction:
        return self.maps[0].ratio

    @property
    def map_count(self) -> int:
        return len(self.maps)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "maps": [m.to_json() for m in self.maps],
            "boundary": [
                [format_rational(x), format_rational(y)]
                for x, y in self.boundary
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "IfsSpec":
        maps = tuple(
            Similitude(
                as_fraction(m["ratio"]),
                (as_fraction(m["translate"][0]), as_fraction(m["translate"][1])),
            )
            for m in data["maps"]
        )
        boundary = tuple(
            (as_fraction(p[0]), as_fraction(p[1])) for p in data["boundary"]
        )
        return IfsSpec(str(data.get("name", "unnamed")), maps, boundary)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[Check, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def attractor_hull(ifs: IfsSpec) -> list[Point]:
    """Convex hull of the attractor.

    For rotation-free equal-ratio systems the support function satisfies
    h(u) = ratio*h(u) + max_i <t_i, u>, so the hull is the convex hull of
    the maps' fixed points (boundary points are included for safety; for
    a consistent system they are attractor points anyway).
    """
    pts = [m.fixed_point() for m in ifs.maps]
    pts.extend(ifs.boundary)
    return convex_hull(pts)


def _boundary_is_word_fixed_point(ifs: IfsSpec, p: Point) -> bool:
    """Is p the fixed point of some composition of <= _BOUNDARY_WORD_DEPTH maps?"""
    frontier = list(ifs.maps)
    for _ in range(_BOUNDARY_WORD_DEPTH):
        if any(m.fixed_point() == p for m in frontier):
            return True
        frontier = [m.after(inner) for m in frontier for inner in ifs.maps]
        if len(frontier) > 20000:
            break
    return False


def validate(ifs: IfsSpec) -> ValidationReport:
    """Structural checks for gasket-type systems; never raises."""
    checks: list[Check] = []

    n = len(ifs.maps)
    checks.append(
        Check("map-count", n >= 2, "" if n >= 2 else f"need N >= 2 maps, got {n}")
    )

    ratios = {m.ratio for m in ifs.maps}
    if len(ratios) == 1:
        checks.append(Check("equal-ratio", True))
    else:
        bad = [i for i, m in enumerate(ifs.maps) if m.ratio != ifs.maps[0].ratio]
        checks.append(
            Check(
                "equal-ratio",
                False,
                f"maps {bad} differ from map 0 ratio {format_rational(ifs.maps[0].ratio)}",
            )
        )

    k = len(ifs.boundary)
    distinct = len(set(ifs.boundary)) == k
    checks.append(
        Check(
            "boundary-distinct",
            k >= 2 and distinct,
            "" if k >= 2 and distinct else f"need >= 2 distinct boundary points, got {k}",
        )
    )

    if n >= 2 and len(ratios) == 1 and k >= 2 and distinct:
        bad_pts = [
            i
            for i, p in enumerate(ifs.boundary)
            if not _boundary_is_word_fixed_point(ifs, p)
        ]
        checks.append(
            Check(
                "boundary-fixed-point",
                not bad_pts,
                "" if not bad_pts else f"boundary vertices {bad_pts} fix no map word",
            )
        )

        hull = attractor_hull(ifs)
        cell_hulls = [[m.apply(p) for p in hull] for m in ifs.maps]
        cell_boundary = [frozenset(m.apply(p) for p in ifs.boundary) for m in ifs.maps]
        ram_bad: list[str] = []
        adjacency: dict[int, set[int]] = {i: set() for i in range(n)}
        for i in range(n):
            for j in range(i + 1, n):
                inter = hull_intersection(cell_hulls[i], cell_hulls[j])
                if inter.kind == "empty":
                    continue
                adjacency[i].add(j)
                adjacency[j].add(i)
                if not inter.is_finite:
                    ram_bad.append(f"cells ({i},{j}) share a {inter.kind}")
                    continue
                w = inter.witnesses[0]
                if w not in cell_boundary[i] or w not in cell_boundary[j]:
                    ram_bad.append(
                        f"cells ({i},{j}) meet at a non-boundary image point"
                    )
        checks.append(
            Check("finite-ramification", not ram_bad, "; ".join(ram_bad[:8]))
        )

        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        connected = len(seen) == n
        checks.append(
            Check(
                "level1-connected",
                connected,
                "" if connected else f"cell graph splits; reached only {sorted(seen)}",
            )
        )

    return ValidationReport(tuple(checks))


@functools.lru_cache(maxsize=256)
def _validate_cached(ifs: IfsSpec) -> ValidationReport:
    return validate(ifs)


def ensure_valid(ifs: IfsSpec) -> None:
    report = _validate_cached(ifs)
    if not report.ok:
        names = ", ".join(c.name for c in report.failures)
        raise ValidationError(f"system {ifs.name!r} failed checks: {names}")


def hausdorff_dim(ifs: IfsSpec) -> LogRatio:
    """log(N)/log(1/ratio), exact."""
    ensure_valid(ifs)
    return LogRatio(Fraction(len(ifs.maps)), 1 / ifs.ratio)


def compose(outer: IfsSpec, inner: IfsSpec) -> IfsSpec:
    """The system {outer_i o inner_j}; same boundary, ratio product."""
    ensure_valid(outer)
    ensure_valid(inner)
    if outer.boundary != inner.boundary:
        raise ValidationError(
            "cannot compose systems with different boundary vertex sets"
        )
    maps = tuple(o.after(i) for o in outer.maps for i in inner.maps)
    return IfsSpec(f"{outer.name}.{inner.name}", maps, outer.boundary)


@dataclass(frozen=True)
class MeasureSample:
    """Points F_w(x0) for uniform random words w; the empirical picture
    of the normalized self-similar (Hausdorff) measure."""

    points: tuple[Point, ...]
    depth: int
    seed: int

    @property
    def weight(self) -> Fraction:
        return Fraction(1, len(self.points))

    def float_points(self):
        import numpy as np

        return np.array([[float(x), float(y)] for x, y in self.points])


def sample_measure(
    ifs: IfsSpec, depth: int, count: int, seed: int = 42
) -> MeasureSample:
    """count i.i.d. points F_{w1} o ... o F_{w_depth}(x0), x0 = first
    boundary vertex, digits uniform; deterministic in seed."""
    ensure_valid(ifs)
    if depth < 1 or count < 1:
        raise ValueError("depth and count must be >= 1")
    rng = random.Random(seed)
    n = len(ifs.maps)
    x0 = ifs.boundary[0]
    pts: list[Point] = []
    for _ in range(count):
        word = [rng.randrange(n) for _ in range(depth)]
        x = x0
        for digit in reversed(word):
            x = ifs.maps[digit].apply(x)
        pts.append(x)
    return MeasureSample(tuple(pts), depth, seed)


def resolution_depth(ifs: IfsSpec, epsilon: Fraction = Fraction(1, 1024)) -> int:
    """Smallest m with ratio^m <= epsilon."""
    m = 0
    scale = Fraction(1)
    while scale > epsilon:
        scale *= ifs.ratio
        m += 1
    return m


def preset(name: str) -> IfsSpec:
    try:
        factory = _PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(_PRESETS))}"
        ) from None
    return factory()


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def _make_sg() -> IfsSpec:
    h = Fraction(1, 2)
    return IfsSpec(
        "sg",
        (
            Similitude(h, (Fraction(0), Fraction(0))),
            Similitude(h, (h, Fraction(0))),
            Similitude(h, (Fraction(0), h)),
        ),
        ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
    )


def _make_segment() -> IfsSpec:
    h = Fraction(1, 2)
    return IfsSpec(
        "segment",
        (
            Similitude(h, (Fraction(0), Fraction(0))),
            Similitude(h, (h, Fraction(0))),
        ),
        ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
    )


_PRESETS = {"sg": _make_sg, "segment": _make_segment}


def load_system(source: str) -> IfsSpec:
    """Resolve a preset name or a JSON config path to an IfsSpec."""
    if source in _PRESETS:
        return preset(source)
    with open(source, "r", encoding="utf-8") as fh:
        return IfsSpec.from_json(json.load(fh))


def contains_point_level(ifs: IfsSpec, p: Point, m: int) -> bool:
    """Is p inside some level-m cell hull? (Coarse attractor membership.)"""
    hull = attractor_hull(ifs)
    cells = [hull]
    for _ in range(m):
        cells = [[mp.apply(q) for q in cell] for mp in ifs.maps for cell in cells]
    return any(point_in_hull(p, cell) for cell in cells)
