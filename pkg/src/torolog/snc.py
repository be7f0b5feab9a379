"""Stratum reports for simple normal crossing models.

A :class:`DualComplex` records which divisor components meet: one vertex per
component, one simplex per nonempty intersection, closed under subsets, with
at most ``ambient_dim`` components through any point.  Intersections with
several connected components are entered by repeating the simplex.  The local
model at a depth-k stratum is the free monoid on k generators, so link fibers
come from :func:`~torolog.rounding.fiber_structure` and Milnor-type fibers
from :func:`~torolog.rounding.milnor_stratum_fiber` applied to the restricted
multiplicities.
"""

from dataclasses import dataclass

from .monoids import ToricMonoid, edge
from .rounding import FiberReport, fiber_structure, milnor_stratum_fiber

__all__ = [
    "DualComplex",
    "MilnorReport",
    "StratumRow",
    "link_report",
    "milnor_report",
]


class DualComplex:
    """The intersection combinatorics of a normal crossing divisor."""

    __slots__ = ("ambient_dim", "vertex_count", "simplices", "multiplicities")

    def __init__(
        self,
        ambient_dim: int,
        vertex_count: int,
        simplices,
        multiplicities=None,
        complete: bool = False,
    ):
        ambient_dim = int(ambient_dim)
        vertex_count = int(vertex_count)
        if ambient_dim < 0 or vertex_count < 0:
            raise ValueError("dimensions and vertex counts are nonnegative")

        cleaned = []
        for s in simplices:
            s = tuple(int(v) for v in s)
            if not s:
                raise ValueError("simplices must be nonempty")
            if len(set(s)) != len(s):
                raise ValueError(f"simplex {s} repeats a vertex")
            if any(v < 0 or v >= vertex_count for v in s):
                raise ValueError(f"simplex {s} uses an unknown vertex")
            s = tuple(sorted(s))
            if len(s) > ambient_dim:
                raise ValueError(
                    f"simplex {s} exceeds the ambient dimension {ambient_dim}"
                )
            cleaned.append(s)

        present = set(cleaned)
        if complete:
            for s in list(present):
                for sub in _proper_subsets(s):
                    if sub not in present:
                        present.add(sub)
                        cleaned.append(sub)
            for v in range(vertex_count):
                if (v,) not in present:
                    present.add((v,))
                    cleaned.append((v,))
        else:
            for s in present:
                for sub in _proper_subsets(s):
                    if sub not in present:
                        raise ValueError(
                            f"simplex {s} is present but its face {sub} is "
                            "missing"
                        )
            for v in range(vertex_count):
                if (v,) not in present:
                    raise ValueError(f"vertex {v} has no singleton simplex")

        if multiplicities is not None:
            multiplicities = tuple(int(m) for m in multiplicities)
            if len(multiplicities) != vertex_count:
                raise ValueError("one multiplicity per vertex is required")
            if any(m < 1 for m in multiplicities):
                raise ValueError("multiplicities must be positive")

        self.ambient_dim = ambient_dim
        self.vertex_count = vertex_count
        self.simplices = tuple(sorted(cleaned, key=lambda s: (len(s), s)))
        self.multiplicities = multiplicities

    def __eq__(self, other):
        if not isinstance(other, DualComplex):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.vertex_count == other.vertex_count
            and self.simplices == other.simplices
            and self.multiplicities == other.multiplicities
        )

    def __hash__(self):
        return hash(
            (
                self.ambient_dim,
                self.vertex_count,
                self.simplices,
                self.multiplicities,
            )
        )

    def __repr__(self):
        return (
            f"DualComplex({self.ambient_dim}, {self.vertex_count}, "
            f"{self.simplices!r}, multiplicities={self.multiplicities!r})"
        )


def _proper_subsets(s):
    out = []
    for mask in range(1, 1 << len(s)):
        sub = tuple(s[i] for i in range(len(s)) if mask >> i & 1)
        if len(sub) < len(s):
            out.append(sub)
    return out


@dataclass(frozen=True)
class StratumRow:
    simplex: tuple
    stratum_dimension: int
    fiber: FiberReport


@dataclass(frozen=True)
class MilnorReport:
    rows: tuple
    components_by_depth: tuple


def _local_model(k: int) -> ToricMonoid:
    return ToricMonoid(
        k, tuple(tuple(int(i == j) for j in range(k)) for i in range(k))
    )


def link_report(dc: DualComplex) -> tuple:
    """One row per simplex: the boundary-torus fiber of the local model.

    A depth-k stratum carries the free local model on k generators, so its
    fiber is a single torus of rank k over a stratum of complex dimension
    ``ambient_dim - k``.
    """
    rows = []
    for s in dc.simplices:
        k = len(s)
        model = _local_model(k)
        rows.append(
            StratumRow(s, dc.ambient_dim - k, fiber_structure(model, edge(model)))
        )
    return tuple(rows)


def milnor_report(dc: DualComplex) -> MilnorReport:
    """One row per simplex: the fiber of the multiplicity map on the stratum.

    Each simplex restricts the vertex multiplicities, giving a union of
    ``gcd`` tori of rank one less than the depth; the summary totals the
    component counts at each depth.
    """
    if dc.multiplicities is None:
        raise ValueError("the complex carries no multiplicities")
    rows = []
    totals = {}
    for s in dc.simplices:
        fiber = milnor_stratum_fiber(tuple(dc.multiplicities[v] for v in s))
        rows.append(StratumRow(s, dc.ambient_dim - len(s), fiber))
        totals[len(s)] = totals.get(len(s), 0) + fiber.components
    return MilnorReport(tuple(rows), tuple(sorted(totals.items())))
