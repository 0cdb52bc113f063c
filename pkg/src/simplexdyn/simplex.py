"""Metric model of tetrahedra, cyclic quadrilaterals and triangles on the unit sphere.

Edge labeling is fixed by the rows of the Cayley-Menger matrix (A, B, C, D)::

    d12 = AB^2 = c^2     d13 = AC^2 = b^2     d14 = AD^2 = a'^2
    d23 = BC^2 = a^2     d24 = BD^2 = b'^2    d34 = CD^2 = c'^2

Opposite edges are (d12, d34), (d13, d24), (d14, d23).  For quadrilaterals
the vertices are in convex cyclic order, so d13 and d24 are the diagonals.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf

from .errors import InvalidConfiguration, NonPositiveG, NotUnitCircumradius
from .numerics import PrecisionPolicy, det, norm2, resolve, sub

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_NAMES = ("d12", "d13", "d14", "d23", "d24", "d34")
# index pairs into EdgeParams.values
OPPOSITE = ((0, 5), (1, 4), (2, 3))


@dataclass(frozen=True)
class EdgeParams:
    d12: mpf
    d13: mpf
    d14: mpf
    d23: mpf
    d24: mpf
    d34: mpf

    @classmethod
    def from_sequence(cls, values: Iterable, policy: PrecisionPolicy | None = None) -> EdgeParams:
        policy = resolve(policy)
        vals = [policy.real(v) for v in values]
        if len(vals) != 6:
            raise InvalidConfiguration(f"expected 6 squared edge lengths, got {len(vals)}")
        return cls(*vals)

    @property
    def values(self) -> tuple:
        return (self.d12, self.d13, self.d14, self.d23, self.d24, self.d34)

    def __getitem__(self, key: str) -> mpf:
        return getattr(self, key)

    def pairs(self) -> tuple:
        v = self.values
        return tuple((v[i], v[j]) for i, j in OPPOSITE)

    def products(self) -> tuple:
        """(d12*d34, d13*d24, d14*d23)."""
        return tuple(x * y for x, y in self.pairs())

    def validate(self, policy: PrecisionPolicy | None = None) -> EdgeParams:
        """Check sign, unit-circumradius constraint and realizability; return self."""
        policy = resolve(policy)
        tol = policy.tolerance
        with policy.context():
            if any(v < 0 for v in self.values) or all(v == 0 for v in self.values):
                raise InvalidConfiguration("squared edge lengths must be nonnegative and not all zero")
            res = unit_radius_residual(self, policy)
            if abs(res) > tol:
                raise NotUnitCircumradius(f"circumradius constraint violated (residual {mpmath.nstr(res, 5)})")
            if not realizable(self.values, policy):
                raise InvalidConfiguration("edge lengths are not realizable by a tetrahedron")
        return self


@dataclass(frozen=True)
class VertexConfig:
    """Ordered points on the unit sphere of R^dim; the circumcenter is the origin.

    ``drift`` is the largest radial correction applied when the configuration
    was produced by a step of the vertex map (zero for user input).
    """

    vertices: tuple
    drift: mpf = field(default=mpf(0), compare=False)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def __len__(self):
        return len(self.vertices)

    def centroid(self, policy: PrecisionPolicy | None = None) -> tuple:
        policy = resolve(policy)
        n = len(self.vertices)
        with policy.context():
            return tuple(mpmath.fsum(col) / n for col in zip(*self.vertices))

    @classmethod
    def from_points(
        cls,
        points: Sequence[Sequence],
        policy: PrecisionPolicy | None = None,
        normalize: bool = False,
    ) -> VertexConfig:
        """Build and validate a configuration.

        Four planar points are sorted by polar angle so that the labeling is
        convex-cyclic.  With ``normalize`` each point is projected radially
        onto the sphere first (for inputs given to limited decimal precision).
        """
        policy = resolve(policy)
        with policy.context():
            pts = [tuple(mpf(x) for x in p) for p in points]
            if len(pts) < 2 or len({len(p) for p in pts}) != 1 or len(pts[0]) < 2:
                raise InvalidConfiguration("need at least two points of a common dimension >= 2")
            if normalize:
                out = []
                for p in pts:
                    r = mpmath.sqrt(norm2(p))
                    if r == 0:
                        raise InvalidConfiguration("cannot project the origin onto the sphere")
                    out.append(tuple(x / r for x in p))
                pts = out
            if len(pts[0]) == 2 and len(pts) == 4:
                pts.sort(key=lambda p: mpmath.atan2(p[1], p[0]) % (2 * mpmath.pi))
            cfg = cls(tuple(pts))
        return cfg.validate(policy)

    def validate(self, policy: PrecisionPolicy | None = None) -> VertexConfig:
        policy = resolve(policy)
        tol = policy.tolerance
        with policy.context():
            for v in self.vertices:
                if abs(mpmath.sqrt(norm2(v)) - 1) > tol:
                    raise InvalidConfiguration("vertex not on the unit sphere")
            first = self.vertices[0]
            if all(norm2(sub(v, first)) <= tol ** 2 for v in self.vertices[1:]):
                raise InvalidConfiguration("all vertices coincide")
        return self


@dataclass(frozen=True)
class TriangleParams:
    """Symmetric functions of the squared sides of a triangle with circumradius 1."""

    s: mpf
    t: mpf
    u: mpf

    @classmethod
    def from_st(cls, s, t, policy: PrecisionPolicy | None = None) -> TriangleParams:
        policy = resolve(policy)
        with policy.context():
            s, t = mpf(s), mpf(t)
            return cls(s, t, 4 * t - s * s)

    @property
    def values(self) -> tuple:
        return (self.s, self.t, self.u)

    def og_squared(self) -> mpf:
        return 1 - self.s / 9

    def validate(self, policy: PrecisionPolicy | None = None) -> TriangleParams:
        # Flat triangles (u = 0, t = s^2/4) are admitted: the map is defined there.
        policy = resolve(policy)
        tol = policy.tolerance
        with policy.context():
            s, t, u = self.values
            if abs(u - (4 * t - s * s)) > tol:
                raise NotUnitCircumradius("u != 4t - s^2")
            if not (0 < s <= 9 + tol):
                raise InvalidConfiguration(f"s = {mpmath.nstr(s, 8)} outside (0, 9]")
            if not (s * s / 4 - tol <= t <= s * s / 3 + tol):
                raise InvalidConfiguration("t outside [s^2/4, s^2/3]")
        return self


@dataclass(frozen=True)
class CentroidData:
    g1: mpf
    g2: mpf
    g3: mpf
    g4: mpf
    p0: mpf
    og2: mpf

    @property
    def g(self) -> tuple:
        return (self.g1, self.g2, self.g3, self.g4)


class ShapeClass(enum.Enum):
    ISOSCELES = "isosceles"
    RECTANGLE = "rectangle"
    GENERIC = "generic"


def params_from_vertices(c: VertexConfig, policy: PrecisionPolicy | None = None) -> EdgeParams:
    if len(c.vertices) != 4:
        raise InvalidConfiguration("edge parameters need exactly four vertices")
    policy = resolve(policy)
    v = c.vertices
    with policy.context():
        return EdgeParams(*(norm2(sub(v[i], v[j])) for i, j in EDGES))


def og_squared(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    with resolve(policy).context():
        return 1 - mpmath.fsum(p.values) / 16


def centroid_distances(p: EdgeParams, policy: PrecisionPolicy | None = None) -> CentroidData:
    """Squared distances from the centroid to each vertex.

    For vertex i: 3/16 of the three edges at i minus 1/16 of the three edges
    of the opposite face.
    """
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        total = mpmath.fsum(p.values)
        g = []
        for i in range(4):
            at = mpmath.fsum(d for d, e in zip(p.values, EDGES) if i in e)
            g.append((3 * at - (total - at)) / 16)
        if any(gi <= tol for gi in g):
            raise NonPositiveG("a vertex coincides with the centroid")
        p0 = mpmath.fsum(g) / 4
        return CentroidData(*g, p0=p0, og2=1 - p0)


def _cm_rows(p: EdgeParams) -> list:
    d12, d13, d14, d23, d24, d34 = p.values
    return [
        [0, d12, d13, d14],
        [d12, 0, d23, d24],
        [d13, d23, 0, d34],
        [d14, d24, d34, 0],
    ]


def cayley_menger_matrix(p: EdgeParams, corner=0) -> list:
    rows = [[corner, 1, 1, 1, 1]]
    rows += [[1] + r for r in _cm_rows(p)]
    return rows


def gamma(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    """Bordered Cayley-Menger determinant, 288 V^2."""
    return det(cayley_menger_matrix(p), policy)


def delta(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    return det(_cm_rows(p), policy)


def unit_radius_residual(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    """Bordered determinant with corner 1/2; zero iff the circumradius is 1."""
    policy = resolve(policy)
    with policy.context():
        return det(cayley_menger_matrix(p, corner=mpf(1) / 2), policy)


def ptolemy(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    """Pt = -Delta, via the square-root-free degree-8 polynomial."""
    with resolve(policy).context():
        x, y, z = p.products()
        return 2 * (x * y + y * z + z * x) - x * x - y * y - z * z


def ptolemy_product(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    with resolve(policy).context():
        aa, bb, cc = _root_products(p)
        return (bb + cc - aa) * (cc + aa - bb) * (aa + bb - cc) * (aa + bb + cc)


def _root_products(p: EdgeParams) -> tuple:
    """(aa', bb', cc') in the labeling of the module docstring."""
    return (mpmath.sqrt(p.d23 * p.d14), mpmath.sqrt(p.d13 * p.d24), mpmath.sqrt(p.d12 * p.d34))


def opposite_root_sum(p: EdgeParams, policy: PrecisionPolicy | None = None) -> mpf:
    """aa' + bb' + cc' (at most 8 on the unit sphere)."""
    with resolve(policy).context():
        return mpmath.fsum(_root_products(p))


def face_area_term(a2, b2, c2) -> mpf:
    """16 S^2 for a triangle with squared sides a2, b2, c2."""
    return 2 * (a2 * b2 + b2 * c2 + c2 * a2) - a2 * a2 - b2 * b2 - c2 * c2


def realizable(d: Sequence, policy: PrecisionPolicy | None = None) -> bool:
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        p = d if isinstance(d, EdgeParams) else EdgeParams(*(mpf(x) for x in d))
        if any(v < 0 for v in p.values):
            return False
        faces = ((p.d12, p.d13, p.d23), (p.d12, p.d14, p.d24), (p.d13, p.d14, p.d34), (p.d23, p.d24, p.d34))
        if any(face_area_term(*f) < -tol for f in faces):
            return False
        return gamma(p, policy) >= -tol


def shape_class(p: EdgeParams, policy: PrecisionPolicy | None = None) -> ShapeClass:
    policy = resolve(policy)
    tol = policy.tolerance
    with policy.context():
        if any(abs(x - y) > tol for x, y in p.pairs()):
            return ShapeClass.GENERIC
        return ShapeClass.ISOSCELES if gamma(p, policy) > tol else ShapeClass.RECTANGLE


def triangle_params(a2, b2, c2, policy: PrecisionPolicy | None = None) -> TriangleParams:
    policy = resolve(policy)
    with policy.context():
        a2, b2, c2 = mpf(a2), mpf(b2), mpf(c2)
        s = a2 + b2 + c2
        t = a2 * b2 + b2 * c2 + c2 * a2
        u = a2 * b2 * c2
        if abs(u - (4 * t - s * s)) > policy.tolerance:
            raise NotUnitCircumradius("squared sides do not fit a triangle of circumradius 1")
        return TriangleParams(s, t, u)


def triangle_params_from_vertices(c: VertexConfig, policy: PrecisionPolicy | None = None) -> TriangleParams:
    if len(c.vertices) != 3:
        raise InvalidConfiguration("triangle parameters need exactly three vertices")
    policy = resolve(policy)
    A, B, C = c.vertices
    with policy.context():
        return triangle_params(norm2(sub(B, C)), norm2(sub(C, A)), norm2(sub(A, B)), policy)

