"""Constructive perturbations of non-expansive self-maps of a convex body.

Three building blocks:

* ``flat_collapse`` — pinch a ball B(x0, delta) to its centre while
  leaving everything outside B(x0, r) alone; costs at most delta in the
  sup metric and 1 + delta/(r - delta) in the Lipschitz constant.

* ``direction_field`` — a unit direction e_z for every z in the body such
  that the whole segment [z, z + (s/3) e_z] stays inside the body.  Built
  from a fixed far pair (v, w) with ||w - v|| > 2s/3: aim at v when z is
  at least s/3 away from it, otherwise aim at w.

* ``bump_perturb`` — given a non-expansive base map f, an s-separated net
  and a budget eps, produce a non-expansive g with sup-distance at most
  eps from f that is an exact isometry towards each net point x on the
  ball B(x, rho):  ||g(y) - g(x)|| = ||y - x||  for ||y - x|| <= rho.

  The composite first collapses B(x, r) to x for every net point
  (r = s/2, collapse radius delta = eps r / (3 (1 + diam C))), then
  contracts towards the body centre by 1 - delta/r so that slack opens up
  around every value, and finally plants a radial tent of height delta at
  each net point along a direction the field guarantees to be admissible.
  The bump radius is rho = delta/2 = eps s / (12 (1 + diam C)).

``bump_witnesses`` turns the isometry into a stable certificate: probe
points y_x at distance eps s / (24 (1 + diam C)) from each net point
witness a difference quotient above 1 - 48 beta (1 + diam C)/s >= (1+lam)/2
for every map within beta = (1-lam) s / (96 (1 + diam C)) * eps of g.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GeometryError, ParameterError
from .maps import AffineContraction, Compose, FlatCollapse, MapExpr, Tent
from .space import ConvexBody, Net, Norm, as_point, segment_point


@dataclass(frozen=True, eq=False)
class FlatSpec:
    """Collapse parameters: centre, inner radius delta, outer radius r."""

    center: np.ndarray
    delta: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not (0.0 < self.delta < self.r):
            raise ParameterError(
                f"flat collapse needs 0 < delta < r, got delta={self.delta}, r={self.r}"
            )


def flat_collapse(spec: FlatSpec, body: ConvexBody, norm: Norm) -> FlatCollapse:
    """Single-centre collapse map as an expression node."""
    if not body.contains(spec.center, tol=1e-9):
        raise DomainError("collapse centre lies outside the body")
    return FlatCollapse(spec.center[None, :], spec.delta, spec.r, norm)


@dataclass(frozen=True, eq=False)
class DirectionField:
    """Two-anchor unit direction field with inward segments of length s/3."""

    v: np.ndarray
    w: np.ndarray
    s: float
    norm: Norm

    def __post_init__(self):
        object.__setattr__(self, "v", as_point(self.v))
        object.__setattr__(self, "w", as_point(self.w))
        gap = float(self.norm.of(self.w - self.v))
        if not gap > 2.0 * self.s / 3.0:
            raise GeometryError(
                f"anchors too close: ||w - v|| = {gap} <= 2s/3 = {2 * self.s / 3}"
            )

    def __call__(self, z) -> np.ndarray:
        z = as_point(z)
        dv = float(self.norm.of(self.v - z))
        if dv >= self.s / 3.0:
            return (self.v - z) / dv
        dw = float(self.norm.of(self.w - z))
        return (self.w - z) / dw

    def segment_inside(self, body: ConvexBody, z, checks: int = 20,
                       tol: float = 1e-9) -> bool:
        """Does [z, z + (s/3) e_z] stay inside the body (checked pointwise)?"""
        z = as_point(z)
        tip = z + (self.s / 3.0) * self(z)
        for t in np.linspace(0.0, 1.0, checks):
            if not body.contains(segment_point(z, tip, float(t)), tol):
                return False
        return True


def direction_field(body: ConvexBody, norm: Norm, s: float,
                    v=None, w=None) -> DirectionField:
    """Direction field on the body; anchors default to a diameter-realising pair."""
    if not (s > 0.0):
        raise ParameterError("field scale s must be positive")
    if (v is None) != (w is None):
        raise ParameterError("give both anchors or neither")
    if v is None:
        ext = body.extreme_points()
        best, pair = -1.0, None
        for i in range(ext.shape[0] - 1):
            d = norm.of(ext[i + 1:] - ext[i], axis=1)
            j = int(np.argmax(d))
            if float(d[j]) > best:
                best, pair = float(d[j]), (ext[i], ext[i + 1 + j])
        if pair is None or not best > 2.0 * s / 3.0:
            raise GeometryError("no admissible far pair among extreme points")
        v, w = pair
    return DirectionField(v, w, s, norm)


@dataclass(frozen=True, eq=False)
class BumpSpec:
    """Everything needed to plant isometric bumps at the points of a net."""

    base: MapExpr
    net: Net
    s: float
    eps: float
    anchor: np.ndarray
    diam: float
    r: float
    delta: float
    rho: float

    @classmethod
    def create(cls, base: MapExpr, net: Net, s: float, eps: float,
               body: ConvexBody, norm: Norm) -> "BumpSpec":
        if not (0.0 < s < 1.0):
            raise ParameterError(f"net scale must satisfy 0 < s < 1, got {s}")
        if not (0.0 < eps < 1.0):
            raise ParameterError(f"budget must satisfy 0 < eps < 1, got {eps}")
        if len(net) < 2:
            raise ParameterError("bump net needs at least two points")
        if abs(net.s - s) > 1e-12 or not net.check_separated(norm, tol=1e-12):
            raise ParameterError("net is not s-separated for the requested s")
        if base.certificate > 1.0 + 1e-12:
            raise ParameterError(
                f"base map certificate {base.certificate} exceeds 1: not non-expansive"
            )
        diam = body.diameter(norm)
        anchor = body.center
        if not body.contains(anchor, tol=1e-9):
            raise DomainError("body centre escaped the body")
        r = 0.5 * s
        delta = eps * r / (3.0 * (1.0 + diam))
        rho = 0.5 * delta     # equals eps*s/(12(1+diam)) since r = s/2
        return cls(base, net, s, eps, anchor, diam, r, delta, rho)


def bump_perturb(spec: BumpSpec, body: ConvexBody, norm: Norm) -> MapExpr:
    """Non-expansive perturbation of the base map with isometric bumps.

    Stage 1 collapses B(x, r) to x at every net point x and feeds the result
    to the base map; stage 2 contracts by 1 - delta/r towards the body
    centre; stage 3 plants a tent of height delta at each net point along
    the direction field evaluated at the stage-2 value of x.
    """
    pts = spec.net.points
    collapse = FlatCollapse(pts, spec.delta, spec.r, norm)
    g0 = Compose(spec.base, collapse)
    g1 = Compose(AffineContraction(1.0 - spec.delta / spec.r, spec.anchor), g0)
    field = direction_field(body, norm, spec.s)
    apexes = g1(pts)
    dirs = np.array([field(a) for a in apexes])
    for a, u in zip(apexes, dirs):
        # the tent needs room of height delta above each apex; the field
        # guarantees a segment of length s/3 > delta
        if not body.contains(a + spec.delta * u, tol=1e-9):
            raise GeometryError("tent tip escaped the body")
    return Tent(pts, dirs, apexes, spec.delta, g1, norm)


@dataclass(frozen=True)
class BumpWitnessRecord:
    """One net point with its probe point and certified quotient bound."""

    x: np.ndarray
    y: np.ndarray
    bound: float


@dataclass(frozen=True)
class BumpWitnesses:
    """Stable-quotient certificate around a bump perturbation."""

    records: tuple
    beta: float
    bound: float


def bump_witnesses(g: MapExpr, net: Net, s: float, eps: float, lam: float,
                   body: ConvexBody, norm: Norm) -> BumpWitnesses:
    """Probe points certifying steep quotients for every map beta*eps-close to g.

    For each net point x the probe is y_x = x + (eps*s/(24(1+diam))) e_x,
    which lies inside the bump ball of g; the isometry there forces, for any
    h with sup-distance at most beta*eps from g,

        ||h(y_x) - h(x)|| / ||y_x - x||  >=  1 - 48 beta (1+diam)/s,

    and with beta = (1-lam) s/(96(1+diam)) the right side is (1+lam)/2 > lam.
    """
    if not (0.0 < lam < 1.0):
        raise ParameterError(f"lam must lie in (0, 1), got {lam}")
    if not isinstance(g, Tent):
        raise ParameterError("g is not a bump perturbation (tent stage missing)")
    diam = body.diameter(norm)
    expected_delta = eps * (0.5 * s) / (3.0 * (1.0 + diam))
    if abs(g.delta - expected_delta) > 1e-12 * max(1.0, expected_delta):
        raise ParameterError("g's tent height does not match (net, s, eps)")
    if g.centers.shape != net.points.shape or np.max(np.abs(g.centers - net.points)) > 1e-12:
        raise ParameterError("g's tent centres do not match the net")
    field = direction_field(body, norm, s)
    offset = eps * s / (24.0 * (1.0 + diam))
    beta = (1.0 - lam) * s / (96.0 * (1.0 + diam))
    bound = 1.0 - 48.0 * beta * (1.0 + diam) / s
    records = []
    for x in net.points:
        y = x + offset * field(x)
        if not body.contains(y, tol=1e-9):
            raise GeometryError("witness probe escaped the body")
        records.append(BumpWitnessRecord(x.copy(), y, bound))
    return BumpWitnesses(tuple(records), beta, bound)
