"""Projective description of a buying-selling cycle.

A market with N+1 goods lives in the real projective space RP^N: a portfolio
is a vector of asset amounts, and portfolios holding the goods in the same
proportions are identified.  Coordinate 0 is the asset, coordinate 1 is the
money; any further coordinates are spectator goods.

The log-profit of a full cycle, p + q, is the logarithm of the cross ratio of
four collinear points: the two cycle points U_q, U_p and the intersections of
their line with the single-good hyperplanes.  It does not depend on the
units in which the goods are measured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "ASSET",
    "MONEY",
    "INFINITY",
    "DomainError",
    "DegenerateError",
    "PortfolioPoint",
    "ProfitPair",
    "demand_profit",
    "supply_profit",
    "build_cycle_points",
    "line_point",
    "intersection_lambdas",
    "hyperplane_lambda",
    "cross_ratio",
    "cross_ratio_homogeneous",
    "cycle_log_cross_ratio",
    "points_log_cross_ratio",
    "rescale_units",
    "unit_invariance_deviation",
]

ASSET = 0
MONEY = 1

RTOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateError(ValueError):
    """A geometric construction collapsed (coincident points, parallel line)."""


class _PointAtInfinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_PointAtInfinity, ())


#: Tagged point at infinity on a parametrised line.
INFINITY = _PointAtInfinity()

Param = Union[float, _PointAtInfinity]


@dataclass(frozen=True, eq=False)
class PortfolioPoint:
    """Homogeneous coordinates of a portfolio, stored unnormalised."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 2:
            raise DomainError("a portfolio needs at least two coordinates")
        if not all(math.isfinite(c) for c in coords):
            raise DomainError(f"non-finite coordinate in {coords}")
        if not any(coords):
            raise DomainError("the zero vector is not a projective point")
        object.__setattr__(self, "coords", coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def normalized(self) -> tuple[float, ...]:
        """Coordinates divided by the largest-magnitude entry."""
        pivot = max(self.coords, key=abs)
        return tuple(c / pivot for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, PortfolioPoint):
            return NotImplemented
        if len(self) != len(other):
            return False
        a, b = self.normalized(), other.normalized()
        # near-ties in the pivot can flip the overall sign
        return all(abs(x - y) <= RTOL for x, y in zip(a, b)) or all(
            abs(x + y) <= RTOL for x, y in zip(a, b)
        )

    __hash__ = None


@dataclass(frozen=True)
class ProfitPair:
    p: float
    q: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and math.isfinite(self.q)):
            raise DomainError(f"profits must be finite, got {self.p}, {self.q}")

    @property
    def cycle(self) -> float:
        return self.p + self.q


def _check_positive(**amounts):
    for name, value in amounts.items():
        if not value > 0:
            raise DomainError(f"{name} must be strictly positive, got {value}")


def demand_profit(money_amount: float, asset_amount: float) -> float:
    """Log-quotation ln(V_$) - ln(V_asset) seen from the selling side."""
    _check_positive(money_amount=money_amount, asset_amount=asset_amount)
    return math.log(money_amount) - math.log(asset_amount)


def supply_profit(asset_amount: float, money_amount: float) -> float:
    """Log-quotation ln(V_asset) - ln(V_$) seen from the buying side."""
    _check_positive(money_amount=money_amount, asset_amount=asset_amount)
    return math.log(asset_amount) - math.log(money_amount)


def build_cycle_points(
    p: float,
    q: float,
    upsilon: float,
    w: float,
    extra_q: Sequence[float] = (),
    extra_p: Sequence[float] = (),
) -> tuple[PortfolioPoint, PortfolioPoint]:
    """Return ``(U_q, U_p)`` with U_q = (u e^q, u, ...) and U_p = (w, w e^p, ...).

    ``extra_q`` and ``extra_p`` hold the spectator coordinates; the shorter one
    is padded with zeros.
    """
    _check_positive(upsilon=upsilon, w=w)
    n = max(len(extra_q), len(extra_p))
    eq = list(extra_q) + [0.0] * (n - len(extra_q))
    ep = list(extra_p) + [0.0] * (n - len(extra_p))
    u_q = PortfolioPoint((upsilon * math.exp(q), upsilon, *eq))
    u_p = PortfolioPoint((w, w * math.exp(p), *ep))
    return u_q, u_p


def line_point(u_q: PortfolioPoint, u_p: PortfolioPoint, lam: float) -> PortfolioPoint:
    """Point ``lam * U_q + (1 - lam) * U_p`` of the line through the cycle points."""
    if len(u_q) != len(u_p):
        raise DomainError("points live in spaces of different dimension")
    if u_q == u_p:
        raise DegenerateError("U_q and U_p coincide projectively; no line through them")
    v = lam * np.asarray(u_q.coords) + (1.0 - lam) * np.asarray(u_p.coords)
    return PortfolioPoint(tuple(v))


def _lambda(num: float, den: float, what: str) -> float:
    if den == 0.0 or abs(den) <= RTOL * abs(num):
        raise DegenerateError(f"the line is parallel to the {what} hyperplane")
    return num / den


def _check_not_parallel(a: float, b: float, what: str) -> None:
    # the line meets the hyperplane coordinate == 0 iff a and b differ
    if a == b or abs(b - a) <= RTOL * max(abs(a), abs(b)):
        raise DegenerateError(f"the line is parallel to the {what} hyperplane")


def intersection_lambdas(p: float, q: float, upsilon: float, w: float) -> tuple[float, float]:
    """Line parameters ``(lam_money, lam_asset)`` of the single-good points.

    These are the closed forms w/(w - u) and w/(w - u e^{-(p+q)}), i.e. the
    cycle written in units where the buying quotation is absorbed into the
    asset coordinate.  Only the sum p + q enters.
    """
    _check_positive(upsilon=upsilon, w=w)
    lam_money = _lambda(w, w - upsilon, "money")
    lam_asset = _lambda(w, w - upsilon * math.exp(-(p + q)), "asset")
    return lam_money, lam_asset


def hyperplane_lambda(u_q: PortfolioPoint, u_p: PortfolioPoint, coord: int) -> float:
    """Parameter where coordinate ``coord`` of the line through U_q, U_p vanishes."""
    a, b = u_q[coord], u_p[coord]
    return _lambda(b, b - a, "asset" if coord == MONEY else "money")


def _det(x, y):
    return x[0] * y[1] - y[0] * x[1]


def cross_ratio_homogeneous(a, b, c, d) -> float:
    """Cross ratio of four points of a projective line given as pairs ``(x0, x1)``.

    Uses ``det(C, A) det(B, D) / (det(B, A) det(C, D))``; the finite parameter
    lam corresponds to ``(lam, 1)`` and the point at infinity to ``(1, 0)``.
    """
    pts = (a, b, c, d)
    for i in range(4):
        if pts[i][0] == 0 and pts[i][1] == 0:
            raise DegenerateError("(0, 0) is not a point of the projective line")
        for j in range(i + 1, 4):
            if _det(pts[i], pts[j]) == 0:
                raise DegenerateError(f"coincident points {pts[i]} and {pts[j]}")
    return (_det(c, a) * _det(b, d)) / (_det(b, a) * _det(c, d))


def cross_ratio(lam_a: Param, lam_b: Param, lam_c: Param, lam_d: Param) -> float:
    """Double ratio ``((C-A)/(B-A)) / ((C-D)/(B-D))`` of four line parameters.

    One argument may be :data:`INFINITY`; the limit is then taken.
    """
    params = (lam_a, lam_b, lam_c, lam_d)
    if sum(x is INFINITY for x in params) > 1:
        raise DegenerateError("at most one point may be at infinity")
    pts = []
    for x in params:
        if x is INFINITY:
            pts.append((1.0, 0.0))
        elif math.isfinite(x):
            pts.append((x, 1.0))
        else:
            raise DomainError("use INFINITY for the point at infinity, not a float")
    return cross_ratio_homogeneous(*pts)


def _log_cycle_ratio(a0, a1, b0, b1):
    # Line weights (alpha, beta) of alpha U_q + beta U_p: U_q = (1, 0),
    # U_p = (0, 1), asset point (b1, -a1), money point (b0, -a0).  lam =
    # alpha / (alpha + beta) is a Moebius map of the line, so the cross ratio
    # equals [lam_asset, 1, 0, lam_money] without ever forming lam - 1.
    _check_not_parallel(a1, b1, "asset")
    _check_not_parallel(a0, b0, "money")
    if a0 * b1 == a1 * b0:
        # U_q ~ U_p: null cycle, the continuous limit of the invariant
        return 0.0
    cr = cross_ratio_homogeneous((b1, -a1), (1.0, 0.0), (0.0, 1.0), (b0, -a0))
    if not cr > 0:
        raise DomainError("points do not describe a long-only exchange cycle")
    return math.log(cr)


def cycle_log_cross_ratio(p: float, q: float, upsilon: float, w: float) -> float:
    """ln [asset, U_q, U_p, money] on the cycle line; equals p + q.

    Evaluated on the units in which U_q = (u, u) and U_p = (w, w e^{p+q}),
    where the single-good points sit at the closed-form parameters of
    :func:`intersection_lambdas`.
    """
    _check_positive(upsilon=upsilon, w=w)
    return _log_cycle_ratio(upsilon, upsilon * math.exp(-(p + q)), w, w)


def points_log_cross_ratio(u_q: PortfolioPoint, u_p: PortfolioPoint) -> float:
    """Log cross ratio computed from the coordinates of the two cycle points.

    The single-good points are the intersections of the line with the
    hyperplanes money = 0 (pure asset) and asset = 0 (pure money).
    """
    if len(u_q) != len(u_p):
        raise DomainError("points live in spaces of different dimension")
    return _log_cycle_ratio(u_q[ASSET], u_q[MONEY], u_p[ASSET], u_p[MONEY])


def rescale_units(point: PortfolioPoint, scales: Sequence[float]) -> PortfolioPoint:
    """Change measurement units: coordinate mu is multiplied by ``scales[mu]``."""
    s = [float(x) for x in scales]
    if len(s) != len(point):
        raise DomainError(f"expected {len(point)} scales, got {len(s)}")
    if not all(x > 0 for x in s):
        raise DomainError("unit scales must be strictly positive")
    return PortfolioPoint(tuple(c * x for c, x in zip(point.coords, s)))


def unit_invariance_deviation(p: float, q: float, upsilon: float, w: float, scales) -> float:
    """Largest |log cross ratio - (p + q)| over the unit changes in ``scales``.

    ``scales`` is an iterable of per-coordinate scale vectors; each is applied
    to both cycle points before the cross ratio is recomputed from their
    coordinates.  The unscaled closed-form path is included.
    """
    target = p + q
    worst = abs(cycle_log_cross_ratio(p, q, upsilon, w) - target)
    u_q, u_p = build_cycle_points(p, q, upsilon, w)
    for s in scales:
        value = points_log_cross_ratio(rescale_units(u_q, s), rescale_units(u_p, s))
        worst = max(worst, abs(value - target))
    return worst
