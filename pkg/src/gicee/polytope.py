"""Small dense linear programs and rate-polytope projections.

Everything here is sized for systems of ten variables and about a hundred
constraints, so the solver is a plain dense two-phase simplex with Bland's
anti-cycling pivot rule: deterministic, no sparsity, no scaling tricks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

# Feasibility / pivot tolerance for the simplex.
FEASIBILITY_TOL = 1e-9
# Points closer than this in either coordinate are treated as ties when
# pruning Pareto sets.
PARETO_EPS = 1e-12

_MAX_PIVOTS = 5000


class SolverFailure(RuntimeError):
    """The pivot sequence stalled or behaved inconsistently."""


@dataclass(frozen=True)
class RateSystem:
    """Dense constraint system ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``."""

    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    def __post_init__(self) -> None:
        a_ub = np.atleast_2d(np.asarray(self.a_ub, dtype=float))
        b_ub = np.atleast_1d(np.asarray(self.b_ub, dtype=float))
        if a_ub.size == 0:
            raise ValueError("system needs at least one inequality row")
        if a_ub.shape[0] != b_ub.shape[0]:
            raise ValueError("inequality rows and bounds disagree in length")
        dim = a_ub.shape[1]
        if self.a_eq is None:
            a_eq = np.zeros((0, dim))
            b_eq = np.zeros(0)
        else:
            a_eq = np.atleast_2d(np.asarray(self.a_eq, dtype=float))
            b_eq = np.atleast_1d(np.asarray(self.b_eq, dtype=float))
            if a_eq.shape[1] != dim or a_eq.shape[0] != b_eq.shape[0]:
                raise ValueError("equality block shape mismatch")
        for arr in (a_ub, b_ub, a_eq, b_eq):
            if not np.all(np.isfinite(arr)):
                raise ValueError("constraint data must be finite")
            arr.setflags(write=False)
        object.__setattr__(self, "a_ub", a_ub)
        object.__setattr__(self, "b_ub", b_ub)
        object.__setattr__(self, "a_eq", a_eq)
        object.__setattr__(self, "b_eq", b_eq)

    @property
    def dim(self) -> int:
        return self.a_ub.shape[1]

    @property
    def n_inequalities(self) -> int:
        return self.a_ub.shape[0]

    @property
    def n_equalities(self) -> int:
        return self.a_eq.shape[0]

    def with_equalities(
        self, rows: Sequence[Sequence[float]], values: Sequence[float]
    ) -> "RateSystem":
        """A copy of the system with extra equality rows appended."""
        extra = np.atleast_2d(np.asarray(rows, dtype=float))
        return RateSystem(
            a_ub=self.a_ub,
            b_ub=self.b_ub,
            a_eq=np.vstack([self.a_eq, extra]),
            b_eq=np.concatenate([self.b_eq, np.asarray(values, dtype=float)]),
        )

    def check_point(self, x: Sequence[float]) -> float:
        """Minimum slack of a point: nonnegative iff the point is feasible.

        Inequalities contribute ``b - a.x``, equalities ``-|a.x - b|`` and
        the sign constraints ``min(x)``.
        """
        x = np.asarray(x, dtype=float)
        slack = float(np.min(self.b_ub - self.a_ub @ x))
        if self.n_equalities:
            slack = min(slack, float(-np.max(np.abs(self.a_eq @ x - self.b_eq))))
        return min(slack, float(np.min(x)))


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: float | None = None
    x: np.ndarray | None = None


def _bland_min(tableau: np.ndarray, cost: np.ndarray, basis: list[int],
               allowed: int, tol: float) -> str:
    """Run simplex pivots (minimization) until optimal or unbounded.

    ``allowed`` restricts entering variables to columns below that index so
    phase 2 never re-enters an artificial column.  Bland's rule: entering is
    the lowest-index negative reduced cost; leaving is the ratio-test row,
    ties broken by the lowest basic variable index.
    """
    for _ in range(_MAX_PIVOTS):
        entering = -1
        for j in range(allowed):
            if cost[j] < -tol:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tableau[:, entering]
        best_ratio, leaving = math.inf, -1
        for i in range(tableau.shape[0]):
            if col[i] > tol:
                ratio = tableau[i, -1] / col[i]
                if ratio < best_ratio - 1e-15 or (
                    abs(ratio - best_ratio) <= 1e-15
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best_ratio, leaving = ratio, i
        if leaving < 0:
            return "unbounded"
        pivot = tableau[leaving, entering]
        tableau[leaving, :] /= pivot
        factors = tableau[:, entering].copy()
        factors[leaving] = 0.0
        tableau -= np.outer(factors, tableau[leaving, :])
        cost -= cost[entering] * tableau[leaving, :]
        basis[leaving] = entering
    raise SolverFailure(f"simplex stalled after {_MAX_PIVOTS} pivots")


def lp_solve(
    system: RateSystem,
    objective: Sequence[float],
    *,
    tol: float = FEASIBILITY_TOL,
) -> LpResult:
    """Maximize ``objective . x`` over the system; deterministic two-phase simplex."""
    c_max = np.asarray(objective, dtype=float)
    n = system.dim
    if c_max.shape != (n,):
        raise ValueError(f"objective must have length {n}")

    # Canonical rows with nonnegative right-hand sides.  Inequalities whose
    # bound is negative flip into >= rows that need surplus + artificial;
    # equalities always take an artificial.
    rows, rhs, kinds = [], [], []
    for a, b in zip(system.a_ub, system.b_ub):
        if b >= 0:
            rows.append(a.copy())
            rhs.append(b)
            kinds.append("le")
        else:
            rows.append(-a)
            rhs.append(-b)
            kinds.append("ge")
    for a, b in zip(system.a_eq, system.b_eq):
        if b >= 0:
            rows.append(a.copy())
            rhs.append(b)
        else:
            rows.append(-a)
            rhs.append(-b)
        kinds.append("eq")

    m = len(rows)
    n_slack = sum(1 for k in kinds if k == "le")
    n_surplus = sum(1 for k in kinds if k == "ge")
    n_art = sum(1 for k in kinds if k != "le")
    ncols = n + n_slack + n_surplus + n_art

    tableau = np.zeros((m, ncols + 1))
    basis: list[int] = []
    slack_at, surplus_at, art_at = n, n + n_slack, n + n_slack + n_surplus
    for i, (a, b, kind) in enumerate(zip(rows, rhs, kinds)):
        tableau[i, :n] = a
        tableau[i, -1] = b
        if kind == "le":
            tableau[i, slack_at] = 1.0
            basis.append(slack_at)
            slack_at += 1
        else:
            if kind == "ge":
                tableau[i, surplus_at] = -1.0
                surplus_at += 1
            tableau[i, art_at] = 1.0
            basis.append(art_at)
            art_at += 1

    art_start = n + n_slack + n_surplus

    if n_art:
        cost = np.zeros(ncols + 1)
        cost[art_start:ncols] = 1.0
        for i, b in enumerate(basis):
            if b >= art_start:
                cost -= tableau[i, :]
        status = _bland_min(tableau, cost, basis, ncols, tol)
        if status != "optimal":
            raise SolverFailure("phase 1 reported unbounded; system is malformed")
        if -cost[-1] > tol:
            return LpResult(status="infeasible")
        # Drive leftover artificials out of the basis; rows that cannot
        # pivot are redundant and get dropped.
        keep = np.ones(m, dtype=bool)
        for i in range(m):
            if basis[i] >= art_start:
                pivot_col = -1
                for j in range(art_start):
                    if abs(tableau[i, j]) > tol:
                        pivot_col = j
                        break
                if pivot_col < 0:
                    keep[i] = False
                    continue
                piv = tableau[i, pivot_col]
                tableau[i, :] /= piv
                factors = tableau[:, pivot_col].copy()
                factors[i] = 0.0
                tableau -= np.outer(factors, tableau[i, :])
                basis[i] = pivot_col
        tableau = np.hstack([tableau[keep, :art_start], tableau[keep, -1:]])
        basis = [b for i, b in enumerate(basis) if keep[i]]
        ncols = art_start

    cost = np.zeros(ncols + 1)
    cost[:n] = -c_max
    for i, b in enumerate(basis):
        if abs(cost[b]) > 0.0:
            cost -= cost[b] * tableau[i, :]
    status = _bland_min(tableau, cost, basis, ncols, tol)
    if status == "unbounded":
        return LpResult(status="unbounded")

    x = np.zeros(n)
    for i, b in enumerate(basis):
        if b < n:
            x[b] = tableau[i, -1]
    x[(x < 0) & (x > -tol)] = 0.0
    return LpResult(status="optimal", value=float(c_max @ x), x=x)


def _pareto_prune(
    points: Iterable[tuple[float, float]], eps: float = PARETO_EPS
) -> tuple[tuple[float, float], ...]:
    """Drop dominated and tie-duplicated points; result has strictly
    increasing r1 and strictly decreasing r2."""
    pts = sorted(set((float(a), float(b)) for a, b in points))
    kept: list[tuple[float, float]] = []
    best = -math.inf
    for r1, r2 in reversed(pts):
        if r2 > best + eps:
            kept.append((r1, r2))
            best = r2
    kept.reverse()
    out: list[tuple[float, float]] = []
    for pt in kept:
        if out and pt[0] - out[-1][0] <= eps:
            continue
        out.append(pt)
    return tuple(out)


@dataclass(frozen=True)
class Frontier:
    """Pareto-optimal (r1, r2) points in bits per channel use, r1 ascending."""

    points: tuple[tuple[float, float], ...] = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        cleaned = []
        for r1, r2 in self.points:
            r1, r2 = float(r1), float(r2)
            if r1 < -FEASIBILITY_TOL or r2 < -FEASIBILITY_TOL:
                raise ValueError(f"negative frontier point ({r1}, {r2})")
            cleaned.append((max(r1, 0.0), max(r2, 0.0)))
        for (a1, a2), (b1, b2) in zip(cleaned, cleaned[1:]):
            if b1 < a1 or b2 > a2:
                raise ValueError("frontier points must be sorted and Pareto")
        object.__setattr__(self, "points", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def max_r1(self) -> float:
        if not self.points:
            raise ValueError("empty frontier has no maximum")
        return self.points[-1][0]

    @property
    def max_r2(self) -> float:
        if not self.points:
            raise ValueError("empty frontier has no maximum")
        return self.points[0][1]

    def support(self, theta: float) -> float:
        """Support value max(cos(theta) r1 + sin(theta) r2); -inf if empty."""
        if not self.points:
            return -math.inf
        ct, st = math.cos(theta), math.sin(theta)
        return max(ct * r1 + st * r2 for r1, r2 in self.points)

    def r2_at(self, r1: float) -> float:
        """Height of the piecewise-linear boundary at ``r1``.

        The region is down-closed, so left of the first point the boundary
        is flat at max_r2; beyond max_r1 nothing is achievable (-inf).
        """
        if not self.points:
            return -math.inf
        if r1 > self.points[-1][0] + PARETO_EPS:
            return -math.inf
        if r1 <= self.points[0][0]:
            return self.points[0][1]
        for (a1, a2), (b1, b2) in zip(self.points, self.points[1:]):
            if r1 <= b1:
                if b1 == a1:
                    return max(a2, b2)
                t = (r1 - a1) / (b1 - a1)
                return a2 + t * (b2 - a2)
        return self.points[-1][1]

    def dominates(
        self, other: "Frontier", *, directions: int = 181, tol: float = 1e-9
    ) -> bool:
        """True if this frontier is at least as large in every direction."""
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        for k in range(directions):
            theta = 0.5 * math.pi * k / (directions - 1)
            if other.support(theta) > self.support(theta) + tol:
                return False
        return True


def project_frontier(
    system: RateSystem,
    r1_row: Sequence[float],
    r2_row: Sequence[float],
    directions: int = 64,
    *,
    metadata: dict | None = None,
) -> Frontier:
    """Pareto frontier of the polytope's image under (r1_row, r2_row).

    Sweeps ``directions`` support angles uniformly over [0, pi/2] plus the
    two lexicographic corners.  Infeasible systems give an empty frontier.
    """
    if directions < 3:
        raise ValueError("need at least 3 directions")
    r1_row = np.asarray(r1_row, dtype=float)
    r2_row = np.asarray(r2_row, dtype=float)
    meta = dict(metadata or {})
    meta.setdefault("directions", directions)

    def corner(primary: np.ndarray, secondary: np.ndarray):
        res = lp_solve(system, primary)
        if res.status == "infeasible":
            return None
        if res.status != "optimal":
            raise SolverFailure("projection unbounded along a corner objective")
        pinned = system.with_equalities([primary], [res.value])
        res2 = lp_solve(pinned, secondary)
        if res2.status != "optimal":
            raise SolverFailure("lexicographic refinement failed")
        return res2.x

    first = corner(r1_row, r2_row)
    if first is None:
        meta["infeasible"] = True
        return Frontier(points=(), metadata=meta)
    solutions = [first, corner(r2_row, r1_row)]

    for k in range(directions):
        theta = 0.5 * math.pi * k / (directions - 1)
        obj = math.cos(theta) * r1_row + math.sin(theta) * r2_row
        res = lp_solve(system, obj)
        if res.status != "optimal":
            raise SolverFailure(
                f"direction {theta:.6f} rad ended with status {res.status}"
            )
        solutions.append(res.x)

    points = [
        (max(float(r1_row @ x), 0.0), max(float(r2_row @ x), 0.0)) for x in solutions
    ]
    meta["infeasible"] = False
    return Frontier(points=_pareto_prune(points), metadata=meta)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_vertices(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Convex hull vertices (monotone chain); collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def pareto_merge(
    frontiers: Iterable[Frontier], *, metadata: dict | None = None
) -> Frontier:
    """Pareto frontier of the convex hull of all points and their axis
    projections (time sharing with silence is always allowed)."""
    raw: list[tuple[float, float]] = []
    for frontier in frontiers:
        for r1, r2 in frontier.points:
            raw.append((r1, r2))
            raw.append((0.0, r2))
            raw.append((r1, 0.0))
    meta = dict(metadata or {})
    if not raw:
        return Frontier(points=(), metadata=meta)
    vertices = _hull_vertices(raw)
    return Frontier(points=_pareto_prune(vertices), metadata=meta)


def grid_feasibility_oracle(
    system: RateSystem,
    r1_row: Sequence[float],
    r2_row: Sequence[float],
    pitch: float,
) -> frozenset[tuple[float, float]]:
    """LP-feasible points of a pitch-spaced grid over the projection's box.

    Brute-force comparison target for :func:`project_frontier`: each grid
    point is pinned through two equality rows and tested for feasibility.
    """
    if not pitch > 0:
        raise ValueError("pitch must be positive")
    r1_row = np.asarray(r1_row, dtype=float)
    r2_row = np.asarray(r2_row, dtype=float)
    res1 = lp_solve(system, r1_row)
    if res1.status == "infeasible":
        return frozenset()
    res2 = lp_solve(system, r2_row)
    if res1.status != "optimal" or res2.status != "optimal":
        raise SolverFailure("projection box is unbounded")
    zero = np.zeros(system.dim)
    feasible = set()
    for i in range(int(res1.value / pitch + 1e-9) + 1):
        for j in range(int(res2.value / pitch + 1e-9) + 1):
            target = (i * pitch, j * pitch)
            pinned = system.with_equalities([r1_row, r2_row], list(target))
            if lp_solve(pinned, zero).status == "optimal":
                feasible.add(target)
    return frozenset(feasible)
