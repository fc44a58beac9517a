"""BCC envelopment models, PPS membership and unit classification.

All LPs are built on column-scaled data (each coordinate divided by its
column's largest magnitude), which makes scores, intensity weights and
classifications invariant to the units of measurement. Slacks are reported
in the data's own units.
"""

import enum
import weakref
from dataclasses import dataclass

import numpy as np

from .data import Point, column_range, column_scale
from .exceptions import InputError, OutsidePPSError
from .lp import EQ, GE, LE, LpProblem, solve_lexicographic, solve_lp

ZERO_TOL = 1e-6
INPUT, OUTPUT = "input", "output"


class UnitClass(str, enum.Enum):
    EXTREME = "extreme-efficient"
    EFFICIENT = "efficient-nonextreme"
    WEAK = "weakly-efficient"
    INEFFICIENT = "inefficient"

    @property
    def efficient(self):
        return self in (UnitClass.EXTREME, UnitClass.EFFICIENT)

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class EfficiencyResult:
    orientation: str
    score: float
    input_slacks: np.ndarray
    output_slacks: np.ndarray
    lambdas: np.ndarray
    projection: Point
    scaled_slacks: np.ndarray

    def slacks_zero(self, tol=ZERO_TOL):
        """True when every stage-2 slack is within ``tol`` in column-scaled units."""
        return bool(np.all(np.abs(self.scaled_slacks) <= tol))

    @property
    def radial_point(self):
        """The radial projection ``(theta X_o, Y_o)`` or ``(X_o, eta Y_o)``."""
        p = self.projection
        return p.x + self.input_slacks, p.y - self.output_slacks


class Technology:
    """The generators of a BCC technology, in column-scaled form.

    ``scale`` conditions the LPs; ``spread`` is the unit in which gaps are
    measured. Both default to values computed from ``X`` and ``Y`` and are
    kept fixed by :meth:`extended` so that results stay comparable while
    units are added.
    """

    def __init__(self, X, Y, scale=None, spread=None, zero_tol=ZERO_TOL):
        self.X = np.asarray(X, dtype=float)
        self.Y = np.asarray(Y, dtype=float)
        self.n, self.m = self.X.shape
        self.r = self.Y.shape[1]
        if scale is None:
            scale = np.concatenate([column_scale(self.X), column_scale(self.Y)])
        if spread is None:
            spread = np.concatenate([column_range(self.X), column_range(self.Y)])
        self.scale = np.asarray(scale, dtype=float)
        self.spread = np.asarray(spread, dtype=float)
        self.zero_tol = zero_tol
        self.Xs = (self.X / self.scale[: self.m]).T
        self.Ys = (self.Y / self.scale[self.m :]).T
        # gap direction, in scaled coordinates
        self.unit_step = self.spread / self.scale

    @classmethod
    def from_dataset(cls, dataset, **kw):
        return cls(dataset.X, dataset.Y, **kw)

    def extended(self, X, Y):
        X = np.atleast_2d(np.asarray(X, dtype=float)).reshape(-1, self.m)
        Y = np.atleast_2d(np.asarray(Y, dtype=float)).reshape(-1, self.r)
        return Technology(
            np.vstack([self.X, X]), np.vstack([self.Y, Y]), self.scale, self.spread, self.zero_tol
        )

    def without(self, j):
        keep = np.ones(self.n, dtype=bool)
        keep[j] = False
        return Technology(self.X[keep], self.Y[keep], self.scale, self.spread, self.zero_tol)

    def scaled(self, x, y):
        return np.asarray(x, float) / self.scale[: self.m], np.asarray(y, float) / self.scale[self.m :]

    # -- models ---------------------------------------------------------------

    def _result(self, orientation, score, sol):
        n, m = self.n, self.m
        lam = np.maximum(sol.x[:n], 0.0)
        s_scaled = np.maximum(sol.x[n + 1 :], 0.0)
        s_in = s_scaled[:m] * self.scale[:m]
        s_out = s_scaled[m:] * self.scale[m:]
        proj = Point(np.maximum(lam @ self.X, 0.0), np.maximum(lam @ self.Y, 0.0))
        return EfficiencyResult(orientation, score, s_in, s_out, lam, proj, s_scaled)

    def input_model(self, x, y):
        """Two-stage input-oriented envelopment model (min theta, then max slacks)."""
        xo, yo = self.scaled(x, y)
        n, m, r = self.n, self.m, self.r
        A = np.zeros((m + r + 1, n + 1 + m + r))
        A[:m, :n] = self.Xs
        A[:m, n] = -xo
        A[:m, n + 1 : n + 1 + m] = np.eye(m)
        A[m : m + r, :n] = self.Ys
        A[m : m + r, n + 1 + m :] = -np.eye(r)
        A[-1, :n] = 1.0
        b = np.concatenate([np.zeros(m), yo, [1.0]])
        c1 = np.zeros(A.shape[1])
        c1[n] = 1.0
        c2 = np.zeros(A.shape[1])
        c2[n + 1 :] = -1.0
        first, second = solve_lexicographic(LpProblem(c1, A, b, (EQ,) * (m + r + 1)), c2)
        if not first.optimal:
            raise OutsidePPSError("output vector is not attainable by any convex combination of units")
        return self._result(INPUT, first.objective, second)

    def output_model(self, x, y):
        """Two-stage output-oriented envelopment model (max eta, then max slacks)."""
        if not np.any(np.asarray(y) > 0):
            raise InputError("output orientation is undefined for a zero output vector")
        xo, yo = self.scaled(x, y)
        n, m, r = self.n, self.m, self.r
        A = np.zeros((m + r + 1, n + 1 + m + r))
        A[:m, :n] = self.Xs
        A[:m, n + 1 : n + 1 + m] = np.eye(m)
        A[m : m + r, :n] = self.Ys
        A[m : m + r, n] = -yo
        A[m : m + r, n + 1 + m :] = -np.eye(r)
        A[-1, :n] = 1.0
        b = np.concatenate([xo, np.zeros(r), [1.0]])
        c1 = np.zeros(A.shape[1])
        c1[n] = -1.0
        c2 = np.zeros(A.shape[1])
        c2[n + 1 :] = -1.0
        first, second = solve_lexicographic(LpProblem(c1, A, b, (EQ,) * (m + r + 1)), c2)
        if not first.optimal:
            raise OutsidePPSError("input vector does not dominate any convex combination of units")
        return self._result(OUTPUT, -first.objective, second)

    def gap(self, x, y):
        """Largest uniform improvement ``delta`` keeping the point in T.

        ``delta`` is measured in column-range units and may be negative, in
        which case ``-delta`` is how far the point lies outside T.
        """
        xo, yo = self.scaled(x, y)
        n, m, r = self.n, self.m, self.r
        A = np.zeros((m + r + 1, n + 1))
        A[:m, :n] = self.Xs
        A[:m, n] = self.unit_step[:m]
        A[m : m + r, :n] = self.Ys
        A[m : m + r, n] = -self.unit_step[m:]
        A[-1, :n] = 1.0
        b = np.concatenate([xo, yo, [1.0]])
        c = np.zeros(n + 1)
        c[n] = -1.0
        lower = np.zeros(n + 1)
        lower[n] = -np.inf
        sol = solve_lp(LpProblem(c, A, b, (LE,) * m + (GE,) * r + (EQ,), lower))
        return -sol.objective

    def contains(self, x, y, tol=1e-9):
        return self.gap(x, y) >= -tol

    def additive(self, x, y):
        """Max-slack-sum LP at the point itself; ``None`` if the point is outside T."""
        xo, yo = self.scaled(x, y)
        n, m, r = self.n, self.m, self.r
        A = np.zeros((m + r + 1, n + m + r))
        A[:m, :n] = self.Xs
        A[:m, n : n + m] = np.eye(m)
        A[m : m + r, :n] = self.Ys
        A[m : m + r, n + m :] = -np.eye(r)
        A[-1, :n] = 1.0
        b = np.concatenate([xo, yo, [1.0]])
        c = np.zeros(n + m + r)
        c[n:] = -1.0
        sol = solve_lp(LpProblem(c, A, b, (EQ,) * (m + r + 1)))
        return sol if sol.optimal else None

    def is_efficient_point(self, x, y, tol=None):
        """Pareto efficiency of a member of T (no slack in the additive model)."""
        tol = self.zero_tol if tol is None else tol
        sol = self.additive(x, y)
        return sol is not None and bool(np.all(sol.x[self.n :] <= tol)), sol

    def column(self, x, y):
        """Constraint column of a generator in the additive model."""
        xo, yo = self.scaled(x, y)
        return np.concatenate([xo, yo, [1.0]])


_TECH_CACHE = weakref.WeakKeyDictionary()


def technology(dataset):
    tech = _TECH_CACHE.get(dataset)
    if tech is None:
        tech = Technology(dataset.X, dataset.Y, dataset.scale, dataset.spread)
        _TECH_CACHE[dataset] = tech
    return tech


def bcc_input(dataset, target):
    """Input-oriented BCC score of ``target`` with maximal stage-2 slacks."""
    dataset.check_point(target)
    return technology(dataset).input_model(target.x, target.y)


def bcc_output(dataset, target):
    """Output-oriented BCC score of ``target`` with maximal stage-2 slacks."""
    dataset.check_point(target)
    return technology(dataset).output_model(target.x, target.y)


def membership(dataset, p):
    dataset.check_point(p)
    return technology(dataset).contains(p.x, p.y)


def wpe_gap(dataset, p):
    """Distance (in column-range units) from ``p`` to the weakly efficient boundary.

    Zero, up to ``ZERO_TOL``, exactly on the boundary of T.
    """
    dataset.check_point(p)
    delta = technology(dataset).gap(p.x, p.y)
    if delta < -1e-9:
        raise OutsidePPSError(f"point lies outside the production possibility set (gap {delta:.3g})")
    return max(delta, 0.0) + 0.0


@dataclass(frozen=True, eq=False)
class UnitEvaluation:
    unit_id: str
    unit_class: UnitClass
    input: EfficiencyResult
    output: EfficiencyResult

    @property
    def theta(self):
        return self.input.score

    @property
    def eta(self):
        return self.output.score if self.output is not None else float("nan")

    @property
    def weak_input(self):
        return not self.input.slacks_zero()

    @property
    def weak_output(self):
        return self.output is not None and not self.output.slacks_zero()

    @property
    def weak_projection(self):
        return self.weak_input or self.weak_output


def _score_is_one(score, tol=ZERO_TOL):
    return abs(score - 1.0) <= tol


def evaluate_unit(dataset, j, tech=None):
    """Both orientations plus the class of unit ``j``."""
    from .terminal import is_vertex

    tech = technology(dataset) if tech is None else tech
    x, y = tech.X[j], tech.Y[j]
    res_in = tech.input_model(x, y)
    res_out = tech.output_model(x, y) if np.any(y > 0) else None
    one_in = _score_is_one(res_in.score)
    one_out = res_out is not None and _score_is_one(res_out.score)
    zero_in = res_in.slacks_zero(tech.zero_tol)
    zero_out = res_out is not None and res_out.slacks_zero(tech.zero_tol)
    if one_in and one_out and zero_in and zero_out:
        cls = UnitClass.EXTREME if is_vertex(tech, j) else UnitClass.EFFICIENT
    elif one_in or one_out:
        cls = UnitClass.WEAK
    else:
        cls = UnitClass.INEFFICIENT
    return UnitEvaluation(dataset.ids[j], cls, res_in, res_out)


def classify(dataset, j):
    if not 0 <= j < dataset.n:
        raise InputError(f"unit index {j} out of range")
    return evaluate_unit(dataset, j).unit_class


def evaluate_all(dataset, indices=None):
    tech = technology(dataset)
    indices = range(dataset.n) if indices is None else indices
    return [evaluate_unit(dataset, j, tech) for j in indices]
