"""Extreme-efficient and terminal units.

A terminal unit is a vertex of T with an infinite edge going out of it. The
only possible edge directions are input increases ``(e_k, 0)`` and output
decreases ``-(0, e_i)``. An edge test probes a point a fixed distance along
the direction and checks that the minimal face of T containing the probe is
exactly the ray through the unit, using the generator (vertex plus ray)
representation of T.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dea import ZERO_TOL, technology
from .exceptions import InputError, OutsidePPSError
from .lp import EQ, LpProblem, solve_lp

INPUT_INCREASE = "input-increase"
OUTPUT_DECREASE = "output-decrease"
PROBE_OFFSET = 1.0


class Direction(NamedTuple):
    kind: str
    axis: int  # zero-based within its block

    def __str__(self):
        return f"{self.kind}:{self.axis + 1}"

    @classmethod
    def parse(cls, text):
        kind, _, axis = text.partition(":")
        if kind not in (INPUT_INCREASE, OUTPUT_DECREASE) or not axis.isdigit():
            raise InputError(f"bad direction {text!r}")
        return cls(kind, int(axis) - 1)

    def coordinate(self, m):
        """Index of the direction's axis in the stacked (inputs, outputs) vector."""
        return self.axis if self.kind == INPUT_INCREASE else m + self.axis

    def sign(self):
        return 1.0 if self.kind == INPUT_INCREASE else -1.0

    def check(self, m, r):
        limit = m if self.kind == INPUT_INCREASE else r
        if self.kind not in (INPUT_INCREASE, OUTPUT_DECREASE) or not 0 <= self.axis < limit:
            raise InputError(f"direction {self} out of range for {m} inputs and {r} outputs")
        return self


def all_directions(m, r):
    return [Direction(INPUT_INCREASE, k) for k in range(m)] + [
        Direction(OUTPUT_DECREASE, i) for i in range(r)
    ]


@dataclass(frozen=True)
class TerminalReport:
    directions: dict = field(default_factory=dict)

    @property
    def terminal(self):
        """Ids of units with at least one terminal direction, in dataset order."""
        return tuple(uid for uid, dirs in self.directions.items() if dirs)

    def __getitem__(self, unit_id):
        return self.directions.get(unit_id, ())


def _representation_lp(tech, point, objective_lambda, objective_dirs):
    """Maximize a weighted sum of generator coefficients in ``point = sum lam Z + rays``.

    Ray coefficients are expressed in column-range units.
    """
    n, m, r = tech.n, tech.m, tech.r
    xo, yo = tech.scaled(point[:m], point[m:])
    A = np.zeros((m + r + 1, n + m + r))
    A[:m, :n] = tech.Xs
    A[:m, n : n + m] = np.diag(tech.unit_step[:m])
    A[m : m + r, :n] = tech.Ys
    A[m : m + r, n + m :] = -np.diag(tech.unit_step[m:])
    A[-1, :n] = 1.0
    b = np.concatenate([xo, yo, [1.0]])
    c = -np.concatenate([objective_lambda, objective_dirs])
    return solve_lp(LpProblem(c, A, b, (EQ,) * (m + r + 1)))


def is_vertex(tech, j, tol=1e-9):
    """True if unit ``j`` cannot be represented by the other generators."""
    if tech.n == 1:
        return True
    return not tech.without(j).contains(tech.X[j], tech.Y[j], tol)


def _check_index(dataset, j):
    if not 0 <= j < dataset.n:
        raise InputError(f"unit index {j} out of range")


def is_extreme_efficient(dataset, j, tech=None):
    _check_index(dataset, j)
    tech = technology(dataset) if tech is None else tech
    efficient, _ = tech.is_efficient_point(tech.X[j], tech.Y[j])
    return efficient and is_vertex(tech, j)


def minimal_face_generators(dataset, p, tol=ZERO_TOL):
    """Generators used with a positive coefficient by some representation of ``p``.

    Returns ``(unit indices, directions)``. One LP per generator maximizes
    that generator's coefficient.
    """
    dataset.check_point(p)
    tech = technology(dataset)
    if not tech.contains(p.x, p.y):
        raise OutsidePPSError("point lies outside the production possibility set")
    n, m, r = tech.n, tech.m, tech.r
    point = p.coords
    units, dirs = set(), set()
    for g in range(n + m + r):
        weights = np.zeros(n + m + r)
        weights[g] = 1.0
        sol = _representation_lp(tech, point, weights[:n], weights[n:])
        if sol.optimal and -sol.objective > tol:
            if g < n:
                units.add(g)
            else:
                dirs.add(all_directions(m, r)[g - n])
    return units, dirs


def _on_ray(tech, j, d):
    """Units (other than ``j``) lying on the ray from unit ``j`` along ``d``."""
    Z = np.hstack([tech.X, tech.Y])
    c = d.coordinate(tech.m)
    atol = 1e-12 * tech.scale
    same = np.abs(Z - Z[j]) <= atol
    same[:, c] = (Z[:, c] - Z[j, c]) * d.sign() >= -atol[c]
    mask = same.all(axis=1)
    mask[j] = True
    return mask


def is_terminal_edge(tech, j, d, t0=PROBE_OFFSET, tol=ZERO_TOL):
    """Edge test: does the ray from unit ``j`` along ``d`` form a face of T?"""
    m = tech.m
    c = d.coordinate(m)
    probe = np.concatenate([tech.X[j], tech.Y[j]])
    probe[c] += d.sign() * t0 * tech.spread[c]
    if tech.gap(probe[:m], probe[m:]) > tol:
        return False
    off_ray = (~_on_ray(tech, j, d)).astype(float)
    other_dirs = np.ones(m + tech.r)
    other_dirs[c] = 0.0
    sol = _representation_lp(tech, probe, off_ray, other_dirs)
    return sol.optimal and -sol.objective <= tol


def terminal_directions(dataset, j, t0=PROBE_OFFSET, tech=None):
    """Terminal directions of unit ``j`` (empty unless ``j`` is extreme efficient)."""
    tech = technology(dataset) if tech is None else tech
    if not is_extreme_efficient(dataset, j, tech):
        return ()
    return tuple(d for d in all_directions(dataset.m, dataset.r) if is_terminal_edge(tech, j, d, t0))


def find_terminal_units(dataset, indices=None, t0=PROBE_OFFSET):
    """Terminal directions for every unit (or for ``indices`` only), in dataset order."""
    tech = technology(dataset)
    indices = range(dataset.n) if indices is None else sorted(int(j) for j in indices)
    return TerminalReport({dataset.ids[j]: terminal_directions(dataset, j, t0, tech) for j in indices})
