"""Two-dimensional sections of the frontier.

A section fixes every coordinate of a base point except two and traces the
boundary of T in the remaining plane:

* ``S1`` -- input isoquant over inputs ``(x_a, x_b)``: minimal ``x_b`` given ``x_a``.
* ``S2`` -- output isoquant over outputs ``(y_a, y_b)``: maximal ``y_b`` given ``y_a``.
* ``S3`` -- input-output curve over ``(x_s, y_p)``: maximal ``y_p`` given ``x_s``.

Each curve is piecewise linear. It is sampled on a grid of first-axis
values; wherever the slope (read off the LP dual of the first-axis row)
changes between samples, breakpoints are located by intersecting supporting
lines and re-solving until every piece is pinned down. Two slopes count as
different when they differ by more than ``SLOPE_TOL`` relative.
"""

from dataclasses import dataclass

import numpy as np

from .dea import technology
from .exceptions import InputError
from .lp import EQ, GE, LE, LpProblem, solve_lexicographic, solve_lp

S1, S2, S3 = "S1", "S2", "S3"
KINDS = (S1, S2, S3)
SLOPE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SectionSpec:
    """Plane through ``base`` spanned by two coordinate axes.

    Axes are zero-based within their block: both inputs for S1, both outputs
    for S2, and (input, output) for S3.
    """

    base: object
    kind: str
    first_axis: int
    second_axis: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown section kind {self.kind!r}")
        if self.kind != S3 and self.first_axis == self.second_axis:
            raise InputError(f"{self.kind} section needs two distinct axes")

    def coordinates(self, m):
        """Indices of the two axes in the stacked (inputs, outputs) vector."""
        if self.kind == S1:
            return self.first_axis, self.second_axis
        if self.kind == S2:
            return m + self.first_axis, m + self.second_axis
        return self.first_axis, m + self.second_axis

    def check(self, m, r):
        first_limit = r if self.kind == S2 else m
        second_limit = m if self.kind == S1 else r
        if not (0 <= self.first_axis < first_limit and 0 <= self.second_axis < second_limit):
            raise InputError(f"section axes out of range for {m} inputs and {r} outputs")
        return self

    def axis_labels(self, m):
        return tuple(
            f"x{c + 1}" if c < m else f"y{c - m + 1}" for c in self.coordinates(m)
        )

    def lift(self, m, a, b):
        point = np.concatenate([self.base.x, self.base.y]).astype(float)
        ca, cb = self.coordinates(m)
        point[ca], point[cb] = a, b
        return point


@dataclass(frozen=True, eq=False)
class SectionPolyline:
    spec: SectionSpec
    vertices: np.ndarray
    left_ray: tuple = None
    right_ray: tuple = None
    sample_count: int = 0
    diagnostic: str = None

    def __len__(self):
        return len(self.vertices)

    def slopes(self):
        v = self.vertices
        if len(v) < 2:
            return np.zeros(0)
        return np.diff(v[:, 1]) / np.diff(v[:, 0])


class _Section:
    """LP machinery for one section."""

    def __init__(self, dataset, spec):
        spec.check(dataset.m, dataset.r)
        self.tech = tech = technology(dataset)
        self.spec = spec
        m, r, n = tech.m, tech.r, tech.n
        self.ca, self.cb = spec.coordinates(m)
        G = np.vstack([tech.Xs, tech.Ys])  # scaled generator coordinates, one row per coordinate
        base = np.concatenate(tech.scaled(spec.base.x, spec.base.y))
        self.G, self.base = G, base

        rows, rhs, senses = [], [], []
        for c in range(m + r):
            if c in (self.ca, self.cb):
                continue
            rows.append(G[c]), rhs.append(base[c]), senses.append(LE if c < m else GE)
        rows.append(np.ones(n)), rhs.append(1.0), senses.append(EQ)
        self.fixed = (np.array(rows), np.array(rhs), tuple(senses))
        self.is_input = lambda c: c < m

    def _cost(self, c):
        """Objective that improves coordinate ``c`` (min inputs, max outputs)."""
        return self.G[c] if self.is_input(c) else -self.G[c]

    def _raw(self, c, lam):
        return float(lam @ self.G[c]) * self.tech.scale[c]

    def evaluate(self, a):
        """Boundary value and slope of the second coordinate at first-axis value ``a``."""
        rows, rhs, senses = self.fixed
        sa = self.tech.scale[self.ca]
        first_sense = LE if self.is_input(self.ca) else GE
        A = np.vstack([rows, self.G[self.ca]])
        b = np.concatenate([rhs, [a / sa]])
        sol = solve_lp(LpProblem(self._cost(self.cb), A, b, senses + (first_sense,)))
        if not sol.optimal:
            return None
        sb = self.tech.scale[self.cb]
        sign = 1.0 if self.is_input(self.cb) else -1.0
        value = sign * sol.objective * sb
        slope = sign * sol.duals[-1] * sb / sa
        return value, slope

    def endpoint(self, primary, secondary):
        rows, rhs, senses = self.fixed
        first, second = solve_lexicographic(
            LpProblem(self._cost(primary), rows, rhs, senses), self._cost(secondary)
        )
        if second is None:
            return None
        lam = second.x
        return self._raw(self.ca, lam), self._raw(self.cb, lam)

    def ends(self):
        """Leftmost and rightmost vertices of the curve."""
        if self.spec.kind == S2:
            return self.endpoint(self.cb, self.ca), self.endpoint(self.ca, self.cb)
        return self.endpoint(self.ca, self.cb), self.endpoint(self.cb, self.ca)


def boundary_point(dataset, spec, value):
    """Boundary value of the second axis at first-axis ``value``; ``None`` off the domain."""
    out = _Section(dataset, spec).evaluate(value)
    return None if out is None else out[0]


def _same_slope(g1, g2, floor):
    """Slopes equal up to ``SLOPE_TOL`` relative, or up to ``floor`` (solver noise)."""
    return abs(g1 - g2) <= SLOPE_TOL * max(abs(g1), abs(g2)) + floor


def _refine(section, left, right, slope_floor, val_tol, loc_tol, depth=0):
    """Breakpoints strictly between two evaluated samples ``(a, f, g)``."""
    (al, fl, gl), (ar, fr, gr) = left, right
    if _same_slope(gl, gr, slope_floor) or ar - al <= loc_tol:
        return []
    m = (fr - fl + gl * al - gr * ar) / (gl - gr)
    if not np.isfinite(m):
        m = 0.5 * (al + ar)
    if m <= al + loc_tol:
        return [(al, fl)]
    if m >= ar - loc_tol:
        return [(ar, fr)]
    out = section.evaluate(m)
    if out is None:
        return []
    fm, gm = out
    if abs(fm - (fl + gl * (m - al))) <= val_tol or depth >= 60:
        return [(m, fm)]
    mid = (m, fm, gm)
    return (
        _refine(section, left, mid, slope_floor, val_tol, loc_tol, depth + 1)
        + [(m, fm)]
        + _refine(section, mid, right, slope_floor, val_tol, loc_tol, depth + 1)
    )


def _prune(points, slope_floor, loc_tol):
    pts = sorted(points)
    merged = []
    for p in pts:
        if merged and p[0] - merged[-1][0] <= loc_tol:
            continue
        merged.append(p)
    changed = True
    while changed and len(merged) > 2:
        changed = False
        for i in range(1, len(merged) - 1):
            (a0, b0), (a1, b1), (a2, b2) = merged[i - 1], merged[i], merged[i + 1]
            s1 = (b1 - b0) / (a1 - a0)
            s2 = (b2 - b1) / (a2 - a1)
            if _same_slope(s1, s2, slope_floor):
                del merged[i]
                changed = True
                break
    return merged


def section_polyline(dataset, spec, samples=64):
    """Trace a section as a minimal vertex list plus its weakly efficient tails."""
    if samples < 2:
        raise InputError("a section sweep needs at least 2 samples")
    section = _Section(dataset, spec)
    left, right = section.ends()
    if left is None or right is None:
        return SectionPolyline(spec, np.zeros((0, 2)), sample_count=0, diagnostic="empty section domain")

    a_lo, a_hi = left[0], right[0]
    sa, sb = section.tech.scale[section.ca], section.tech.scale[section.cb]
    loc_tol = 1e-9 * max(a_hi - a_lo, 1e-12 * sa)
    val_tol = 1e-9 * sb
    # slopes are compared relative to themselves; the floor (in column units)
    # only absorbs noise in the dual prices, so the result does not depend on
    # how finely the axis was sampled
    slope_floor = 1e-9 * sb / sa
    points = [left, right]
    count = 1
    if a_hi - a_lo > 1e-12 * sa:
        grid = np.linspace(a_lo, a_hi, samples)
        evals = []
        for a in grid:
            out = section.evaluate(a)
            if out is not None:
                evals.append((a, out[0], out[1]))
        count = len(evals)
        for lo, hi in zip(evals, evals[1:]):
            points += _refine(section, lo, hi, slope_floor, val_tol, loc_tol)
        vertices = _prune(points, slope_floor, loc_tol)
    else:
        vertices = [left]

    vertices = np.array(vertices, dtype=float)
    tiny = 1e-12
    kind = spec.kind
    if kind == S1:
        lray, rray = (0.0, 1.0), (1.0, 0.0)
    elif kind == S3:
        lray = (0.0, -1.0) if vertices[0, 1] > tiny * sb else None
        rray = (1.0, 0.0)
    else:
        lray = (-1.0, 0.0) if vertices[0, 0] > tiny * sa else None
        rray = (0.0, -1.0) if vertices[-1, 1] > tiny * sb else None
    return SectionPolyline(spec, vertices, lray, rray, count)


def format_polyline(poly, base_label="free", m=None, annex=None):
    """Render a polyline in the tab-separated export format.

    ``annex`` is an optional iterable of ``(unit_id, a, b)`` orthogonal
    projections of other units, written as comment lines after the rays.
    """
    spec = poly.spec
    if m is None:
        m = spec.base.x.size
    a, b = spec.axis_labels(m)
    lines = [f"# section kind={spec.kind} base={base_label} axes={a},{b}"]
    for va, vb in poly.vertices:
        lines.append(f"{va:.12g}\t{vb:.12g}")
    if poly.left_ray is not None:
        lines.append("# ray left")
    if poly.right_ray is not None:
        lines.append("# ray right")
    if poly.diagnostic:
        lines.append(f"# diagnostic {poly.diagnostic}")
    if annex:
        lines.append("# annex projections")
        for uid, va, vb in annex:
            lines.append(f"# proj {uid}\t{va:.12g}\t{vb:.12g}")
    return "\n".join(lines) + "\n"


def parse_polyline(text):
    """Inverse of :func:`format_polyline` (annex lines are skipped)."""
    header, vertices, rays = {}, [], set()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("# section"):
            for token in line[len("# section") :].split():
                key, _, value = token.partition("=")
                header[key] = value
        elif line.startswith("# ray"):
            rays.add(line.split()[-1])
        elif line.startswith("#"):
            continue
        else:
            a, b = line.split("\t")
            vertices.append((float(a), float(b)))
    return header, np.array(vertices, dtype=float).reshape(-1, 2), rays


def projections(dataset, spec, exclude=()):
    """Orthogonal projections of units onto the section plane (display annex)."""
    ca, cb = spec.coordinates(dataset.m)
    Z = np.hstack([dataset.X, dataset.Y])
    return [(dataset.ids[j], Z[j, ca], Z[j, cb]) for j in range(dataset.n) if dataset.ids[j] not in exclude]
