"""Brute-force reference implementations used by the tests.

None of these share code with the package under test:

* ``rational_simplex`` -- dense tableau simplex in exact ``Fraction``
  arithmetic with Bland's rule (never cycles, no rounding).
* ``enum_lp`` -- exhaustive enumeration of basic solutions of a small
  equality-form LP in floating point.
* ``lambda_grid_input_score`` -- grids the intensity simplex (n = 3 only).
* ``Facets`` -- the H-representation of a BCC technology, found by
  enumerating every hyperplane through D generators; face dimensions then
  follow from ranks of active normals.
"""

import itertools
from fractions import Fraction

import numpy as np

# -- exact LP ----------------------------------------------------------------------


def rational_simplex(c, A, b, senses):
    """Minimize ``c x`` s.t. ``A x (<=,=,>=) b``, ``x >= 0``, exactly.

    Returns ``("optimal", value)``, ``("infeasible", None)`` or ``("unbounded", None)``.
    """
    c = [Fraction(v) for v in c]
    rows = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    n = len(c)
    k = len(rows)
    # slacks, then flip rows so that b >= 0
    n_slack = sum(1 for s in senses if s != "=")
    T = []
    basis = []
    slack_col = n
    need_art = []
    for i, (row, rhs, s) in enumerate(zip(rows, b, senses)):
        full = row + [Fraction(0)] * n_slack
        if s != "=":
            full[slack_col] = Fraction(1 if s == "<=" else -1)
            slack_col += 1
        if rhs < 0:
            full = [-v for v in full]
            rhs = -rhs
        T.append(full + [rhs])
    width = n + n_slack
    for i in range(k):
        unit = None
        for j in range(n, width):
            if T[i][j] == 1 and all(T[r][j] == 0 for r in range(k) if r != i):
                unit = j
                break
        basis.append(unit)
        if unit is None:
            need_art.append(i)
    n_art = len(need_art)
    for i in range(k):
        rhs = T[i].pop()
        T[i] += [Fraction(0)] * n_art + [rhs]
    for a, i in enumerate(need_art):
        T[i][width + a] = Fraction(1)
        basis[i] = width + a
    total = width + n_art

    def pivot(r, q):
        piv = T[r][q]
        T[r] = [v / piv for v in T[r]]
        for i in range(k):
            if i != r and T[i][q] != 0:
                f = T[i][q]
                T[i] = [a - f * bb for a, bb in zip(T[i], T[r])]
        basis[r] = q

    def run(cost, allowed):
        while True:
            cb = [cost[j] for j in basis]
            entering = None
            for j in range(total):
                if not allowed[j] or j in basis:
                    continue
                red = cost[j] - sum(cb[i] * T[i][j] for i in range(k))
                if red < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"
            best = None
            for i in range(k):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return "unbounded"
            pivot(best[1], entering)

    if n_art:
        cost1 = [Fraction(0)] * width + [Fraction(1)] * n_art
        run(cost1, [True] * total)
        if sum(T[i][-1] for i in range(k) if basis[i] >= width) > 0:
            return "infeasible", None
        for i in range(k):
            if basis[i] >= width:
                for j in range(width):
                    if T[i][j] != 0 and j not in basis:
                        pivot(i, j)
                        break
    cost2 = c + [Fraction(0)] * (total - n)
    allowed = [j < width for j in range(total)]
    status = run(cost2, allowed)
    if status == "unbounded":
        return "unbounded", None
    x = [Fraction(0)] * total
    for i in range(k):
        x[basis[i]] = T[i][-1]
    return "optimal", sum(ci * xi for ci, xi in zip(c, x[:n]))


# -- exhaustive vertex enumeration ---------------------------------------------------


def enum_lp(c, A, b, tol=1e-9):
    """All basic feasible solutions of ``A x = b, x >= 0``; returns ``(best value, best x, all x)``.

    Minimizes ``c``. Only for a handful of rows and columns.
    """
    A = np.asarray(A, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    k, n = A.shape
    rank = np.linalg.matrix_rank(A)
    # drop redundant rows
    keep = []
    for i in range(k):
        if np.linalg.matrix_rank(A[keep + [i]]) > len(keep):
            keep.append(i)
    A, b = A[keep], b[keep]
    k = rank
    vertices = []
    for cols in itertools.combinations(range(n), k):
        B = A[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if xb.min() < -tol * (1 + np.abs(b).max()):
            continue
        x = np.zeros(n)
        x[list(cols)] = np.maximum(xb, 0)
        vertices.append(x)
    if not vertices:
        return None, None, []
    values = [c @ x for x in vertices]
    j = int(np.argmin(values))
    return values[j], vertices[j], vertices


def _dea_system(X, Y, xo, yo, orientation):
    """Equality form of the envelopment LP: variables (lambda, score, s-, s+)."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    n, m = X.shape
    r = Y.shape[1]
    A = np.zeros((m + r + 1, n + 1 + m + r))
    A[:m, :n] = X.T
    A[m : m + r, :n] = Y.T
    A[:m, n + 1 : n + 1 + m] = np.eye(m)
    A[m : m + r, n + 1 + m :] = -np.eye(r)
    A[-1, :n] = 1
    b = np.zeros(m + r + 1)
    b[-1] = 1
    if orientation == "input":
        A[:m, n] = -xo
        b[m : m + r] = yo
    else:
        A[m : m + r, n] = -yo
        b[:m] = xo
    return A, b


def enum_score(X, Y, xo, yo, orientation="input"):
    """Two-stage score and maximal slack vector by vertex enumeration.

    Slacks are returned column-scaled (divided by the column max) to match
    the package's zero test. ``None`` if the point is outside T.
    """
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    n, m = X.shape
    A, b = _dea_system(X, Y, np.asarray(xo, float), np.asarray(yo, float), orientation)
    c = np.zeros(A.shape[1])
    c[n] = 1 if orientation == "input" else -1
    best, _, verts = enum_lp(c, A, b)
    if best is None:
        return None
    score = best if orientation == "input" else -best
    scale = np.concatenate([np.abs(X).max(0), np.abs(Y).max(0)])
    scale[scale == 0] = 1
    face = [v for v in verts if abs(c @ v - best) <= 1e-9 * (1 + abs(best))]
    slack_sets = [v[n + 1 :] / scale for v in face]
    s = max(slack_sets, key=lambda v: v.sum())
    return score, s


def enum_member(X, Y, xo, yo):
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    n, m = X.shape
    r = Y.shape[1]
    A = np.zeros((m + r + 1, n + m + r))
    A[:m, :n] = X.T
    A[:m, n : n + m] = np.eye(m)
    A[m : m + r, :n] = Y.T
    A[m : m + r, n + m :] = -np.eye(r)
    A[-1, :n] = 1
    b = np.concatenate([xo, yo, [1]])
    best, _, _ = enum_lp(np.zeros(A.shape[1]), A, b)
    return best is not None


def enum_pareto_efficient(X, Y, xo, yo, tol=1e-7):
    """No point of T dominates (xo, yo): maximal column-scaled slack sum is zero."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    n, m = X.shape
    r = Y.shape[1]
    scale = np.concatenate([np.abs(X).max(0), np.abs(Y).max(0)])
    A = np.zeros((m + r + 1, n + m + r))
    A[:m, :n] = X.T
    A[:m, n : n + m] = np.eye(m)
    A[m : m + r, :n] = Y.T
    A[m : m + r, n + m :] = -np.eye(r)
    A[-1, :n] = 1
    b = np.concatenate([xo, yo, [1]])
    c = np.zeros(A.shape[1])
    c[n:] = -1 / scale
    best, _, _ = enum_lp(c, A, b)
    return best is not None and -best <= tol


def enum_classify(X, Y, j):
    """Unit class of row ``j`` from the definitions, all LPs by enumeration."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    xo, yo = X[j], Y[j]
    th, s_in = enum_score(X, Y, xo, yo, "input")
    one_in = abs(th - 1) <= 1e-6
    zero_in = np.all(s_in <= 1e-6)
    if np.any(yo > 0):
        et, s_out = enum_score(X, Y, xo, yo, "output")
        one_out = abs(et - 1) <= 1e-6
        zero_out = np.all(s_out <= 1e-6)
    else:
        one_out = zero_out = False
    if one_in and one_out and zero_in and zero_out:
        others = [i for i in range(len(X)) if i != j]
        if others and enum_member(X[others], Y[others], xo, yo):
            return "efficient-nonextreme"
        return "extreme-efficient"
    if one_in or one_out:
        return "weakly-efficient"
    return "inefficient"


def enum_gap(X, Y, xo, yo):
    """Largest delta with (xo - delta*range, yo + delta*range) in T (delta free)."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    n, m = X.shape
    r = Y.shape[1]
    Z = np.hstack([X, Y])
    rng = Z.max(0) - Z.min(0)
    mx = np.abs(Z).max(0)
    rng = np.where(rng > 0, rng, np.where(mx > 0, mx, 1))
    # variables: lambda, d+, d-, s-, s+
    A = np.zeros((m + r + 1, n + 2 + m + r))
    A[:m, :n] = X.T
    A[:m, n] = rng[:m]
    A[:m, n + 1] = -rng[:m]
    A[:m, n + 2 : n + 2 + m] = np.eye(m)
    A[m : m + r, :n] = Y.T
    A[m : m + r, n] = -rng[m:]
    A[m : m + r, n + 1] = rng[m:]
    A[m : m + r, n + 2 + m :] = -np.eye(r)
    A[-1, :n] = 1
    b = np.concatenate([xo, yo, [1]])
    c = np.zeros(A.shape[1])
    c[n], c[n + 1] = -1, 1
    best, _, _ = enum_lp(c, A, b)
    return None if best is None else -best


# -- lambda grid (three units) -------------------------------------------------------


def lambda_grid_input_score(X, Y, xo, yo, step=1e-3):
    """min theta over a grid of the 2-simplex; theta(lambda) = max_k (lambda X)_k / xo_k."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    assert X.shape[0] == 3
    k = int(round(1 / step))
    a = np.arange(k + 1) * step
    l1, l2 = np.meshgrid(a, a, indexing="ij")
    mask = l1 + l2 <= 1 + 1e-12
    lam = np.stack([l1[mask], l2[mask], 1 - l1[mask] - l2[mask]], axis=1)
    ok = np.all(lam @ Y >= np.asarray(yo) - 1e-12, axis=1)
    if not ok.any():
        return None
    theta = np.max((lam[ok] @ X) / np.asarray(xo, float), axis=1)
    return float(theta.min())


# -- facet enumeration ---------------------------------------------------------------


class Facets:
    """H-representation ``a . z <= beta`` of a BCC technology in z = (x, y) space.

    Generators are the units (homogenized with 1) and the recession
    directions +e_k for inputs and -e_i for outputs (homogenized with 0).
    Every facet of the homogenized cone is spanned by D linearly independent
    generators, so trying every D-subset finds them all.
    """

    def __init__(self, X, Y):
        X, Y = np.asarray(X, float), np.asarray(Y, float)
        n, m = X.shape
        r = Y.shape[1]
        D = m + r
        self.D = D
        pts = np.hstack([X, Y, np.ones((n, 1))])
        rays = np.zeros((D, D + 1))
        rays[:m, :m] = np.eye(m)
        rays[m:, m:D] = -np.eye(r)
        G = np.vstack([pts, rays])
        self.scale = max(1.0, np.abs(G).max())
        rows = []
        for sub in itertools.combinations(range(len(G)), D):
            M = G[list(sub)]
            if np.linalg.matrix_rank(M, tol=1e-9) < D:
                continue
            _, _, vt = np.linalg.svd(M)
            h = vt[-1]
            vals = G @ h
            tol = 1e-9 * self.scale
            for sign in (1, -1):
                if np.all(sign * vals <= tol):
                    hh = sign * h
                    if np.linalg.norm(hh[:D]) < 1e-12:
                        continue  # the trivial face of the homogenizing coordinate
                    hh = hh / np.linalg.norm(hh[:D])
                    rows.append(hh)
        uniq = []
        for h in rows:
            if not any(np.allclose(h, u, atol=1e-9) for u in uniq):
                uniq.append(h)
        self.H = np.array(uniq)  # a . z + h_last <= 0

    def slack(self, z):
        return self.H[:, :-1] @ z + self.H[:, -1]

    def contains(self, z, tol=1e-9):
        return bool(np.all(self.slack(z) <= tol * self.scale))

    def face_dimension(self, z, tol=1e-9):
        """Dimension of the smallest face containing ``z`` (D if interior)."""
        active = np.abs(self.slack(z)) <= tol * self.scale
        if not active.any():
            return self.D
        return self.D - np.linalg.matrix_rank(self.H[active, :-1], tol=1e-9)

    def on_boundary(self, z, tol=1e-9):
        return self.face_dimension(z, tol) < self.D


def facet_terminal_directions(X, Y, j, spread, is_extreme):
    """Terminal directions of unit ``j``: the probe one range unit along each axis lies on a 1-D face."""
    X, Y = np.asarray(X, float), np.asarray(Y, float)
    if not is_extreme:
        return set()
    m = X.shape[1]
    F = Facets(X, Y)
    z = np.concatenate([X[j], Y[j]])
    if F.face_dimension(z) != 0:
        return set()
    out = set()
    for c in range(F.D):
        p = z.copy()
        if c < m:
            p[c] += spread[c]
            label = f"input-increase:{c + 1}"
        else:
            p[c] -= spread[c]
            label = f"output-decrease:{c - m + 1}"
        if F.face_dimension(p) == 1:
            out.add(label)
    return out


def spread_of(X, Y):
    Z = np.hstack([np.asarray(X, float), np.asarray(Y, float)])
    rng = Z.max(0) - Z.min(0)
    mx = np.abs(Z).max(0)
    return np.where(rng > 0, rng, np.where(mx > 0, mx, 1))


def random_small_dataset(rng, n, m, r, low=1, high=9):
    """Integer data without duplicate units and without dead columns."""
    while True:
        X = rng.integers(low, high + 1, size=(n, m)).astype(float)
        Y = rng.integers(low, high + 1, size=(n, r)).astype(float)
        Z = np.hstack([X, Y])
        if len({tuple(z) for z in Z}) == n:
            return X, Y
