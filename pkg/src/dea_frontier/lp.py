"""Dense revised simplex solver.

Every model in the package is a small, dense LP that gets solved many times
over (one per unit, per orientation, per candidate). The solver is a two-phase
revised simplex with an explicitly maintained basis inverse, Dantzig pricing,
and Bland's rule switched on after a run of degenerate pivots.

Problems are stated as::

    minimize    c @ x
    subject to  A[i] @ x  (<=, =, >=)  b[i]
                lower <= x <= upper

Basis tags are tuples of stable column keys, so the optimal basis of one
problem can warm-start a related problem built by appending rows.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InputError, NumericalFailure

LE, EQ, GE = "<=", "=", ">="
OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

FEAS_TOL = 1e-8
OPT_TOL = 1e-7
PIN_TOL = 1e-9
MAX_VARIABLES = 4096
STALL_THRESHOLD = 50

_PIVOT_TOL = 1e-9
_REFACTOR_EVERY = 32
_SENSES = {"<=": LE, "L": LE, "=": EQ, "==": EQ, "E": EQ, ">=": GE, "G": GE}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LpProblem:
    """Immutable LP in the general row-sense / bounded-variable form.

    ``senses`` defaults to all ``"<="``, ``lower`` to zeros and ``upper`` to
    ``+inf``. Arrays are copied and made read-only on construction.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    senses: tuple = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        c = np.array(self.c, dtype=float).ravel()
        n = c.size
        A = np.array(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2 or A.shape[1] != n:
            raise InputError(f"constraint matrix shape {A.shape} does not match {n} variables")
        k = A.shape[0]
        b = np.array(self.b, dtype=float).ravel()
        if b.size != k:
            raise InputError(f"rhs has {b.size} entries for {k} rows")
        senses = (LE,) * k if self.senses is None else tuple(self.senses)
        if len(senses) != k:
            raise InputError(f"{len(senses)} row senses for {k} rows")
        try:
            senses = tuple(_SENSES[s] for s in senses)
        except KeyError as exc:
            raise InputError(f"unknown row sense {exc.args[0]!r}") from None
        lower = np.zeros(n) if self.lower is None else np.array(self.lower, dtype=float).ravel()
        upper = np.full(n, np.inf) if self.upper is None else np.array(self.upper, dtype=float).ravel()
        if lower.size != n or upper.size != n:
            raise InputError("variable bounds must have one entry per variable")
        if np.any(lower > upper):
            raise InputError("empty variable bound interval (lower > upper)")
        if np.isnan(lower).any() or np.isnan(upper).any() or np.any(lower == np.inf) or np.any(upper == -np.inf):
            raise InputError("invalid variable bounds")
        if not (np.isfinite(c).all() and np.isfinite(A).all() and np.isfinite(b).all()):
            raise InputError("objective, matrix and rhs must be finite")
        for name, value in (("c", c), ("A", A), ("b", b), ("lower", lower), ("upper", upper)):
            object.__setattr__(self, name, _frozen(value))
        object.__setattr__(self, "senses", senses)

    @property
    def n_vars(self):
        return self.c.size

    @property
    def n_rows(self):
        return self.b.size

    def with_objective(self, c):
        return LpProblem(c, self.A, self.b, self.senses, self.lower, self.upper)

    def with_rhs(self, b):
        return LpProblem(self.c, self.A, b, self.senses, self.lower, self.upper)

    def add_rows(self, rows, rhs, senses):
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        return LpProblem(
            self.c,
            np.vstack([self.A, rows]),
            np.concatenate([self.b, np.ravel(rhs)]),
            self.senses + tuple(senses),
            self.lower,
            self.upper,
        )


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str
    objective: float
    x: np.ndarray
    duals: np.ndarray
    reduced_costs: np.ndarray
    basis: tuple
    iterations: int

    @property
    def optimal(self):
        return self.status == OPTIMAL

    def dual_objective(self, problem):
        """Dual objective value, including the contribution of active bounds."""
        r = self.reduced_costs
        tol = OPT_TOL * (1.0 + float(np.abs(r).max(initial=0.0)))
        at_lower = (r > tol) & np.isfinite(problem.lower)
        at_upper = (r < -tol) & np.isfinite(problem.upper)
        bound = np.where(at_lower, problem.lower, 0.0) + np.where(at_upper, problem.upper, 0.0)
        return float(problem.b @ self.duals + r @ bound)


class _StandardForm:
    """``min c x, A x = b, x >= 0, b >= 0`` rewrite of an :class:`LpProblem`."""

    def __init__(self, problem):
        A, b, c = problem.A, problem.b, problem.c
        lo, up = problem.lower, problem.upper
        n, k = problem.n_vars, problem.n_rows

        owner, sign, keys = [], [], []
        offset = np.zeros(n)
        bounded = []
        for j in range(n):
            if np.isfinite(lo[j]):
                offset[j] = lo[j]
                owner.append(j), sign.append(1.0), keys.append(("x", j))
                if np.isfinite(up[j]):
                    bounded.append((len(owner) - 1, up[j] - lo[j], j))
            elif np.isfinite(up[j]):
                offset[j] = up[j]
                owner.append(j), sign.append(-1.0), keys.append(("x", j))
            else:
                owner.append(j), sign.append(1.0), keys.append(("x+", j))
                owner.append(j), sign.append(-1.0), keys.append(("x-", j))
        owner = np.array(owner, dtype=int)
        sign = np.array(sign)
        n_struct = owner.size

        rows = A[:, owner] * sign if n_struct else np.zeros((k, 0))
        rhs = b - A @ offset
        senses = list(problem.senses)
        if bounded:
            extra = np.zeros((len(bounded), n_struct))
            for i, (col, _, _) in enumerate(bounded):
                extra[i, col] = 1.0
            rows = np.vstack([rows, extra])
            rhs = np.concatenate([rhs, [width for _, width, _ in bounded]])
            senses += [LE] * len(bounded)

        m = rows.shape[0]
        slack_rows = [i for i in range(m) if senses[i] != EQ]
        slacks = np.zeros((m, len(slack_rows)))
        for s, i in enumerate(slack_rows):
            slacks[i, s] = 1.0 if senses[i] == LE else -1.0
            keys.append(("s", i) if i < k else ("u", bounded[i - k][2]))

        self.A = np.hstack([rows, slacks])
        self.c = np.concatenate([c[owner] * sign if n_struct else np.zeros(0), np.zeros(len(slack_rows))])
        self.flip = rhs < 0
        self.A[self.flip] *= -1.0
        rhs = np.where(self.flip, -rhs, rhs)
        self.b = rhs
        self.m = m
        self.k = k
        self.keys = keys
        self.key_index = {key: i for i, key in enumerate(keys)}
        self.owner, self.sign, self.offset, self.n_struct = owner, sign, offset, n_struct

        # a slack with a +1 entry is a ready-made basic column for its row
        self.unit_slack = {}
        for s, i in enumerate(slack_rows):
            if self.A[i, n_struct + s] > 0:
                self.unit_slack[i] = n_struct + s

    def recover(self, x_std):
        x = self.offset.copy()
        np.add.at(x, self.owner, self.sign * x_std[: self.n_struct])
        return x


class _Engine:
    """Revised simplex iterations on a standard-form system."""

    def __init__(self, A, b, max_iter):
        self.A = A
        self.b = b
        self.max_iter = max_iter
        self.iterations = 0

    def factor(self, basis):
        try:
            return np.linalg.inv(self.A[:, basis])
        except np.linalg.LinAlgError:
            raise NumericalFailure("singular basis matrix", self.iterations) from None

    def run(self, cost, basis, allowed):
        """Optimize ``cost`` from a primal feasible ``basis`` (modified in place).

        Returns ``(status, Binv)``.
        """
        A, b = self.A, self.b
        m = b.size
        Binv = self.factor(basis)
        dtol = 1e-9 * max(1.0, float(np.abs(cost).max(initial=0.0)))
        degenerate = 0
        fresh = True
        since_refactor = 0
        while True:
            xB = Binv @ b
            y = cost[basis] @ Binv
            d = cost - y @ A
            d[basis] = 0.0
            candidates = allowed & (d < -dtol)
            if not candidates.any():
                if fresh:
                    return OPTIMAL, Binv
                Binv = self.factor(basis)
                fresh, since_refactor = True, 0
                continue
            if self.iterations >= self.max_iter:
                raise NumericalFailure(
                    f"simplex iteration limit {self.max_iter} exceeded", self.iterations
                )
            bland = degenerate >= STALL_THRESHOLD
            if bland:
                q = int(np.flatnonzero(candidates)[0])
            else:
                q = int(np.argmin(np.where(candidates, d, np.inf)))
            w = Binv @ A[:, q]
            pos = w > _PIVOT_TOL
            if not pos.any():
                return UNBOUNDED, Binv
            ratios = np.full(m, np.inf)
            ratios[pos] = np.maximum(xB[pos], 0.0) / w[pos]
            tmin = ratios.min()
            ties = np.flatnonzero(ratios <= tmin + 1e-12 * (1.0 + tmin))
            if bland:
                r = int(ties[np.argmin(basis[ties])])
            else:
                r = int(ties[np.argmax(w[ties])])
            degenerate = degenerate + 1 if tmin <= 1e-12 else 0
            self._pivot(Binv, basis, r, q, w)
            self.iterations += 1
            since_refactor += 1
            fresh = False
            if since_refactor >= _REFACTOR_EVERY:
                Binv = self.factor(basis)
                since_refactor = 0

    @staticmethod
    def _pivot(Binv, basis, r, q, w):
        pr = Binv[r] / w[r]
        Binv -= np.outer(w, pr)
        Binv[r] = pr
        basis[r] = q


def _failure(status, n, k, iterations, basis=()):
    nan = np.full(n, np.nan)
    value = {INFEASIBLE: np.nan, UNBOUNDED: -np.inf}[status]
    return LpSolution(status, value, nan, np.full(k, np.nan), nan.copy(), tuple(basis), iterations)


def _check_size(problem, max_vars):
    if problem.n_vars > max_vars:
        raise InputError(f"{problem.n_vars} variables exceed the configured maximum {max_vars}")


def solve_lp(problem, basis=None, *, max_iter=None, max_vars=MAX_VARIABLES, require_warm=False):
    """Solve ``problem`` and return an :class:`LpSolution`.

    ``basis`` is an optional basis tag from an earlier solve; it is used when
    it names a nonsingular, primal feasible basis of this problem and ignored
    otherwise (or, with ``require_warm``, answered with ``None``).
    """
    if not isinstance(problem, LpProblem):
        raise InputError("solve_lp expects an LpProblem")
    _check_size(problem, max_vars)
    sf = _StandardForm(problem)
    m, ncols = sf.A.shape
    n, k = problem.n_vars, problem.n_rows
    if max_iter is None:
        max_iter = 50 * (m + ncols) + 1000
    feas_tol = FEAS_TOL * (1.0 + float(np.abs(sf.b).max(initial=0.0)))

    if m == 0:
        # only bounds: each variable sits at the bound its cost prefers
        x_std = np.zeros(ncols)
        if np.any(sf.c < 0):
            return _failure(UNBOUNDED, n, k, 0)
        x = sf.recover(x_std)
        return LpSolution(OPTIMAL, float(problem.c @ x), x, np.zeros(0), problem.c.copy(), (), 0)

    engine = None
    start = _warm_basis(sf, basis, feas_tol)
    if start is None and require_warm:
        return None
    if start is not None:
        engine = _Engine(sf.A, sf.b, max_iter)
        basis_idx = start
        A_full = sf.A
        cost = sf.c
        allowed = np.ones(ncols, dtype=bool)
    else:
        init, art_rows = [], []
        for i in range(m):
            if i in sf.unit_slack:
                init.append(sf.unit_slack[i])
            else:
                init.append(ncols + len(art_rows))
                art_rows.append(i)
        n_art = len(art_rows)
        art = np.zeros((m, n_art))
        art[art_rows, np.arange(n_art)] = 1.0
        A_full = np.hstack([sf.A, art])
        engine = _Engine(A_full, sf.b, max_iter)
        basis_idx = np.array(init, dtype=int)
        if n_art:
            c1 = np.concatenate([np.zeros(ncols), np.ones(n_art)])
            status, Binv = engine.run(c1, basis_idx, np.ones(ncols + n_art, dtype=bool))
            infeas = float(c1[basis_idx] @ (Binv @ sf.b))
            if infeas > feas_tol:
                return _failure(INFEASIBLE, n, k, engine.iterations)
            _drive_out_artificials(engine, basis_idx, Binv, ncols)
        cost = np.concatenate([sf.c, np.zeros(n_art)])
        allowed = np.concatenate([np.ones(ncols, dtype=bool), np.zeros(n_art, dtype=bool)])

    status, Binv = engine.run(cost, basis_idx, allowed)
    keys = sf.keys + [("a", i) for i in range(A_full.shape[1] - ncols)]
    tag = tuple(keys[j] for j in basis_idx)
    if status == UNBOUNDED:
        return _failure(UNBOUNDED, n, k, engine.iterations, tag)

    xB = Binv @ sf.b
    x_std = np.zeros(A_full.shape[1])
    x_std[basis_idx] = np.where(xB < 0, np.maximum(xB, 0.0), xB)
    x = sf.recover(x_std[:ncols])
    y = cost[basis_idx] @ Binv
    y = np.where(sf.flip, -y, y)
    duals = y[:k]
    reduced = problem.c - problem.A.T @ duals
    return LpSolution(OPTIMAL, float(problem.c @ x), x, duals, reduced, tag, engine.iterations)


def _warm_basis(sf, basis, feas_tol):
    if basis is None:
        return None
    try:
        idx = np.array([sf.key_index[key] for key in basis], dtype=int)
    except (KeyError, TypeError):
        return None
    if idx.size != sf.m or np.unique(idx).size != idx.size:
        return None
    B = sf.A[:, idx]
    if np.linalg.cond(B) > 1e12:
        return None
    xB = np.linalg.solve(B, sf.b)
    if xB.min(initial=0.0) < -feas_tol:
        return None
    return idx


def _drive_out_artificials(engine, basis, Binv, ncols):
    for r in range(basis.size):
        if basis[r] < ncols:
            continue
        row = Binv[r] @ engine.A[:, :ncols]
        row[basis[basis < ncols]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) <= _PIVOT_TOL:
            continue  # redundant row; its artificial stays basic at zero
        w = Binv @ engine.A[:, j]
        _Engine._pivot(Binv, basis, r, j, w)


def solve_lexicographic(stage1, objective2, *, basis=None, max_vars=MAX_VARIABLES):
    """Optimize ``objective2`` over the optimal face of ``stage1``.

    The stage-1 optimum ``z`` is pinned by the pair of rows
    ``z - band <= c1 @ x <= z + band`` with ``band = PIN_TOL * (1 + |z|)``, and
    stage 2 is warm-started from the stage-1 basis. Returns ``(first, second)``;
    ``second`` is ``None`` when stage 1 is not optimal.
    """
    objective2 = np.asarray(objective2, dtype=float).ravel()
    if objective2.size != stage1.n_vars:
        raise InputError(
            f"stage-2 objective has {objective2.size} entries for {stage1.n_vars} variables"
        )
    first = solve_lp(stage1, basis, max_vars=max_vars)
    if not first.optimal:
        return first, None
    z = first.objective
    band = PIN_TOL * (1.0 + abs(z))
    k = stage1.n_rows
    stage2 = stage1.add_rows(
        np.vstack([stage1.c, stage1.c]), [z + band, z - band], (LE, GE)
    ).with_objective(objective2)
    warm = first.basis + (("s", k), ("s", k + 1))
    second = solve_lp(stage2, warm, max_vars=max_vars)
    if second.optimal:
        # the band lets stage 2 drift off the stage-1 optimum by up to `band`;
        # re-solve with the band closed from the same basis when it stays feasible
        exact = stage2.with_rhs(np.concatenate([stage1.b, [z, z]]))
        polished = solve_lp(exact, second.basis, max_vars=max_vars, require_warm=True)
        if polished is not None and polished.optimal:
            second = polished
    return first, second
