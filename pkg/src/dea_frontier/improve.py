"""Frontier improvement with artificial units.

The procedure has four parts:

1. *Smoothing terminal units.* For every terminal unit, every terminal
   direction and every section containing that direction, a candidate is
   placed a little outside T next to the infinite edge. Its offset is halved
   until no originally efficient unit is lost. Candidates are tested one at
   a time against the original units and then inserted together.
2. *Offset correction.* If the joint insertion breaks an originally
   efficient unit, the artificial units that take part in the dominating
   combination are pulled closer to the frontier. Inefficient artificial
   units are then dropped.
3. *Removing weak projections.* Every original unit whose projection (input
   or output orientation) carries a nonzero maximal slack gets an artificial
   unit on its radial ray just outside T. The unit is pushed back towards the
   frontier while it breaks an originally efficient unit.
4. *Radial correction.* A last corrective pass of the same kind as part 2,
   followed by certification of the three end conditions: originally
   efficient units stay efficient, no original unit is terminal, and every
   original unit has zero maximal slacks in both orientations.

Every LP in the loop runs on a working :class:`~dea_frontier.dea.Technology`
whose column scales and ranges are frozen at the original data. Zero tests
are therefore never looser than on the final dataset.
"""

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Point
from .dea import INPUT, OUTPUT, ZERO_TOL, Technology, UnitClass, evaluate_unit
from .exceptions import ConvergenceFailure, DegeneratePlacementError, InputError
from .sections import S1, S2, S3, SectionSpec
from .terminal import INPUT_INCREASE, PROBE_OFFSET, Direction, find_terminal_units

log = logging.getLogger(__name__)

KEPT = "kept"
DELETED = "deleted-inefficient"
ABANDONED = "abandoned-underflow"
REJECTED = "rejected-interior"

_RC_TOL = 1e-9


@dataclass(frozen=True)
class ImproveParams:
    """Loop controls. Lengths ``t`` and ``eps0`` are in column-range units."""

    t: float = 0.5
    eps0: float = 0.25
    shrink: float = 0.5
    alpha0: float = 0.9
    max_halvings: int = 50
    zero_tol: float = ZERO_TOL
    max_sweeps: int = 25
    max_rounds: int = 3
    shrink_all: bool = False
    probe: float = PROBE_OFFSET

    def __post_init__(self):
        for name in ("t", "eps0", "shrink", "alpha0", "zero_tol", "probe"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InputError(f"{name} must be positive, got {value!r}")
        if not self.shrink < 1:
            raise InputError("shrink must be below 1")
        if not self.alpha0 < 1:
            raise InputError("alpha0 must be below 1")
        for name in ("max_halvings", "max_sweeps", "max_rounds"):
            if int(getattr(self, name)) < 1:
                raise InputError(f"{name} must be at least 1")


@dataclass
class ArtificialUnit:
    """An inserted point and the recipe that produced it.

    Part-1 units sit at ``base + offset * step``; part-3 units scale a radial
    projection: inputs times ``offset`` or outputs divided by ``offset``.
    """

    unit_id: str
    point: Point
    part: int
    source: str
    offset: float
    direction: Direction = None
    section: tuple = None
    orientation: str = None
    status: str = KEPT
    base: np.ndarray = field(default=None, repr=False)
    step: np.ndarray = field(default=None, repr=False)
    n_inputs: int = field(default=None, repr=False)

    @property
    def provenance(self):
        if self.part == 1:
            return f"part1:{self.source}:{self.direction}:{','.join(self.section)}"
        return f"part3:{self.source}:{self.orientation}"

    def moved(self, offset):
        """Copy placed at a different offset (same recipe)."""
        m = self.n_inputs
        if self.part == 1:
            z = np.maximum(self.base + offset * self.step, 0.0)
        else:
            z = self.base.copy()
            if self.orientation == INPUT:
                z[:m] *= offset
            else:
                z[m:] /= offset
        return replace(self, point=Point(z[:m], z[m:]), offset=offset)

    def pulled_in(self, params):
        """One corrective move towards the frontier."""
        if self.part == 1:
            return self.moved(self.offset * params.shrink)
        return self.moved(0.5 * (1.0 + self.offset))


@dataclass(frozen=True)
class LogRecord:
    part: int
    unit: str
    direction: str
    section: str
    epsilon: float
    accepted: bool
    efficient_count: int

    def __str__(self):
        return (
            f"part={self.part} unit={self.unit} direction={self.direction} section={self.section} "
            f"epsilon={self.epsilon:.9g} accepted={str(self.accepted).lower()} "
            f"efficient_count={self.efficient_count}"
        )


@dataclass(frozen=True)
class UnitSummary:
    unit_class: UnitClass
    theta: float
    eta: float
    weak_projection: bool


@dataclass
class ImprovementResult:
    improved: object
    artificials: list
    logs: list
    before: dict
    after: dict
    certificate: dict = field(default_factory=dict)
    candidates: int = 0

    @property
    def kept(self):
        return [a for a in self.artificials if a.status == KEPT]

    @property
    def certified(self):
        return bool(self.certificate) and all(v for k, v in self.certificate.items() if k.startswith("post"))


# -- placement -----------------------------------------------------------------


def _paired_coordinate(d, spec, m):
    coords = spec.coordinates(m)
    c = d.coordinate(m)
    if c not in coords:
        raise InputError(f"section {spec.kind} {spec.axis_labels(m)} does not contain direction {d}")
    return coords[1] if coords[0] == c else coords[0]


def _placement(unit, d, spec, t, spread):
    """Base point on the terminal ray and the unit offset step."""
    m = unit.x.size
    z = unit.coords.astype(float)
    spread = np.ones(z.size) if spread is None else np.asarray(spread, dtype=float)
    c = d.coordinate(m)
    p = _paired_coordinate(d, spec, m)
    base = z.copy()
    base[c] = max(base[c] + d.sign() * t * spread[c], 0.0)
    step = np.zeros(z.size)
    step[p] = -spread[p] if p < m else spread[p]
    return base, step, p


def candidate_artificial(unit, d, section, t, eps, spread=None):
    """Point ``t`` along ``d`` from ``unit`` and ``eps`` off the ray in the paired coordinate.

    The paired coordinate (the other axis of ``section``) is improved: an
    input decreases, an output increases. ``t`` and ``eps`` are in data units
    unless ``spread`` gives per-coordinate units. Coordinates are clamped at
    zero.
    """
    m = unit.x.size
    if eps < 0 or t < 0:
        raise InputError("t and eps must be nonnegative")
    base, step, p = _placement(unit, d, section, t, spread)
    z = base + eps * step
    if z[p] < 0:
        z[p] = 0.0
        if eps > 0 and base[p] <= 0:
            raise DegeneratePlacementError(
                f"paired coordinate {section.axis_labels(m)} is already zero; no room for an offset"
            )
    return Point(z[:m], z[m:])


def _sections_for(unit, d, m, r):
    """All sections through ``unit`` containing direction ``d``."""
    out = []
    if d.kind == INPUT_INCREASE:
        out += [SectionSpec(unit, S1, d.axis, k) for k in range(m) if k != d.axis]
        out += [SectionSpec(unit, S3, d.axis, i) for i in range(r)]
    else:
        out += [SectionSpec(unit, S2, d.axis, i) for i in range(r) if i != d.axis]
        out += [SectionSpec(unit, S3, k, d.axis) for k in range(m)]
    return out


# -- efficiency guard ----------------------------------------------------------


class _Guard:
    """Tracks whether originally efficient units are still efficient.

    Each protected unit keeps the dual solution of its last additive LP. A new
    generator whose column prices out nonnegatively against that dual leaves
    the optimum unchanged, so the LP is only re-solved when the screen fails.
    """

    def __init__(self, tech, protected, tol):
        self.tech = tech
        self.protected = list(protected)
        self.tol = tol
        self.duals = {}
        for j in self.protected:
            ok, sol = tech.is_efficient_point(tech.X[j], tech.Y[j], tol)
            if ok:
                self.duals[j] = sol.duals

    def check(self, X_new, Y_new):
        """Return ``(broken, trial_tech, fresh_duals, solutions_of_broken)``."""
        X_new = np.atleast_2d(X_new)
        Y_new = np.atleast_2d(Y_new)
        trial = self.tech.extended(X_new, Y_new)
        cols = np.array([trial.column(x, y) for x, y in zip(X_new, Y_new)]) if len(X_new) else None
        broken, fresh, sols = [], {}, {}
        for j in self.protected:
            dual = self.duals.get(j)
            if dual is not None and (cols is None or np.all(-(cols @ dual) >= -_RC_TOL)):
                continue
            ok, sol = trial.is_efficient_point(trial.X[j], trial.Y[j], self.tol)
            if ok:
                fresh[j] = sol.duals
            else:
                broken.append(j)
                sols[j] = sol
        return broken, trial, fresh, sols

    def accept(self, trial, fresh):
        self.tech = trial
        self.duals.update(fresh)


def _efficient_count(n_protected, broken):
    return n_protected - len(broken)


# -- parts ---------------------------------------------------------------------


class _Ids:
    def __init__(self, taken):
        self.taken = set(taken)
        self.counter = 0

    def __call__(self):
        while True:
            self.counter += 1
            uid = f"A{self.counter}"
            if uid not in self.taken:
                self.taken.add(uid)
                return uid


def _summaries(tech, ids, indices):
    out = {}
    for j in indices:
        ev = evaluate_unit(_IdView(ids), j, tech)
        out[ids[j]] = UnitSummary(ev.unit_class, ev.theta, ev.eta, ev.weak_projection)
    return out


class _IdView:
    """Minimal stand-in for a Dataset where only ``ids`` is read."""

    def __init__(self, ids):
        self.ids = ids


def smooth_terminal_units(dataset, report, params=None, *, _state=None):
    """Part 1: one candidate per (terminal unit, direction, section)."""
    params = ImproveParams() if params is None else params
    state = _state or _State(dataset, params)
    guard = _Guard(state.tech0, state.protected, params.zero_tol)
    m, r = dataset.m, dataset.r
    out = []
    for uid, dirs in report.directions.items():
        if not dirs:
            continue
        j = dataset.index(uid)
        unit = dataset.point(j)
        for d in dirs:
            for spec in _sections_for(unit, d, m, r):
                labels = ",".join(spec.axis_labels(m))
                try:
                    base, step, _ = _placement(unit, d, spec, params.t, state.spread)
                    candidate_artificial(unit, d, spec, params.t, params.eps0, state.spread)
                except DegeneratePlacementError:
                    state.record(1, uid, str(d), labels, params.eps0, False, len(state.protected))
                    continue
                art = ArtificialUnit(
                    state.new_id(), None, 1, uid, params.eps0, d, spec.axis_labels(m), base=base, step=step, n_inputs=m
                ).moved(params.eps0)
                state.candidates += 1
                if state.tech0.contains(art.point.x, art.point.y):
                    art.status = REJECTED
                    state.record(1, uid, str(d), labels, art.offset, False, len(state.protected))
                    out.append(art)
                    continue
                for _ in range(params.max_halvings + 1):
                    broken, _, _, _ = guard.check(art.point.x, art.point.y)
                    ok = not broken
                    state.record(1, uid, str(d), labels, art.offset, ok, _efficient_count(len(state.protected), broken))
                    if ok:
                        break
                    art = art.pulled_in(params)
                else:
                    art.status = ABANDONED
                out.append(art)
    return out


def corrective_pass(dataset, artificials, params=None, mode="offset", *, _state=None):
    """Parts 2 and 4: pull responsible artificial units in until nothing is broken.

    Returns the updated list; inefficient artificial units end up with status
    ``deleted-inefficient``.
    """
    if mode not in ("offset", "radial"):
        raise InputError(f"unknown corrective mode {mode!r}")
    params = ImproveParams() if params is None else params
    state = _state or _State(dataset, params)
    part = 2 if mode == "offset" else 4
    arts = list(artificials)
    base_n = dataset.n
    for _ in range(params.max_halvings + 1):
        live = [k for k, a in enumerate(arts) if a.status == KEPT]
        guard = _Guard(state.tech0, state.protected, params.zero_tol)
        X = np.array([arts[k].point.x for k in live]).reshape(-1, dataset.m)
        Y = np.array([arts[k].point.y for k in live]).reshape(-1, dataset.r)
        broken, trial, _, sols = guard.check(X, Y)
        if not broken:
            break
        responsible = set()
        for j in broken:
            lam = sols[j].x[: trial.n] if sols[j] is not None else np.zeros(trial.n)
            used = np.flatnonzero(lam[base_n:] > params.zero_tol)
            responsible.update(live[i] for i in used)
        if params.shrink_all or not responsible:
            responsible = set(live)
        count = _efficient_count(len(state.protected), broken)
        for k in sorted(responsible):
            arts[k] = arts[k].pulled_in(params)
            state.record(part, arts[k].unit_id, _dir_label(arts[k]), _sec_label(arts[k]), arts[k].offset, False, count)
    else:
        raise ConvergenceFailure(
            f"part {part}: originally efficient units still broken after {params.max_halvings} corrective rounds",
            broken=tuple(dataset.ids[j] for j in broken),
            partial=arts,
        )
    _drop_inefficient(state, arts, part)
    return arts


def _dir_label(art):
    return str(art.direction) if art.direction is not None else "-"


def _sec_label(art):
    return ",".join(art.section) if art.section else "-"


def _drop_inefficient(state, arts, part):
    live = [k for k, a in enumerate(arts) if a.status == KEPT]
    if not live:
        return
    tech = state.tech0.extended(
        np.array([arts[k].point.x for k in live]), np.array([arts[k].point.y for k in live])
    )
    for pos, k in enumerate(live):
        i = state.tech0.n + pos
        ok, _ = tech.is_efficient_point(tech.X[i], tech.Y[i], state.params.zero_tol)
        if not ok:
            arts[k].status = DELETED
            state.record(part, arts[k].unit_id, _dir_label(arts[k]), _sec_label(arts[k]), arts[k].offset, False, len(state.protected))


def remove_weak_projections(dataset, params=None, *, _state=None, _artificials=()):
    """Part 3: radial artificial units for every weak projection of an original unit."""
    params = ImproveParams() if params is None else params
    state = _state or _State(dataset, params)
    kept = [a for a in _artificials if a.status == KEPT]
    tech = state.tech0.extended(
        np.array([a.point.x for a in kept]).reshape(-1, dataset.m),
        np.array([a.point.y for a in kept]).reshape(-1, dataset.r),
    )
    guard = _Guard(tech, state.protected, params.zero_tol)
    added = []
    targets = [j for j in range(dataset.n) if j not in set(state.protected)]
    for _ in range(params.max_sweeps):
        inserted = 0
        pending = False
        for j in targets:
            for orientation in (INPUT, OUTPUT):
                x, y = dataset.X[j], dataset.Y[j]
                if orientation == OUTPUT and not np.any(y > 0):
                    continue
                model = guard.tech.input_model if orientation == INPUT else guard.tech.output_model
                res = model(x, y)
                if res.slacks_zero(params.zero_tol):
                    continue
                pending = True
                radial = np.concatenate(res.radial_point)
                art = ArtificialUnit(
                    state.new_id(), None, 3, dataset.ids[j], params.alpha0,
                    orientation=orientation, base=radial, n_inputs=dataset.m,
                ).moved(params.alpha0)
                state.candidates += 1
                for _ in range(params.max_halvings + 1):
                    broken, trial, fresh, _ = guard.check(art.point.x, art.point.y)
                    ok = not broken
                    state.record(3, dataset.ids[j], "-", orientation, art.offset, ok, _efficient_count(len(state.protected), broken))
                    if ok:
                        guard.accept(trial, fresh)
                        inserted += 1
                        break
                    art = art.pulled_in(params)
                else:
                    art.status = ABANDONED
                added.append(art)
        if not pending or not inserted:
            break
    return added


# -- driver --------------------------------------------------------------------


class _State:
    def __init__(self, dataset, params):
        self.dataset = dataset
        self.params = params
        self.tech0 = Technology(dataset.X, dataset.Y, dataset.scale, dataset.spread, params.zero_tol)
        self.spread = dataset.spread
        self.logs = []
        self.candidates = 0
        self.new_id = _Ids(dataset.ids)
        originals = dataset.original_indices
        self.before = _summaries(self.tech0, dataset.ids, originals)
        self.protected = [j for j in originals if self.before[dataset.ids[j]].unit_class.efficient]

    def record(self, part, unit, direction, section, eps, accepted, count):
        rec = LogRecord(part, unit, direction, section, float(eps), bool(accepted), int(count))
        self.logs.append(rec)
        log.debug("%s", rec)


def _assemble(dataset, arts):
    kept = [a for a in arts if a.status == KEPT]
    if not kept:
        return dataset
    return dataset.append(
        np.array([a.point.x for a in kept]), np.array([a.point.y for a in kept]), [a.unit_id for a in kept]
    )


def certify(original, improved, before=None, params=None):
    """Check the three end conditions on ``improved``; returns a dict of flags and details."""
    params = ImproveParams() if params is None else params
    from .dea import technology

    tech = technology(improved)
    originals = [improved.index(uid) for uid in original.ids]
    if before is None:
        before = _summaries(technology(original), original.ids, range(original.n))
    after, lost, weak = {}, [], []
    for j in originals:
        ev = evaluate_unit(improved, j, tech)
        uid = improved.ids[j]
        after[uid] = UnitSummary(ev.unit_class, ev.theta, ev.eta, ev.weak_projection)
        if before[uid].unit_class.efficient and not ev.unit_class.efficient:
            lost.append(uid)
        if ev.weak_projection:
            weak.append(uid)
    extreme = [j for j in originals if after[improved.ids[j]].unit_class == UnitClass.EXTREME]
    report = find_terminal_units(improved, extreme, params.probe)
    return {
        "post1_efficient_kept": not lost,
        "post2_no_terminal": not report.terminal,
        "post3_no_weak_projection": not weak,
        "lost": tuple(lost),
        "terminal": tuple(report.terminal),
        "weak": tuple(weak),
        "after": after,
    }


def improve_frontier(dataset, params=None):
    """Run parts 1-4 and certify the result.

    Raises :class:`ConvergenceFailure` (with the partial
    :class:`ImprovementResult` attached) if certification fails after
    ``params.max_rounds`` rounds.
    """
    params = ImproveParams() if params is None else params
    original = dataset.originals() if dataset.artificial.any() else dataset
    state = _State(original, params)
    if not state.protected:
        raise InputError("frontier improvement needs at least one efficient unit")
    arts = []
    cert = {}
    result = None
    targets = None  # original units still to smooth; None means "detect on the originals"
    for round_no in range(params.max_rounds):
        current = _assemble(original, arts)
        if targets is None:
            report = find_terminal_units(original, None, params.probe)
        else:
            report = find_terminal_units(current, targets, params.probe)
        arts += smooth_terminal_units(original, report, params, _state=state)
        arts = corrective_pass(original, arts, params, "offset", _state=state)
        arts += remove_weak_projections(original, params, _state=state, _artificials=arts)
        arts = corrective_pass(original, arts, params, "radial", _state=state)
        improved = _assemble(original, arts)
        cert = certify(original, improved, state.before, params)
        result = ImprovementResult(
            improved, arts, state.logs, state.before, cert.pop("after"), cert, state.candidates
        )
        log.info("round %d: %s", round_no + 1, {k: v for k, v in cert.items() if k.startswith("post")})
        if result.certified:
            return result
        if cert["lost"]:
            break
        targets = [improved.index(uid) for uid in cert["terminal"]]
    raise ConvergenceFailure(
        "frontier improvement could not be certified: "
        + ", ".join(k for k, v in cert.items() if k.startswith("post") and not v),
        broken=tuple(cert.get("lost", ())) + tuple(cert.get("terminal", ())) + tuple(cert.get("weak", ())),
        partial=result,
    )
