"""scikit-learn style wrappers.

The estimators take inputs ``X`` (n x m) and outputs ``Y`` (n x r) as two
matrices, the way DEA data come, rather than a feature matrix plus target.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .data import Dataset, check_inputs_outputs, check_matrix
from .dea import INPUT, OUTPUT, ZERO_TOL, Technology, evaluate_all
from .exceptions import InputError
from .improve import ImproveParams, improve_frontier
from .terminal import PROBE_OFFSET, find_terminal_units


def _dataset(X, Y, ids):
    X, Y = check_inputs_outputs(X, Y)
    return Dataset.from_arrays(X, Y, ids)


class BCCEfficiency(BaseEstimator):
    """Fit a BCC technology on observed units and score points against it.

    Attributes set by ``fit``: ``scores_``, ``input_slacks_``,
    ``output_slacks_``, ``classes_`` (one entry per training unit) and
    ``dataset_``.
    """

    def __init__(self, orientation=INPUT, zero_tol=ZERO_TOL):
        self.orientation = orientation
        self.zero_tol = zero_tol

    def _check_params(self):
        if self.orientation not in (INPUT, OUTPUT):
            raise InputError(f"orientation must be {INPUT!r} or {OUTPUT!r}")
        if not self.zero_tol > 0:
            raise InputError("zero_tol must be positive")

    def fit(self, X, Y, ids=None):
        self._check_params()
        self.dataset_ = _dataset(X, Y, ids)
        self.n_inputs_, self.n_outputs_ = self.dataset_.m, self.dataset_.r
        evals = evaluate_all(self.dataset_)
        self.classes_ = np.array([str(ev.unit_class) for ev in evals], dtype=object)
        res = [ev.input if self.orientation == INPUT else ev.output for ev in evals]
        self.scores_ = np.array([np.nan if r is None else r.score for r in res])
        self.input_slacks_ = np.array([np.full(self.n_inputs_, np.nan) if r is None else r.input_slacks for r in res])
        self.output_slacks_ = np.array([np.full(self.n_outputs_, np.nan) if r is None else r.output_slacks for r in res])
        return self

    def _tech(self):
        d = self.dataset_
        return Technology(d.X, d.Y, d.scale, d.spread, self.zero_tol)

    def evaluate(self, X, Y):
        """Efficiency results for new points (rows of ``X`` and ``Y``)."""
        check_is_fitted(self, "dataset_")
        X = check_matrix(X, "inputs", n_columns=self.n_inputs_)
        Y = check_matrix(Y, "outputs", n_columns=self.n_outputs_)
        if X.shape[0] != Y.shape[0]:
            raise InputError("inputs and outputs must have the same number of rows")
        tech = self._tech()
        model = tech.input_model if self.orientation == INPUT else tech.output_model
        return [model(x, y) for x, y in zip(X, Y)]

    def score(self, X, Y):
        """Radial scores of new points; ``nan`` where the model is infeasible."""
        from .exceptions import OutsidePPSError

        out = []
        for x, y in zip(np.atleast_2d(X), np.atleast_2d(Y)):
            try:
                out.append(self.evaluate(x[None, :], y[None, :])[0].score)
            except OutsidePPSError:
                out.append(np.nan)
        return np.array(out)

    def contains(self, X, Y):
        """Boolean membership of each point in the fitted technology."""
        check_is_fitted(self, "dataset_")
        X = check_matrix(X, "inputs", n_columns=self.n_inputs_)
        Y = check_matrix(Y, "outputs", n_columns=self.n_outputs_)
        tech = self._tech()
        return np.array([tech.contains(x, y) for x, y in zip(X, Y)])


class TerminalUnits(BaseEstimator):
    """Find the terminal units of a dataset; ``report_`` holds the directions."""

    def __init__(self, probe=PROBE_OFFSET):
        self.probe = probe

    def fit(self, X, Y, ids=None):
        if not self.probe > 0:
            raise InputError("probe must be positive")
        self.dataset_ = _dataset(X, Y, ids)
        self.report_ = find_terminal_units(self.dataset_, t0=self.probe)
        self.terminal_ = np.array([bool(self.report_[uid]) for uid in self.dataset_.ids])
        return self

    def predict(self, X=None, Y=None):
        """Terminal flags of the training units (the only units this is defined for)."""
        check_is_fitted(self, "report_")
        return self.terminal_


class FrontierImprover(BaseEstimator):
    """Insert artificial units so that every projection lands on an efficient face.

    ``fit_resample(X, Y)`` returns the augmented ``(X, Y)``: original rows
    first, then the artificial units. ``result_`` keeps the full
    :class:`~dea_frontier.improve.ImprovementResult`.
    """

    def __init__(self, t=0.5, eps0=0.25, shrink=0.5, alpha0=0.9, max_halvings=50, zero_tol=ZERO_TOL):
        self.t = t
        self.eps0 = eps0
        self.shrink = shrink
        self.alpha0 = alpha0
        self.max_halvings = max_halvings
        self.zero_tol = zero_tol

    def _params(self):
        return ImproveParams(
            t=self.t, eps0=self.eps0, shrink=self.shrink, alpha0=self.alpha0,
            max_halvings=self.max_halvings, zero_tol=self.zero_tol,
        )

    def fit(self, X, Y, ids=None):
        params = self._params()
        self.dataset_ = _dataset(X, Y, ids)
        self.result_ = improve_frontier(self.dataset_, params)
        self.improved_ = self.result_.improved
        self.n_artificial_ = int(self.improved_.artificial.sum())
        return self

    def fit_resample(self, X, Y, ids=None):
        self.fit(X, Y, ids)
        return np.array(self.improved_.X), np.array(self.improved_.Y)
