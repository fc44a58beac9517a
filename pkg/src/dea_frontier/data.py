"""Dataset and point containers plus the array validation helpers."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sklearn.utils import check_array

from .exceptions import DataError, InputError

ORIGINAL, ARTIFICIAL = "original", "artificial"


def check_matrix(a, name, *, n_columns=None):
    """2-D, finite, nonnegative float array (one row per unit)."""
    try:
        a = check_array(a, dtype=float, ensure_2d=True, ensure_all_finite=True)
    except ValueError as exc:
        raise DataError(f"{name}: {exc}") from None
    if n_columns is not None and a.shape[1] != n_columns:
        raise InputError(f"{name} has {a.shape[1]} columns, expected {n_columns}")
    bad = np.argwhere(a < 0)
    if bad.size:
        i, j = bad[0]
        raise DataError(f"{name} has a negative entry {a[i, j]!r}", row=int(i), column=int(j))
    return a


def check_inputs_outputs(X, Y):
    """Validate an input matrix and an output matrix describing the same units."""
    X = check_matrix(X, "inputs")
    Y = check_matrix(Y, "outputs")
    if X.shape[0] != Y.shape[0]:
        raise InputError(f"inputs have {X.shape[0]} rows but outputs have {Y.shape[0]}")
    return X, Y


def check_vector(v, name, size):
    v = np.asarray(v, dtype=float).ravel()
    if v.size != size:
        raise InputError(f"{name} has {v.size} entries, expected {size}")
    if not np.isfinite(v).all():
        raise InputError(f"{name} must be finite")
    if np.any(v < 0):
        raise InputError(f"{name} must be nonnegative")
    return v


def column_scale(a):
    """Largest absolute value per column, 1 for all-zero columns."""
    s = np.abs(a).max(axis=0) if a.shape[0] else np.ones(a.shape[1])
    return np.where(s > 0, s, 1.0)


def column_range(a):
    """Max minus min per column; falls back to :func:`column_scale` when flat."""
    if not a.shape[0]:
        return np.ones(a.shape[1])
    rng = a.max(axis=0) - a.min(axis=0)
    return np.where(rng > 0, rng, column_scale(a))


@dataclass(frozen=True, eq=False)
class Point:
    """An input-output vector, observed or not."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).ravel()
        y = np.array(self.y, dtype=float).ravel()
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise InputError("point coordinates must be finite")
        if np.any(x < 0) or np.any(y < 0):
            raise InputError("point coordinates must be nonnegative")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __repr__(self):
        return f"Point(x={self.x.tolist()}, y={self.y.tolist()})"

    @property
    def coords(self):
        return np.concatenate([self.x, self.y])


@dataclass(frozen=True, eq=False)
class Dataset:
    """``n`` units with ``m`` inputs and ``r`` outputs.

    ``artificial`` flags units inserted by frontier improvement; everything
    else treats them as ordinary members of the technology.
    """

    ids: tuple
    X: np.ndarray
    Y: np.ndarray
    artificial: np.ndarray = field(default=None)

    def __post_init__(self):
        X, Y = check_inputs_outputs(self.X, self.Y)
        n = X.shape[0]
        ids = tuple(str(i) for i in self.ids)
        if n < 1 or X.shape[1] < 1 or Y.shape[1] < 1:
            raise DataError("a dataset needs at least one unit, one input and one output")
        if len(ids) != n:
            raise DataError(f"{len(ids)} ids for {n} units")
        seen = set()
        for row, uid in enumerate(ids):
            if uid in seen:
                raise DataError(f"duplicate unit id {uid!r}", row=row)
            seen.add(uid)
        for j in range(X.shape[1]):
            if not np.any(X[:, j] > 0):
                raise DataError("input column has no positive entry", column=f"x{j + 1}")
        for i in range(Y.shape[1]):
            if not np.any(Y[:, i] > 0):
                raise DataError("output column has no positive entry", column=f"y{i + 1}")
        art = np.zeros(n, dtype=bool) if self.artificial is None else np.array(self.artificial, dtype=bool).ravel()
        if art.size != n:
            raise DataError(f"{art.size} origin flags for {n} units")
        for a in (X, Y, art):
            a.setflags(write=False)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "artificial", art)

    @classmethod
    def from_arrays(cls, X, Y, ids=None, artificial=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if ids is None:
            ids = [str(j + 1) for j in range(X.shape[0])]
        return cls(tuple(ids), X, Y, artificial)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def m(self):
        return self.X.shape[1]

    @property
    def r(self):
        return self.Y.shape[1]

    def __len__(self):
        return self.n

    def index(self, unit_id):
        try:
            return self.ids.index(str(unit_id))
        except ValueError:
            raise InputError(f"unknown unit id {unit_id!r}") from None

    def point(self, j):
        return Point(self.X[j], self.Y[j])

    @cached_property
    def original_indices(self):
        return np.flatnonzero(~self.artificial)

    @cached_property
    def zero_output_rows(self):
        """Units with an all-zero output vector; accepted but never efficient."""
        return np.flatnonzero(~self.Y.any(axis=1))

    @cached_property
    def scale(self):
        """Per-coordinate (inputs then outputs) magnitude used to condition LPs."""
        return np.concatenate([column_scale(self.X), column_scale(self.Y)])

    @cached_property
    def spread(self):
        """Per-coordinate range: the unit of offsets, probes and gaps."""
        return np.concatenate([column_range(self.X), column_range(self.Y)])

    def append(self, X, Y, ids, artificial=True):
        X = np.atleast_2d(np.asarray(X, dtype=float)).reshape(-1, self.m)
        Y = np.atleast_2d(np.asarray(Y, dtype=float)).reshape(-1, self.r)
        flags = np.full(X.shape[0], bool(artificial))
        return Dataset(
            self.ids + tuple(ids),
            np.vstack([self.X, X]),
            np.vstack([self.Y, Y]),
            np.concatenate([self.artificial, flags]),
        )

    def subset(self, indices):
        indices = np.asarray(indices, dtype=int)
        return Dataset(
            tuple(self.ids[j] for j in indices), self.X[indices], self.Y[indices], self.artificial[indices]
        )

    def originals(self):
        return self.subset(self.original_indices)

    def check_point(self, p):
        if not isinstance(p, Point):
            raise InputError("expected a Point")
        if p.x.size != self.m or p.y.size != self.r:
            raise InputError(
                f"point has dimensions ({p.x.size}, {p.y.size}), dataset has ({self.m}, {self.r})"
            )
        return p
