"""Conditional independence tests returning p-values.

Two implementations share one small interface (``test(i, j, w) -> p`` plus a
``call_count`` counter): Fisher's z test on Gaussian data and an exact
d-separation oracle for theory-level checks.
"""

from __future__ import annotations

import csv
import logging
import math
from functools import cached_property
from typing import List, NamedTuple, Optional, Protocol, Sequence, Tuple

import numpy as np

from .graph import MixedGraph, d_separated

log = logging.getLogger(__name__)

RIDGE = 1e-10
R_CLAMP = 1.0 - 1e-12


class DataError(ValueError):
    """Malformed or degenerate input data."""


class SampleSizeError(ValueError):
    """Too few samples for the requested conditioning set size."""


class CiQuery(NamedTuple):
    i: int
    j: int
    w: Tuple[int, ...] = ()

    def validate(self, d: int) -> None:
        for v in (self.i, self.j, *self.w):
            if not 0 <= v < d:
                raise ValueError(f"invalid vertex index {v}")
        if self.i == self.j:
            raise ValueError("a CI query needs two distinct variables")
        if self.i in self.w or self.j in self.w:
            raise ValueError("conditioning set may not contain i or j")


class CiTest(Protocol):
    num_vars: int
    call_count: int

    def test(self, i: int, j: int, w: Sequence[int] = ()) -> float: ...

    def spawn(self) -> "CiTest": ...


class Dataset:
    """An ``n x d`` sample matrix with lazily cached moment matrices."""

    def __init__(self, values, column_names: Optional[Sequence[str]] = None):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise DataError("data must be a 2-d array (rows are samples)")
        n, d = values.shape
        if n < 2:
            raise DataError(f"need at least 2 samples, got {n}")
        if d < 1:
            raise DataError("need at least one column")
        if not np.all(np.isfinite(values)):
            raise DataError("data contains missing or non-finite values")
        if column_names is None:
            column_names = [f"X{k + 1}" for k in range(d)]
        column_names = [str(c) for c in column_names]
        if len(column_names) != d:
            raise DataError(f"{len(column_names)} column names for {d} columns")
        if len(set(column_names)) != d:
            raise DataError("column names must be unique")
        values.setflags(write=False)
        self.values = values
        self.column_names = column_names

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @cached_property
    def cov(self) -> np.ndarray:
        """Maximum-likelihood (divide by n) covariance matrix."""
        x = self.values - self.values.mean(axis=0)
        c = x.T @ x / self.n
        c = (c + c.T) / 2
        c.setflags(write=False)
        return c

    @cached_property
    def corr(self) -> np.ndarray:
        c = self.cov
        sd = np.sqrt(np.diag(c))
        for k, s in enumerate(sd):
            if not s > 0:
                raise DataError(f"column {self.column_names[k]!r} has zero variance")
        r = c / np.outer(sd, sd)
        np.clip(r, -1.0, 1.0, out=r)
        np.fill_diagonal(r, 1.0)
        r.setflags(write=False)
        return r

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        """Read a header row of column names followed by numeric rows."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise DataError(f"{path}: empty file") from None
            header = [h.strip() for h in header]
            rows: List[List[float]] = []
            for lineno, row in enumerate(reader, start=2):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != len(header):
                    raise DataError(
                        f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                    )
                try:
                    vals = [float(c) for c in row]
                except ValueError:
                    raise DataError(f"{path}: row {lineno} has a non-numeric cell") from None
                if not all(math.isfinite(v) for v in vals):
                    raise DataError(f"{path}: row {lineno} has a non-finite value")
                rows.append(vals)
        if not rows:
            raise DataError(f"{path}: no data rows")
        return cls(np.array(rows), header)

    def to_csv(self, path, precision: int = 17) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(self.column_names)
            fmt = f"{{:.{precision}g}}"
            for row in self.values:
                wr.writerow([fmt.format(v) for v in row])


def correlation_matrix(data: Dataset) -> np.ndarray:
    """Pearson correlation matrix of ``data`` (cached on the dataset)."""
    return data.corr


def normal_two_sided_p(z: float) -> float:
    """``2 * (1 - Phi(|z|))`` computed through erfc to avoid cancellation."""
    return math.erfc(abs(z) / math.sqrt(2.0))


def partial_correlation(corr: np.ndarray, i: int, j: int, w: Sequence[int]) -> Optional[float]:
    """Partial correlation of i and j given w from the inverse correlation submatrix.

    Returns None when the submatrix stays singular after one ridge retry.
    """
    if not w:
        return float(corr[i, j])
    idx = [i, j, *w]
    sub = corr[np.ix_(idx, idx)]
    for ridge in (0.0, RIDGE):
        m = sub + ridge * np.eye(len(idx)) if ridge else sub
        try:
            prec = np.linalg.inv(m)
        except np.linalg.LinAlgError:
            continue
        denom = prec[0, 0] * prec[1, 1]
        if np.all(np.isfinite(prec)) and denom > 0:
            return float(-prec[0, 1] / math.sqrt(denom))
    return None


def fisher_z_pvalue(r: float, n: int, k: int) -> float:
    """p-value of Fisher's z for partial correlation ``r`` with ``k`` conditioners."""
    dof = n - k - 3
    if dof < 1:
        raise SampleSizeError(f"n - |W| - 3 = {dof} < 1 (n={n}, |W|={k})")
    r = min(abs(r), R_CLAMP)
    z = 0.5 * math.log((1 + r) / (1 - r))
    return normal_two_sided_p(math.sqrt(dof) * z)


class FisherZTest:
    """Fisher's z partial-correlation test backed by a cached correlation matrix."""

    def __init__(self, data: Dataset):
        self.data = data
        self._corr = data.corr
        self.num_vars = data.d
        self.call_count = 0
        self.singular_warnings: List[Tuple[int, int, Tuple[int, ...]]] = []

    def spawn(self) -> "FisherZTest":
        return FisherZTest(self.data)

    def test(self, i: int, j: int, w: Sequence[int] = ()) -> float:
        w = tuple(w)
        n = self.data.n
        if n - len(w) - 3 < 1:
            raise SampleSizeError(f"n - |W| - 3 < 1 (n={n}, |W|={len(w)})")
        self.call_count += 1
        r = partial_correlation(self._corr, i, j, w)
        if r is None:
            # still singular after the ridge: keep the edge
            self.singular_warnings.append((i, j, w))
            log.warning("singular correlation submatrix for (%d, %d | %s); p set to 0", i, j, w)
            return 0.0
        return fisher_z_pvalue(r, n, len(w))


class DSepOracle:
    """Perfect CI test: p = 1 on d-separation in ``truth``, 0 otherwise."""

    def __init__(self, truth: MixedGraph):
        if not truth.is_dag():
            raise ValueError("the oracle needs a DAG")
        self.truth = truth
        self.num_vars = truth.num_vertices
        self.call_count = 0

    def spawn(self) -> "DSepOracle":
        return DSepOracle(self.truth)

    def test(self, i: int, j: int, w: Sequence[int] = ()) -> float:
        self.call_count += 1
        return 1.0 if d_separated(self.truth, i, j, w) else 0.0


def fisher_z_test(data: Dataset, q: CiQuery) -> float:
    q.validate(data.d)
    return FisherZTest(data).test(q.i, q.j, q.w)


def dsep_oracle_test(truth: MixedGraph, q: CiQuery) -> float:
    q.validate(truth.num_vertices)
    return DSepOracle(truth).test(q.i, q.j, q.w)
