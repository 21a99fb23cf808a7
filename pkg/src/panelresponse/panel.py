"""Monthly index panels: ingestion, validation, growth rates, standardization.

A panel holds monthly index levels for M = 3G series: three variable classes
(production, shipments, inventory) times G goods categories.  Series are kept
in canonical flat order ``l = G*(alpha-1) + g`` with ``l`` running 1..M.

The usual pipeline is::

    panel = load_panel("iip.csv", window=("1988-01", "2007-12"))
    w = standardize(log_growth(panel))

after which ``w.values`` is an M x N' array of zero-mean, unit-variance
growth rates (population normalization, so the downstream correlation matrix
has an exactly unit diagonal).
"""

from __future__ import annotations

import csv
import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence, TextIO, Union

import numpy as np

from .errors import (
    DegenerateSeries,
    DuplicateSeries,
    IrregularTimeAxis,
    MissingData,
    MissingWeight,
    NonPositiveLevel,
    SchemaError,
)


class Variable(enum.IntEnum):
    """Variable class of a series: production, shipments, or inventory."""

    PRODUCTION = 1
    SHIPMENTS = 2
    INVENTORY = 3

    @property
    def code(self) -> str:
        return {1: "P", 2: "S", 3: "I"}[int(self)]

    @classmethod
    def from_code(cls, code: str) -> "Variable":
        table = {"P": 1, "S": 2, "I": 3,
                 "production": 1, "shipments": 2, "inventory": 3}
        key = code if code in table else code.upper() if code.upper() in table else code.lower()
        if key not in table:
            raise SchemaError(f"unknown variable class {code!r}")
        return cls(table[key])


#: Standard 21-category classification of the Japanese Indices of Industrial
#: Production (by use of goods).  Categories 1-19 are final demand goods,
#: 20-21 producer (intermediate) goods.
DEFAULT_GOODS_LABELS: dict[int, str] = {
    1: "Manufacturing Equipment",
    2: "Electricity",
    3: "Communication and Broadcasting",
    4: "Agriculture",
    5: "Construction (capital)",
    6: "Transport",
    7: "Offices",
    8: "Other Capital Goods",
    9: "Construction",
    10: "Engineering",
    11: "House Work (durable)",
    12: "Heating/Cooling Equipment",
    13: "Furniture & Furnishings",
    14: "Education & Amusement (durable)",
    15: "Motor Vehicles",
    16: "House Work (nondurable)",
    17: "Education & Amusement (nondurable)",
    18: "Clothing & Footwear",
    19: "Food & Beverage",
    20: "Mining & Manufacturing",
    21: "Others",
}

#: Value-added weights for the 21 goods categories, normalized to sum 10,000.
DEFAULT_GOODS_WEIGHTS: dict[int, float] = {
    1: 530.7, 2: 148.1, 3: 48.8, 4: 31.0, 5: 129.6, 6: 381.3, 7: 175.4,
    8: 217.2, 9: 568.1, 10: 122.3, 11: 62.3, 12: 62.5, 13: 43.4, 14: 246.5,
    15: 853.2, 16: 649.7, 17: 105.2, 18: 92.2, 19: 467.9, 20: 4601.7,
    21: 462.9,
}

_SERIES_RE = re.compile(r"^([PSI])\.(\d+)$")


@dataclass(frozen=True, order=True)
class SeriesId:
    """Identifier of one panel series: variable class plus goods category."""

    alpha: Variable
    goods: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", Variable(self.alpha))
        if self.goods < 1:
            raise SchemaError(f"goods index must be >= 1, got {self.goods}")

    def flat(self, n_goods: int) -> int:
        """1-based flat index l = G*(alpha-1) + g."""
        if not 1 <= self.goods <= n_goods:
            raise SchemaError(f"goods index {self.goods} outside [1, {n_goods}]")
        return n_goods * (int(self.alpha) - 1) + self.goods

    @classmethod
    def from_flat(cls, flat: int, n_goods: int) -> "SeriesId":
        """Inverse of :meth:`flat`."""
        if not 1 <= flat <= 3 * n_goods:
            raise SchemaError(f"flat index {flat} outside [1, {3 * n_goods}]")
        alpha, g = divmod(flat - 1, n_goods)
        return cls(Variable(alpha + 1), g + 1)

    @property
    def label(self) -> str:
        return f"{self.alpha.code}.{self.goods}"

    @classmethod
    def parse(cls, text: str) -> "SeriesId":
        m = _SERIES_RE.match(text.strip())
        if m is None:
            raise SchemaError(f"bad series id {text!r} (expected P.g, S.g, or I.g)")
        return cls(Variable.from_code(m.group(1)), int(m.group(2)))


def canonical_ids(n_goods: int) -> tuple[SeriesId, ...]:
    """All 3*G series ids in flat order."""
    return tuple(
        SeriesId(Variable(a), g) for a in (1, 2, 3) for g in range(1, n_goods + 1)
    )


# ---------------------------------------------------------------------------
# month handling
# ---------------------------------------------------------------------------

MonthLike = Union[str, np.datetime64]


def parse_month(text: MonthLike) -> np.datetime64:
    """Parse 'YYYY-MM' (or a full date, truncated) to month granularity."""
    try:
        return np.datetime64(text, "M")
    except ValueError as exc:
        raise SchemaError(f"bad date {text!r}: {exc}") from None


def parse_window(text: str) -> tuple[np.datetime64, np.datetime64]:
    """Parse a 'YYYY-MM:YYYY-MM' inclusive month range."""
    parts = text.split(":")
    if len(parts) != 2:
        raise SchemaError(f"bad window {text!r} (expected START:END)")
    lo, hi = parse_month(parts[0]), parse_month(parts[1])
    if lo > hi:
        raise SchemaError(f"window start {lo} after end {hi}")
    return lo, hi


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=a.dtype if a.dtype.kind == "M" else float, copy=True)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# panel containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Panel:
    """Validated monthly index levels for a complete 3 x G series grid.

    Attributes
    ----------
    months : np.ndarray
        datetime64[M], strictly increasing, one-month spacing, length N >= 3.
    values : np.ndarray
        M x N positive levels, rows in canonical flat order.
    ids : tuple[SeriesId, ...]
        Flat-order identifiers, length M = 3G.
    weights : dict[int, float] or None
        Optional per-goods aggregation weights.
    """

    months: np.ndarray
    values: np.ndarray
    ids: tuple[SeriesId, ...]
    weights: Mapping[int, float] | None = None

    def __post_init__(self):
        months = np.asarray(self.months, dtype="datetime64[M]")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise SchemaError("panel values must be a 2-D array")
        m, n = values.shape
        if len(self.ids) != m:
            raise SchemaError(f"{len(self.ids)} ids for {m} rows")
        if months.shape != (n,):
            raise SchemaError(f"{months.size} months for {n} columns")
        if n < 3:
            raise SchemaError(f"panel needs at least 3 months, got {n}")
        if m % 3 != 0:
            raise SchemaError(f"series count {m} is not 3 x G")
        g = m // 3
        if tuple(self.ids) != canonical_ids(g):
            raise SchemaError("series ids are not the complete canonical grid")
        steps = np.diff(months.astype("int64"))
        if np.any(steps != 1):
            raise IrregularTimeAxis("months are not consecutive")
        if not np.all(np.isfinite(values)):
            bad = np.argwhere(~np.isfinite(values))[0]
            raise MissingData(self.ids[bad[0]].label, str(months[bad[1]]))
        if np.any(values <= 0.0):
            bad = np.argwhere(values <= 0.0)[0]
            raise NonPositiveLevel(
                self.ids[bad[0]].label, str(months[bad[1]]), float(values[bad[0], bad[1]])
            )
        if self.weights is not None:
            w = dict(self.weights)
            for key, val in w.items():
                if val < 0 or not np.isfinite(val):
                    raise SchemaError(f"bad weight {val!r} for goods {key}")
            object.__setattr__(self, "weights", w)
        object.__setattr__(self, "months", _freeze(months))
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def n_goods(self) -> int:
        return self.values.shape[0] // 3

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_months(self) -> int:
        return self.values.shape[1]

    @property
    def weight_sum(self) -> float | None:
        return None if self.weights is None else float(sum(self.weights.values()))

    def series(self, sid: SeriesId) -> np.ndarray:
        return self.values[sid.flat(self.n_goods) - 1]


@dataclass(frozen=True)
class GrowthPanel:
    """Month-over-month growth rates, one column per transition t_j -> t_{j+1}."""

    months: np.ndarray
    rates: np.ndarray
    ids: tuple[SeriesId, ...]
    method: str  # "log10" or "simple"

    def __post_init__(self):
        if self.method not in ("log10", "simple"):
            raise SchemaError(f"unknown growth method {self.method!r}")
        months = np.asarray(self.months, dtype="datetime64[M]")
        rates = np.asarray(self.rates, dtype=float)
        if rates.ndim != 2 or months.shape != (rates.shape[1],):
            raise SchemaError("growth rates and months are inconsistent")
        object.__setattr__(self, "months", _freeze(months))
        object.__setattr__(self, "rates", _freeze(rates))

    @property
    def n_goods(self) -> int:
        return self.rates.shape[0] // 3


_MEAN_TOL = 1e-10
_STD_TOL = 1e-10


@dataclass(frozen=True)
class StandardizedPanel:
    """Zero-mean, unit-variance growth-rate series w_l(t_j).

    ``mean`` and ``std`` record the per-series statistics removed by the
    transform (population normalization: divide by N', not N'-1).
    """

    months: np.ndarray
    values: np.ndarray
    ids: tuple[SeriesId, ...] | None
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        months = np.asarray(self.months, dtype="datetime64[M]")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or months.shape != (values.shape[1],):
            raise SchemaError("standardized values and months are inconsistent")
        if self.ids is not None and len(self.ids) != values.shape[0]:
            raise SchemaError("ids do not match value rows")
        resid_mean = np.abs(values.mean(axis=1)).max() if values.size else 0.0
        resid_std = np.abs(values.std(axis=1) - 1.0).max() if values.size else 0.0
        if resid_mean > _MEAN_TOL:
            raise SchemaError(f"series mean off zero by {resid_mean:.3e}")
        if resid_std > _STD_TOL:
            raise SchemaError(f"series std off one by {resid_std:.3e}")
        object.__setattr__(self, "months", _freeze(months))
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "mean", _freeze(np.asarray(self.mean, dtype=float)))
        object.__setattr__(self, "std", _freeze(np.asarray(self.std, dtype=float)))

    @property
    def n_series(self) -> int:
        return self.values.shape[0]

    @property
    def n_obs(self) -> int:
        """Number of monthly observations N'."""
        return self.values.shape[1]

    @property
    def n_goods(self) -> int | None:
        m = self.values.shape[0]
        return m // 3 if (self.ids is not None and m % 3 == 0) else None

    @classmethod
    def from_values(
        cls,
        values: np.ndarray,
        months: np.ndarray | None = None,
        ids: Sequence[SeriesId] | None = None,
        start: MonthLike = "1988-01",
    ) -> "StandardizedPanel":
        """Wrap an already-standardized M x N' array (used by generators and tests)."""
        values = np.asarray(values, dtype=float)
        m, n = values.shape
        if months is None:
            months = parse_month(start) + np.arange(n)
        if ids is None and m % 3 == 0:
            ids = canonical_ids(m // 3)
        return cls(
            months=months,
            values=values,
            ids=tuple(ids) if ids is not None else None,
            mean=np.zeros(m),
            std=np.ones(m),
        )

    def replace_values(self, values: np.ndarray) -> "StandardizedPanel":
        """New panel with the same axes and identical metadata (used by shuffles)."""
        return StandardizedPanel(
            months=self.months, values=values, ids=self.ids, mean=self.mean, std=self.std
        )


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def load_weights(path: str | Path) -> dict[int, float]:
    """Read a `goods,weight` CSV into a dict keyed by goods index."""
    weights: dict[int, float] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip().lower() for c in header[:2]] != ["goods", "weight"]:
            raise SchemaError(f"{path}: expected header 'goods,weight'")
        for row in reader:
            if not row or not "".join(row).strip():
                continue
            try:
                g, w = int(row[0]), float(row[1])
            except (ValueError, IndexError):
                raise SchemaError(f"{path}: bad weights row {row!r}") from None
            if g in weights:
                raise SchemaError(f"{path}: duplicate weight for goods {g}")
            if w < 0:
                raise SchemaError(f"{path}: negative weight for goods {g}")
            weights[g] = w
    return weights


def load_panel(
    source: str | Path | TextIO,
    window: tuple[MonthLike, MonthLike] | str | None = None,
    weights: Mapping[int, float] | str | Path | None = None,
) -> Panel:
    """Load and validate a monthly index panel from CSV.

    The file must have a header ``date,<id>,...`` where each id is ``P.g``,
    ``S.g``, or ``I.g``, and one row per month with dates formatted
    ``YYYY-MM``.  Together the id columns must cover the complete
    3 x G grid.  Lines starting with ``#`` are ignored.  Cells may be empty
    outside ``window``; inside the window an empty cell raises
    :class:`MissingData` and a non-positive level raises
    :class:`NonPositiveLevel`.

    Parameters
    ----------
    source : path or open text file
    window : optional (start, end) months, inclusive, or "START:END" string
    weights : optional mapping goods->weight, or path to a weights CSV
    """
    if isinstance(window, str):
        window = parse_window(window)
    if isinstance(weights, (str, Path)):
        weights = load_weights(weights)

    if hasattr(source, "read"):
        rows = list(csv.reader(source))
        name = getattr(source, "name", "<stream>")
    else:
        with open(source, newline="") as fh:
            rows = list(csv.reader(fh))
        name = str(source)
    rows = [r for r in rows if not (r and r[0].startswith("#"))]
    if not rows:
        raise SchemaError(f"{name}: empty file")

    header = [c.strip() for c in rows[0]]
    if not header or header[0].lower() != "date":
        raise SchemaError(f"{name}: first column must be 'date'")
    col_ids = []
    seen: set[SeriesId] = set()
    for cell in header[1:]:
        sid = SeriesId.parse(cell)
        if sid in seen:
            raise DuplicateSeries(f"duplicate series {sid.label}")
        seen.add(sid)
        col_ids.append(sid)
    if not col_ids:
        raise SchemaError(f"{name}: no series columns")

    n_goods = max(sid.goods for sid in col_ids)
    expected = set(canonical_ids(n_goods))
    if seen != expected:
        missing = sorted(s.label for s in expected - seen)
        raise SchemaError(f"{name}: incomplete series grid, missing {missing}")

    records: list[tuple[np.datetime64, list[float | None]]] = []
    for raw in rows[1:]:
        if not raw or not "".join(raw).strip():
            continue
        if len(raw) != len(header):
            raise SchemaError(f"{name}: row has {len(raw)} cells, expected {len(header)}")
        month = parse_month(raw[0].strip())
        cells: list[float | None] = []
        for sid, cell in zip(col_ids, raw[1:]):
            text = cell.strip()
            if not text:
                cells.append(None)
                continue
            try:
                cells.append(float(text))
            except ValueError:
                raise SchemaError(
                    f"{name}: bad value {cell!r} for {sid.label} at {month}"
                ) from None
        records.append((month, cells))

    if not records:
        raise SchemaError(f"{name}: no data rows")
    records.sort(key=lambda r: r[0])
    months = np.array([r[0] for r in records], dtype="datetime64[M]")
    if window is not None:
        lo, hi = parse_month(window[0]), parse_month(window[1])
        keep = (months >= lo) & (months <= hi)
        records = [r for r, k in zip(records, keep) if k]
        months = months[keep]
    if len(records) < 3:
        raise SchemaError(f"{name}: fewer than 3 months in window")
    if np.unique(months).size != months.size:
        raise IrregularTimeAxis(f"{name}: duplicate months")
    if np.any(np.diff(months.astype("int64")) != 1):
        raise IrregularTimeAxis(f"{name}: gaps in the monthly time axis")

    m = 3 * n_goods
    values = np.empty((m, len(records)))
    order = [sid.flat(n_goods) - 1 for sid in col_ids]
    for j, (month, cells) in enumerate(records):
        for row, sid, cell in zip(order, col_ids, cells):
            if cell is None:
                raise MissingData(sid.label, str(month))
            if cell <= 0.0:
                raise NonPositiveLevel(sid.label, str(month), cell)
            values[row, j] = cell

    return Panel(months=months, values=values, ids=canonical_ids(n_goods), weights=weights)


def write_panel_csv(panel: Panel, target: str | Path | TextIO) -> None:
    """Write a panel back out in the `date,P.1,...` schema."""
    own = not hasattr(target, "write")
    fh: TextIO = open(target, "w", newline="") if own else target  # type: ignore[arg-type]
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date"] + [sid.label for sid in panel.ids])
        for j, month in enumerate(panel.months):
            writer.writerow([str(month)] + [repr(float(v)) for v in panel.values[:, j]])
    finally:
        if own:
            fh.close()


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def log_growth(panel: Panel) -> GrowthPanel:
    """Base-10 logarithmic growth rate log10(S(t_{j+1}) / S(t_j))."""
    rates = np.log10(panel.values[:, 1:] / panel.values[:, :-1])
    return GrowthPanel(
        months=panel.months[:-1], rates=rates, ids=panel.ids, method="log10"
    )


def simple_growth(panel: Panel) -> GrowthPanel:
    """Plain relative growth rate (S(t_{j+1}) - S(t_j)) / S(t_j).

    For small month-over-month changes this is numerically indistinguishable
    from ln(10) times the base-10 log growth rate; both lead to the same
    standardized panel up to that scale.
    """
    v = panel.values
    rates = (v[:, 1:] - v[:, :-1]) / v[:, :-1]
    return GrowthPanel(
        months=panel.months[:-1], rates=rates, ids=panel.ids, method="simple"
    )


def standardize(growth: GrowthPanel) -> StandardizedPanel:
    """Center each series and scale to unit population standard deviation."""
    rates = growth.rates
    mu = rates.mean(axis=1)
    sigma = rates.std(axis=1)  # population: divide by N'
    for i, s in enumerate(sigma):
        if s == 0.0 or not np.isfinite(s):
            raise DegenerateSeries(growth.ids[i].label if growth.ids else i + 1)
    w = (rates - mu[:, None]) / sigma[:, None]
    return StandardizedPanel(
        months=growth.months, values=w, ids=growth.ids, mean=mu, std=sigma
    )


def weighted_aggregate(panel: Panel, alpha: Variable | int | str) -> np.ndarray:
    """Weighted mean level of one variable class across goods, per month."""
    if isinstance(alpha, str):
        alpha = Variable.from_code(alpha)
    alpha = Variable(alpha)
    if panel.weights is None:
        raise MissingWeight(1)
    g_indices = range(1, panel.n_goods + 1)
    weights = []
    for g in g_indices:
        if g not in panel.weights:
            raise MissingWeight(g)
        weights.append(panel.weights[g])
    wvec = np.asarray(weights, dtype=float)
    total = wvec.sum()
    if total <= 0:
        raise SchemaError("aggregation weights sum to zero")
    block = panel.values[(int(alpha) - 1) * panel.n_goods: int(alpha) * panel.n_goods]
    return wvec @ block / total
