"""Summaries of core-number distributions for reports.

Attributes:
    SUMMARY_METHODS (:obj:`Dict`): dictionary that links summary function
        names as keys with methods callables which implements then as values.

    DEFAULT_SUMMARY (:obj:`tuple` of :obj:`str`): summaries placed in the
        decomposition report.
"""
import typing as t
import collections

import scipy.stats
import numpy as np

TypeNumeric = t.TypeVar("TypeNumeric", int, float, np.number)
"""Type annotation for a numeric type (int, float, np.number)."""

TypeValList = t.Sequence[TypeNumeric]
"""Type annotation for a sequence of numeric type elements."""


def sum_quantiles(values: TypeValList) -> TypeValList:
    """Calc. min, first, second and third quartiles, and max from ``values``.

    Returns:
        np.ndarray: minimum, first quartile, median, third quartile and
            maximum, in this order.
    """
    return np.percentile(values, (0, 25, 50, 75, 100))


def sum_skewness(values: TypeValList, bias: bool = True) -> float:
    """Skewness of ``values`` (nan for less than two distinct values)."""
    if len(values) == 0 or np.ptp(values) == 0:
        return np.nan

    return float(scipy.stats.skew(values, bias=bias))


def sum_nonzero(values: TypeValList) -> int:
    """Number of r-cliques inside some nucleus of order at least one."""
    return int(np.count_nonzero(values))


SUMMARY_METHODS = collections.OrderedDict((
    ("count", len),
    ("nonzero", sum_nonzero),
    ("mean", np.mean),
    ("sd", np.std),
    ("min", np.min),
    ("max", np.max),
    ("median", np.median),
    ("quantiles", sum_quantiles),
    ("iq_range", scipy.stats.iqr),
    ("skewness", sum_skewness),
))

DEFAULT_SUMMARY = ("count", "nonzero", "mean", "sd", "min", "max",
                   "quantiles")


def _to_builtin(value: t.Any) -> t.Any:
    if isinstance(value, np.ndarray):
        return [_to_builtin(val) for val in value.tolist()]

    if isinstance(value, (np.integer, int)):
        return int(value)

    value = float(value)
    return None if np.isnan(value) else value


def summarize_cores(
        values: TypeValList,
        summary: t.Iterable[str] = DEFAULT_SUMMARY) -> t.Dict[str, t.Any]:
    """Apply the selected summaries over core numbers.

    Summaries of an empty sequence are None, except ``count`` and
    ``nonzero``.

    Raises:
        ValueError: if some summary name is unknown.
    """
    values = np.asarray(values)
    res = collections.OrderedDict()  # type: t.Dict[str, t.Any]

    for name in summary:
        if name not in SUMMARY_METHODS:
            raise ValueError('Unknown summary "{0}". Please select values '
                             "in {1}.".format(name,
                                              tuple(SUMMARY_METHODS)))

        if values.size == 0 and name not in ("count", "nonzero"):
            res[name] = None
            continue

        res[name] = _to_builtin(SUMMARY_METHODS[name](values))

    return res
