"""This module provides useful functions for the pynd package.

Attributes:
    VALID_VALUE_PREFIX (:obj:`str`): Prefix which all tuples that
        keep valid values for custom user options must use in its name.
        This prefix is used to enable the automatic detection of these
        groups by ``process_generic_option``.

    VALID_INVERSE (:obj:`tuple` of :obj:`str`): supported methods to map
        an r-clique index back to its vertices. ``binary`` performs binary
        searches over per-level prefix sums, ``pointer`` follows up-pointers
        stored in empty cells and barriers (contiguous tables only).

    VALID_AGGREGATION (:obj:`tuple` of :obj:`str`): supported strategies to
        collect the set of r-cliques whose counts changed in a round.

    VALID_BUCKET (:obj:`tuple` of :obj:`str`): supported bucketing
        structures.

    VALID_ORIENTATION (:obj:`tuple` of :obj:`str`): supported vertex
        orderings used to orient the input graph.

    VALID_TIMEOPT (:obj:`tuple` of :obj:`str`): valid options for time
        measurements while decomposing.

    DEFAULT_LEVELS (:obj:`int`): default number of levels of the clique
        table (clipped to ``r``).

    DEFAULT_BUFFER_SIZE (:obj:`int`): default block size of the list
        buffer aggregation strategy.

    DEFAULT_WINDOW (:obj:`int`): number of materialized buckets of the
        open bucketing structure.

    CONTRACT_EDGE_FACTOR (:obj:`float`): contraction is triggered once
        the number of edges peeled since the last contraction reaches this
        factor times the number of vertices.

    CONTRACT_LOSS_FRACTION (:obj:`float`): only vertices which lost at
        least this fraction of their neighbors since the last contraction
        have their adjacency lists rebuilt.
"""
import typing as t
import inspect
import math
import warnings
import time
import sys

import numba
import numpy as np
import scipy.special

VALID_VALUE_PREFIX = "VALID_"

VALID_INVERSE = (
    "binary",
    "pointer",
)  # type: t.Tuple[str, ...]

VALID_AGGREGATION = (
    "array",
    "list-buffer",
    "hash",
)  # type: t.Tuple[str, ...]

VALID_BUCKET = (
    "open",
    "dense",
)  # type: t.Tuple[str, ...]

VALID_ORIENTATION = (
    "degeneracy",
    "degree",
)  # type: t.Tuple[str, ...]

VALID_TIMEOPT = (
    "total",
    "none",
)  # type: t.Tuple[str, ...]

DEFAULT_LEVELS = 2

DEFAULT_BUFFER_SIZE = 64

DEFAULT_WINDOW = 16

CONTRACT_EDGE_FACTOR = 2.0

CONTRACT_LOSS_FRACTION = 0.25

MAX_FIXED_POINT = 2**62
"""Largest fixed-point factor accepted, so that counts fit ``np.int64``."""

MASK64 = (1 << 64) - 1

_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_SHIFT_A = np.uint64(30)
_SHIFT_B = np.uint64(27)
_SHIFT_C = np.uint64(31)


def warning_format(message: str,
                   category: t.Type[Warning],
                   filename: str,
                   lineno: int,
                   line: str = None) -> str:
    """Change warnings format to a simpler one.

    Args:
        message (:obj:`str`): warning message to print.

        category: not used. Just to maintain consistency with warnings API.

        filename: not used. Just to maintain consistency with warnings API.

        lineno: not used. Just to maintain consistency with warnings API.

        line: not used. Just to maintain consistency with warnings API.

    Return:
        str: formated warning message.
    """
    # pylint: disable=W0613
    return "Warning: {}\n".format(message)


warnings.formatwarning = warning_format


def process_generic_option(
        value: t.Optional[str],
        group_name: str,
        allow_none: bool = False,
        ) -> t.Optional[str]:
    """Check if given ``value`` is in an internal reference group of values.

    Args:
        value (:obj:`str`): option to process, compared ignoring capital
            letters.

        group_name (:obj:`str`): name of which internal group ``value``
            should be searched inside. The constant ``VALID_VALUE_PREFIX``
            always prefixes group options, and this parameter must be the
            name of the group without its prefix. For example, to select
            ``VALID_BUCKET`` group for ``value`` reference, then
            ``group_name`` must be just ``bucket``.

        allow_none (:obj:`bool`, optional): if True, then :obj:`NoneType` is
            accepted as ``value``.

    Return:
        str: lower-cased version of ``value``.

    Raises:
        TypeError: if ``group_name`` is :obj:`NoneType` or empty, or if
            ``value`` is neither :obj:`NoneType` (and ``allow_none`` is
            also True) nor a :obj:`str` type object.

        ValueError: if ``value`` is not valid, ``value`` is None (and
            ``allow_none`` is False) or ``group_name`` is unknown.
    """
    if not group_name:
        raise TypeError('"group_name" can not be empty or None.')

    if value is None:
        if allow_none:
            return None

        raise ValueError('"value" can not be None. (while checking '
                         'group "{}").'.format(group_name))

    if not isinstance(value, str):
        raise TypeError('"value" (group name {}) must be a string-'
                        "type object (got {}).".format(group_name,
                                                       type(value)))

    _module_name = sys.modules[__name__]

    try:
        valid_values = inspect.getattr_static(
            _module_name, "{0}{1}".format(
                VALID_VALUE_PREFIX, group_name.upper().replace("-", "_")))

    except AttributeError:
        raise ValueError('Invalid "group_name" "{}". Check _internal '
                         "module documentation to verify which ones "
                         "are available for use.".format(group_name))

    value = value.lower()

    if value not in valid_values:
        raise ValueError('Unknown value "{0}". '
                         "Please select values in {1}.".format(
                             value, valid_values))

    return value


def check_rs(r: int, s: int) -> t.Tuple[int, int]:
    """Check the ``r`` and ``s`` parameters of a nucleus decomposition.

    Raises
    ------
    TypeError
        If ``r`` or ``s`` is not an integer.
    ValueError
        If ``r < 1`` or ``s <= r``.
    """
    for name, value in (("r", r), ("s", s)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError('"{0}" must be an integer (got {1}).'.format(
                name, type(value)))

    if r < 1:
        raise ValueError('Invalid "r" argument ({0}). '
                         "Expecting an integer >= 1.".format(r))

    if s <= r:
        raise ValueError('Invalid "s" argument ({0}). '
                         'Expecting an integer greater than "r" '
                         "({1}).".format(s, r))

    return r, s


def check_positive_int(value: t.Any, name: str,
                       allow_none: bool = False) -> t.Optional[int]:
    """Check that ``value`` is a positive integer (or None if allowed)."""
    if value is None and allow_none:
        return None

    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValueError('Invalid "{0}" argument ({1}). '
                         "Expecting a positive integer.".format(name, value))

    return value


def check_fraction(value: t.Any, name: str, upper: float = 1.0) -> float:
    """Check that ``value`` is a number in the (0, ``upper``] interval."""
    if isinstance(value, int) and not isinstance(value, bool):
        value = float(value)

    if not isinstance(value, float) or not 0.0 < value <= upper:
        raise ValueError('Invalid "{0}" argument ({1}). '
                         "Expecting a float in (0, {2}].".format(
                             name, value, upper))

    return value


@numba.njit(cache=True)
def mix64(value: np.uint64) -> np.uint64:
    """Deterministic 64-bit integer hash (splitmix64 finalizer)."""
    value = (value ^ (value >> _SHIFT_A)) * _MIX_A
    value = (value ^ (value >> _SHIFT_B)) * _MIX_B
    return value ^ (value >> _SHIFT_C)


def hash_capacity(occupancy: int) -> int:
    """Smallest power of two not below 1.5 times ``occupancy``."""
    need = (3 * occupancy + 1) // 2
    return 1 << max(need - 1, 0).bit_length()


def binom(n: int, k: int) -> int:
    """Exact binomial coefficient."""
    return int(scipy.special.comb(n, k, exact=True))


def fixed_point_scale(r: int, s: int) -> int:
    """Fixed-point factor ``L = lcm(1..binomial(s, r))``.

    Every fractional decrement ``1/a`` with ``a`` in ``1..binomial(s, r)``
    is exact when counts are stored as multiples of ``1/L``.

    Raises
    ------
    ValueError
        If ``(r, s)`` are invalid or ``L`` does not fit a machine word.
    """
    check_rs(r, s)

    fixed_point = 1
    for val in range(2, binom(s, r) + 1):
        fixed_point = fixed_point * val // math.gcd(fixed_point, val)

        if fixed_point >= MAX_FIXED_POINT:
            raise ValueError("Fixed-point factor for (r, s) = ({0}, {1}) "
                             "overflows a machine word. Choose a smaller "
                             '"s - r".'.format(r, s))

    return fixed_point


def timeit(func: t.Callable, *args, **kwargs) -> t.Tuple[t.Any, float]:
    """Returns the ``func`` return value and the elapsed wall time."""
    t_start = time.perf_counter()
    ret_val = func(*args, **kwargs)
    time_total = time.perf_counter() - t_start
    return ret_val, time_total


def warn(message: str,
         category: t.Type[Warning] = UserWarning,
         suppress_warnings: bool = False) -> None:
    """Emit ``message`` as a warning unless ``suppress_warnings``."""
    if not suppress_warnings:
        warnings.warn(message, category, stacklevel=3)
