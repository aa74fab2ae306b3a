"""Test module for ND class errors and warnings."""
import warnings

import pytest

from pynd import ND
from pynd import _internal
from pynd import peeling
from tests.utils import load_graph

GNAME = "errors-warnings"


class TestErrorsWarnings:
    """TestClass dedicated to test invalid options and warnings."""
    @pytest.mark.parametrize(
        "r, s",
        [
            (0, 2),
            (-1, 3),
            (3, 3),
            (4, 2),
        ])
    def test_error_invalid_rs_1(self, r, s):
        with pytest.raises(ValueError):
            ND(r=r, s=s)

    @pytest.mark.parametrize(
        "r, s",
        [
            (1.5, 3),
            (2, "3"),
            (True, 3),
            (None, 2),
        ])
    def test_error_invalid_rs_2(self, r, s):
        with pytest.raises(TypeError):
            ND(r=r, s=s)

    @pytest.mark.parametrize(
        "option, value",
        [
            ("aggregation", "tree"),
            ("bucket", "sparse"),
            ("inverse_map", "linear"),
            ("orientation", "random"),
            ("timeopt", "avg"),
        ])
    def test_error_invalid_option_1(self, option, value):
        with pytest.raises(ValueError):
            ND(**{option: value})

    @pytest.mark.parametrize(
        "option, value",
        [
            ("aggregation", 1),
            ("bucket", ("open", )),
            ("orientation", 0.5),
            ("timeopt", 2),
        ])
    def test_error_invalid_option_2(self, option, value):
        with pytest.raises(TypeError):
            ND(**{option: value})

    @pytest.mark.parametrize(
        "option, value",
        [
            ("levels", 0),
            ("levels", 4),
            ("levels", 1.5),
            ("buffer_size", 0),
            ("threads", 0),
            ("threads", -2),
            ("window", 0),
            ("contract_edge_factor", 0.0),
            ("contract_loss_fraction", 1.5),
            ("contract_loss_fraction", "half"),
        ])
    def test_error_invalid_numbers(self, option, value):
        with pytest.raises(ValueError):
            ND(r=3, s=4, **{option: value})

    def test_error_pointer_split_tables(self):
        with pytest.raises(ValueError):
            ND(r=3, s=4, inverse_map="pointer", contiguous=False)

    def test_binary_split_tables(self):
        model = ND(r=3, s=4, inverse_map="binary", contiguous=False)
        assert model.config.inverse_map == "binary"

    def test_error_fixed_point_overflow(self):
        with pytest.raises(ValueError):
            ND(r=5, s=10).fit(load_graph("K4")).extract()

    @pytest.mark.parametrize(
        "g",
        [
            None,
            [(0, 1), (1, 2)],
            42,
        ])
    def test_error_fit_type(self, g):
        with pytest.raises(TypeError):
            ND(r=2, s=3).fit(g)

    def test_error_extract_before_fit(self):
        with pytest.raises(TypeError):
            ND(r=2, s=3).extract()

    def test_error_missing_path(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ND(r=2, s=3).fit(str(tmp_path / "missing.txt"))

    def test_warning_levels_for_vertices(self):
        with pytest.warns(UserWarning):
            model = ND(r=1, s=2, levels=2)

        assert model.config.levels == 1

    def test_warning_contract_not_edge_peeling(self):
        with pytest.warns(UserWarning):
            model = ND(r=3, s=4, contract=True)

        assert model.config.contract is False

    def test_no_warning_contract_edge_peeling(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            model = ND(r=2, s=3, contract=True)

        assert model.config.contract is True

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"r": 1, "s": 3, "levels": 3},
            {"r": 2, "s": 4, "contract": True},
        ])
    def test_suppress_warnings(self, kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            ND(suppress_warnings=True, **kwargs)
            options = {key: val for key, val in kwargs.items()
                       if key not in ("r", "s")}
            peeling.PeelConfig(**options).resolve(
                kwargs["r"], kwargs["s"], suppress_warnings=True)

    def test_warning_format(self):
        assert (_internal.warning_format("levels ignored", UserWarning,
                                         "nd.py", 1) ==
                "Warning: levels ignored\n")

    def test_error_generic_group(self):
        with pytest.raises(ValueError):
            _internal.process_generic_option("open", "buckets")

        with pytest.raises(TypeError):
            _internal.process_generic_option("open", None)

    @pytest.mark.parametrize(
        "value",
        [
            "all",
            "open dense",
            "",
        ])
    def test_error_generic_option_single_value(self, value):
        with pytest.raises(ValueError):
            _internal.process_generic_option(value, "bucket")

    def test_generic_option_none(self):
        assert _internal.process_generic_option(
            None, "bucket", allow_none=True) is None

        with pytest.raises(ValueError):
            _internal.process_generic_option(None, "bucket")

    def test_generic_option_case(self):
        assert _internal.process_generic_option("HASH",
                                                "aggregation") == "hash"
