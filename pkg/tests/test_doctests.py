import doctest
import importlib

import pytest

MODULES = ["channel", "ia_core", "outage", "dof_planner", "simulator"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    mod = importlib.import_module(f"ia_ofdm.{name}")
    res = doctest.testmod(mod, optionflags=doctest.NORMALIZE_WHITESPACE)
    assert res.failed == 0
