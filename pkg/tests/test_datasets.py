"""Bundled guinea pig survival data (Bjerkedal 1960, via Doksum 1974)."""

import numpy as np
import pytest

from qcurves import SortedSample, fit_shape, load_guinea_pigs


def test_group_sizes_and_range():
    groups = load_guinea_pigs()
    assert set(groups) == {"control", "treated"}
    control, treated = groups["control"], groups["treated"]
    assert control.size == 64
    assert treated.size == 60
    assert control.min() == 18.0 and control.max() == 735.0
    assert treated.min() == 76.0 and treated.max() == 598.0
    assert np.all(control > 0) and np.all(treated > 0)


def test_arrays_are_fresh_copies():
    a = load_guinea_pigs()["control"]
    a[0] = -1.0
    b = load_guinea_pigs()["control"]
    assert b.min() == 18.0


def test_fitted_shapes_regression():
    groups = load_guinea_pigs()
    control = fit_shape(SortedSample.from_data(groups["control"]), "mml").beta_hat
    treated = fit_shape(SortedSample.from_data(groups["treated"]), "mml").beta_hat
    assert control == pytest.approx(1.530936891468948, abs=1e-9)
    assert treated == pytest.approx(2.2037340366603426, abs=1e-9)
