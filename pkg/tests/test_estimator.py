import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from boundfield.estimator import BoundStateField
from boundfield.field import field_for_state
from boundfield.radial import hydrogen_radial
from boundfield.references import closed_form_reference
from boundfield.states import QuantumState

X = np.column_stack([np.geomspace(0.2, 20, 8), np.linspace(0.1, 3.0, 8)])


def test_field_prediction_matches_pipeline():
    state = QuantumState.jj(2, "3/2", "3/2", n=3)
    est = BoundStateField().fit(state)
    br, bt = field_for_state(state, hydrogen_radial(3, 2))(X[:, 0], X[:, 1])
    np.testing.assert_array_equal(est.predict(X), np.column_stack([br, bt]))
    assert est.orders_ == [1, 3]


def test_potential_prediction_matches_reference():
    est = BoundStateField(quantity="potential", part="orbital").fit(QuantumState.ls(2, 1, n=3))
    refs = closed_form_reference("orbital_321")
    want = refs["A1"](X[:, 0], X[:, 1]) + refs["A3"](X[:, 0], X[:, 1])
    np.testing.assert_allclose(est.predict(X), want, rtol=1e-10)


def test_current_prediction():
    est = BoundStateField(quantity="current", part="spin").fit(QuantumState.ls(0, 0, "1/2", n=1))
    R2 = hydrogen_radial(1, 0).squared()
    want = np.sin(X[:, 1]) * R2.derivative()(X[:, 0]) / (4 * math.pi)
    np.testing.assert_allclose(est.predict(X), want, rtol=1e-13)


def test_clone_and_params():
    est = BoundStateField(quantity="potential")
    assert clone(est).get_params() == {"quantity": "potential", "part": "total", "radial": None}


def test_errors():
    with pytest.raises(NotFittedError):
        BoundStateField().predict(X)
    with pytest.raises(TypeError):
        BoundStateField().fit(X)
    with pytest.raises(ValueError):
        BoundStateField(quantity="bogus").fit(QuantumState.ls(1, 1, n=2))
    with pytest.raises(ValueError):
        BoundStateField().fit(QuantumState.ls(1, 1))
    est = BoundStateField().fit(QuantumState.ls(1, 1, n=2))
    with pytest.raises(ValueError):
        est.predict(np.ones(3))


def test_explicit_radial():
    est = BoundStateField(radial=hydrogen_radial(4, 1)).fit(QuantumState.ls(1, -1))
    assert est.predict(X).shape == (8, 2)
