import numpy as np
import pytest

from conftest import NORMS, models
from possim.measures import alpha_possible, degree_of_consistence, degree_of_implication, necessarily_implies
from possim.oracle import (
    oracle_alpha_possible,
    oracle_consistence,
    oracle_implication,
    oracle_implication_via_modal,
    oracle_necessarily_implies,
    oracle_residuum,
    random_valid_model,
)
from possim.similarity import check
from possim.tnorm import TNorm


def test_worked_values(worked):
    u = worked.universe
    p, q = u.prop(["w0"]), u.prop(["w1", "w2"])
    assert oracle_implication(p, q, worked) == 0.6
    assert oracle_implication_via_modal(p, q, worked) == 0.6
    assert oracle_consistence(p, q, worked) == 0.8
    assert oracle_alpha_possible(p, 0.7, worked) == {0, 1}
    assert oracle_necessarily_implies(q, p, 0.6, worked)
    assert not oracle_necessarily_implies(q, p, 0.61, worked)


def test_residuum_grid_examples():
    assert oracle_residuum("min", 0.3, 0.7) == 0.3
    assert oracle_residuum("lukasiewicz", 0.3, 0.7) == pytest.approx(0.6)
    assert oracle_residuum("product", 0.3, 0.6) == 0.5
    assert oracle_residuum("product", 0.9, 0.2) == 1.0


def test_models_are_deterministic_and_valid():
    for norm in NORMS:
        _, a = random_valid_model(7, 6, norm)
        _, b = random_valid_model(7, 6, norm)
        assert np.array_equal(a.matrix, b.matrix)
        assert check(a.matrix, norm) == []
    _, one = random_valid_model(0, 1, TNorm.MIN)
    assert one.matrix.tolist() == [[1.0]]


@pytest.mark.parametrize("norm", NORMS)
def test_engine_agrees_with_oracle(norm, rng):
    for S in models(norm, [1, 2, 5, 8], seeds=range(6)):
        u = S.universe
        n = len(u)
        for _ in range(15):
            p = u.prop([w for w in u.worlds if rng.random() < 0.5])
            q = u.prop([w for w in u.worlds if rng.random() < 0.5])
            alpha = float(rng.choice([0.0, 1.0, rng.random(), S.matrix[rng.integers(n), rng.integers(n)]]))
            assert degree_of_implication(p, q, S) == oracle_implication(p, q, S)
            assert degree_of_consistence(p, q, S) == oracle_consistence(p, q, S)
            assert set(alpha_possible(p, alpha, S).indices) == oracle_alpha_possible(p, alpha, S)
            assert necessarily_implies(q, p, alpha, S) == oracle_necessarily_implies(q, p, alpha, S)
