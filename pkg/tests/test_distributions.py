import itertools

import pytest

from conftest import NORMS, WORKED_KB, models
from possim.distributions import (
    DistributionTable,
    TableKind,
    tightest_conditional_necessity,
    tightest_conditional_possibility,
    tightest_necessity,
    tightest_possibility,
    validate_table,
)
from possim.dsl import parse_kb
from possim.errors import EmptyEvidenceError, UnresolvedNameError
from possim.oracle import oracle_conditional
from possim.similarity import identity
from possim.tnorm import EPS, TNorm


def test_unconditioned_examples(worked):
    u = worked.universe
    E, p = u.prop(["w0"]), u.prop(["w2"])
    assert tightest_necessity(p, E, worked) == 0.6
    assert tightest_possibility(p, E, worked) == 0.6
    assert tightest_necessity(u.prop(["w0", "w2"]), E, worked) == 1.0
    assert tightest_possibility(u.prop(["w0", "w2"]), E, worked) == 1.0


def test_conditional_examples(worked):
    u = worked.universe
    w0, w1, w2 = (u.prop([w]) for w in u.worlds)
    # I(q|w1) = 0.6, I(p|w1) = 0.8 and 0.6 ⊙ 0.8 = 0.6 under min
    assert oracle_conditional(w2, w0, w1, worked, "min", "necessity") == pytest.approx(0.6)
    assert tightest_conditional_necessity(w2, w0, w1, worked) == pytest.approx(0.6)
    assert tightest_conditional_possibility(w2, w1, w0, worked) == pytest.approx(0.6)
    for p in u.all_propositions():
        assert tightest_conditional_necessity(p, p, u.full(), worked) == 1.0
        assert tightest_conditional_necessity(u.full(), p, w0, worked) == 1.0
        assert tightest_conditional_possibility(p, p, u.full(), worked) == 1.0


def test_singleton_evidence_conditionals_coincide(worked):
    u = worked.universe
    for q, p in itertools.product(u.all_propositions(), repeat=2):
        for w in range(3):
            E = u.singleton(w)
            assert tightest_conditional_necessity(q, p, E, worked) == tightest_conditional_possibility(q, p, E, worked)


def test_empty_evidence_rejected(worked):
    u = worked.universe
    with pytest.raises(EmptyEvidenceError):
        tightest_conditional_necessity(u.full(), u.full(), u.empty(), worked)


@pytest.mark.parametrize("norm", NORMS)
def test_distribution_laws(norm):
    for S in models(norm, [2, 3, 4], seeds=[5]):
        props = S.universe.all_propositions()
        u = S.universe
        for E in props[1:]:
            assert tightest_possibility(u.full(), E, S) == 1.0
            assert tightest_necessity(u.full(), E, S) == 1.0
            assert tightest_possibility(u.empty(), E, S) == 0.0
            for p in props:
                assert tightest_necessity(p, E, S) <= tightest_possibility(p, E, S) + EPS
                assert tightest_conditional_necessity(p, p, E, S) == 1.0
            for p, q in itertools.product(props, repeat=2):
                assert tightest_possibility(p | q, E, S) == max(tightest_possibility(p, E, S), tightest_possibility(q, E, S))
                assert tightest_necessity(p | q, E, S) >= max(tightest_necessity(p, E, S), tightest_necessity(q, E, S)) - EPS


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_limit_of_conditional_necessity(n):
    S = identity(n)
    props = S.universe.all_propositions()
    for E in props[1:]:
        for q, p in itertools.product(props, repeat=2):
            expected = float((p & E).issubset(q))
            assert tightest_conditional_necessity(q, p, E, S) == expected
            assert tightest_necessity(p, E, S) == float(E.issubset(p))
            assert tightest_possibility(p, E, S) == float(not (p & E).is_empty())


@pytest.mark.parametrize("norm", NORMS)
def test_conditional_matches_grid_oracle(norm):
    for S in models(norm, [3, 4], seeds=[8]):
        props = S.universe.all_propositions()
        E = props[5]
        for q, p in itertools.product(props[::3], repeat=2):
            for mode, f in (("necessity", tightest_conditional_necessity),
                            ("possibility", tightest_conditional_possibility)):
                assert abs(f(q, p, E, S, norm) - oracle_conditional(q, p, E, S, norm, mode)) <= 2e-3


TABLES = """
necessity N { p 0.6  q 0.6 }
possibility Pi { p 1  q 0.6 }
cond_necessity CN { q | p 0.6 }
cond_possibility CP { q | b1 0.6 }
"""


@pytest.fixture
def kb():
    return parse_kb(WORKED_KB + TABLES)


def test_tight_tables_are_valid(kb):
    for name in kb.tables:
        assert validate_table(kb.tables[name], kb) == []


def test_necessity_above_bound_is_reported(kb):
    table = DistributionTable("N2", TableKind.NECESSITY, {"q": 0.7, "p": 1.0})
    (v,) = validate_table(table, kb)
    assert v.key == "q" and v.tight == pytest.approx(0.6)
    assert "N2" in v.describe(table)


def test_possibility_of_one_is_always_valid(kb):
    table = DistributionTable("ones", TableKind.POSSIBILITY, {name: 1.0 for name in kb.propositions})
    assert validate_table(table, kb) == []
    low = DistributionTable("low", TableKind.COND_POSSIBILITY, {("q", "b1"): 0.5})
    assert [v.key for v in validate_table(low, kb)] == [("q", "b1")]


def test_unresolved_table_name(kb):
    with pytest.raises(UnresolvedNameError):
        validate_table(DistributionTable("x", TableKind.NECESSITY, {"nope": 0.1}), kb)
