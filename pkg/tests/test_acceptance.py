"""Acceptance suite: eight end-to-end criteria, each under a wall-clock budget.

Run with pytest (a summary line per criterion is printed at the end) or
directly as ``python3 tests/test_acceptance.py``.
"""

import io
import itertools
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import WORKED_KB, WORKED_MATRIX  # noqa: E402
from kbgen import random_kb_text  # noqa: E402
from possim.cli import main as cli_main  # noqa: E402
from possim.distributions import (  # noqa: E402
    tightest_conditional_necessity,
    tightest_conditional_possibility,
)
from possim.dsl import parse_kb, serialize_kb  # noqa: E402
from possim.gmp import GmpProblem, Mode, gmp_necessity, gmp_possibility, tight_problem  # noqa: E402
from possim.measures import (  # noqa: E402
    alpha_possible,
    closeness,
    degree_of_consistence,
    degree_of_implication,
    necessarily_implies,
)
from possim.oracle import (  # noqa: E402
    oracle_alpha_possible,
    oracle_conditional,
    oracle_consistence,
    oracle_gmp_bound,
    oracle_implication,
    oracle_implication_via_modal,
    oracle_necessarily_implies,
    oracle_residuum,
    random_matrix,
    random_valid_model,
    two_valued_modus_ponens,
)
from possim.similarity import check, closure_matrix, identity, validate  # noqa: E402
from possim.tnorm import TNorm  # noqa: E402
from possim.worlds import Proposition, Universe, set_partitions, validate_partition  # noqa: E402

TOL = 1e-9
NORMS = list(TNorm)
RESULTS: list[str] = []


def record(number, title, budget, fn):
    start = time.perf_counter()
    failure = None
    try:
        fn()
    except AssertionError as exc:
        failure = str(exc) or "assertion failed"
    elapsed = time.perf_counter() - start
    if failure is None and elapsed >= budget:
        failure = f"over budget ({elapsed:.1f}s >= {budget}s)"
    status = "PASS" if failure is None else "FAIL"
    line = f"[{status}] criterion {number}: {title} ({elapsed:.2f}s / {budget}s)"
    if failure:
        line += f" -- {failure.splitlines()[0]}"
    RESULTS.append(line)
    print(line)
    assert failure is None, line


def masks(universe):
    return universe.all_propositions()


def implication_table(props, S):
    """``table[i, j] = I(props[i] | props[j])`` built from the engine's closeness vectors."""
    close = np.array([closeness(p, S) for p in props])
    member = np.array([p.members for p in props])
    filled = np.where(member[None, :, :], close[:, None, :], np.inf)
    return np.minimum(filled.min(axis=2), 1.0)


def random_partition(rng, u):
    labels = rng.integers(0, rng.integers(1, len(u) + 1), size=len(u))
    return validate_partition([Proposition(u, labels == k, f"b{k}") for k in np.unique(labels)])


# 1 -------------------------------------------------------------------------

def classical_limit():
    for n in (2, 3, 4):
        S = identity(n)
        u = S.universe
        props = masks(u)
        for p, q in itertools.product(props, repeat=2):
            assert degree_of_implication(p, q, S) == float(q.issubset(p))
            assert degree_of_consistence(p, q, S) == float(not (p & q).is_empty())
        for blocks in set_partitions(n):
            P = validate_partition([Proposition(u, np.isin(np.arange(n), b), f"b{i}") for i, b in enumerate(blocks)])
            for E, q in itertools.product(props[1:], props):
                for mode, solve in ((Mode.NECESSITY, gmp_necessity), (Mode.POSSIBILITY, gmp_possibility)):
                    got = solve(tight_problem(P, q, E, S, mode), E, S)
                    assert got == two_valued_modus_ponens(P, q, E, mode.value), (n, blocks, mode)


# 2 -------------------------------------------------------------------------

def algebraic_suite():
    g = np.linspace(0.0, 1.0, 101)
    a, b, c = g[:, None, None], g[None, :, None], g[None, None, :]
    for norm in NORMS:
        t = norm.apply
        ab = t(a[:, :, 0], b[:, :, 0])
        assert np.all(np.abs(ab - ab.T) <= TOL), f"{norm}: commutativity"
        assert np.all(np.abs(t(t(a, b), c) - t(a, t(b, c))) <= TOL), f"{norm}: associativity"
        assert np.all(np.diff(ab, axis=0) >= -TOL) and np.all(np.diff(ab, axis=1) >= -TOL), f"{norm}: monotonicity"
        assert np.all(np.abs(t(g, 1.0) - g) <= TOL), f"{norm}: unit"
        # T(b, c) <= a  iff  c <= a ⊙ b
        left = t(b, c) <= a + TOL
        right = c <= norm.residuum(a, b) + TOL
        assert np.array_equal(left, right), f"{norm}: adjunction"


# 3 -------------------------------------------------------------------------

def metric_duality():
    for norm in (TNorm.LUKASIEWICZ, TNorm.MIN):
        for seed in range(1000):
            _, S = random_valid_model(seed, 8, norm)
            d = 1.0 - S.matrix
            via = d[:, :, None], d[None, :, :]
            bound = via[0] + via[1] if norm is TNorm.LUKASIEWICZ else np.maximum(*via)
            assert np.all(d[:, None, :] <= bound + TOL), f"{norm} seed {seed}"


# 4 -------------------------------------------------------------------------

def _transitive(table, norm):
    # I(p|q) >= I(p|r) ⊗ I(r|q) for every index triple (p, r, q)
    chained = norm.apply(table[:, :, None], table[None, :, :])
    return np.all(table[:, None, :] >= chained - TOL)


def implication_transitivity():
    rng = np.random.default_rng(4)
    for norm in NORMS:
        for n in range(1, 6):
            for seed in range(10):
                _, S = random_valid_model(1000 * n + seed, n, norm)
                props = masks(S.universe)
                table = implication_table(props, S)
                j = rng.integers(len(props), size=2)
                assert table[j[0], j[1]] == degree_of_implication(props[j[0]], props[j[1]], S)
                assert _transitive(table, norm), f"{norm} n={n} seed={seed}"
        for seed in range(1000):
            _, S = random_valid_model(seed, 8, norm)
            u = S.universe
            props = [Proposition(u, rng.random(8) < rng.random()) for _ in range(40)]
            assert _transitive(implication_table(props, S), norm), f"{norm} n=8 seed={seed}"


# 5 -------------------------------------------------------------------------

def lattice_and_modal():
    for norm in NORMS:
        for n, seed in itertools.product(range(1, 6), range(6)):
            _, S = random_valid_model(77 + 10 * n + seed, n, norm)
            props = masks(S.universe)
            I = implication_table(props, S)
            C = np.array([[degree_of_consistence(p, q, S) for q in props] for p in props])
            nonempty = np.array([not q.is_empty() for q in props])
            assert np.all(I[:, nonempty] <= C[:, nonempty] + TOL), f"{norm} n={n}: I <= C"
            # C(p ∪ p'|q) = max(C(p|q), C(p'|q)), indices are bitmasks
            union = np.bitwise_or.outer(np.arange(len(props)), np.arange(len(props)))
            assert np.array_equal(C[union], np.maximum(C[:, None, :], C[None, :, :])), f"{norm} n={n}: disjunction"
            for i, j in itertools.product(range(len(props)), repeat=2):
                assert I[i, j] == oracle_implication_via_modal(props[i], props[j], S), f"{norm} n={n}: modal"
            levels = sorted({0.0, 1.0, *S.matrix.ravel().tolist()})
            for p in props:
                regions = [alpha_possible(p, a, S).members for a in levels]
                for lo, hi in zip(regions, regions[1:]):
                    assert np.all(hi <= lo), f"{norm} n={n}: nestedness"


# 6 -------------------------------------------------------------------------

def gmp_soundness():
    S0 = validate(WORKED_MATRIX, TNorm.MIN, Universe.of_size(3))
    u0 = S0.universe
    E0, q0 = u0.prop(["w0"]), u0.prop(["w2"])
    P0 = validate_partition([u0.prop([w], name=f"b{i}") for i, w in enumerate(u0.worlds)])
    worked = gmp_necessity(tight_problem(P0, q0, E0, S0), E0, S0)
    assert worked == degree_of_implication(q0, E0, S0) == 0.6, f"worked KB gives {worked}"

    rng = np.random.default_rng(6)
    for trial in range(1000):
        norm = NORMS[trial % 3]
        n = int(rng.integers(1, 9))
        _, S = random_valid_model(trial, n, norm)
        u = S.universe
        P = random_partition(rng, u)
        E = Proposition(u, rng.random(n) < 0.5)
        if E.is_empty():
            E = u.singleton(int(rng.integers(n)))
        q = Proposition(u, rng.random(n) < 0.5)
        upper, lower = degree_of_implication(q, E, S), degree_of_consistence(q, E, S)
        nec = tight_problem(P, q, E, S)
        poss = tight_problem(P, q, E, S, Mode.POSSIBILITY)
        weak_n = GmpProblem(P, q, {k: v * rng.random() for k, v in nec.prior.items()},
                            {k: v * rng.random() for k, v in nec.conditional.items()})
        weak_p = GmpProblem(P, q, {k: v + (1 - v) * rng.random() for k, v in poss.prior.items()},
                            {k: v + (1 - v) * rng.random() for k, v in poss.conditional.items()},
                            Mode.POSSIBILITY)
        for problem in (nec, weak_n):
            assert gmp_necessity(problem, E, S) <= upper + TOL, f"trial {trial}: necessity"
        for problem in (poss, weak_p):
            assert gmp_possibility(problem, E, S) >= lower - TOL, f"trial {trial}: possibility"


# 7 -------------------------------------------------------------------------

def closure_correctness():
    rng = np.random.default_rng(7)
    for trial in range(1000):
        norm = NORMS[trial % 3]
        n = int(rng.integers(1, 9))
        raw = random_matrix(rng, n)
        closed, steps = closure_matrix(raw, norm)
        assert steps <= max(n - 1, 0), f"trial {trial}: {steps} compositions for n={n}"
        assert check(closed, norm) == [], f"trial {trial}: closure does not validate"
        assert np.all(closed >= raw), f"trial {trial}: closure lowered an entry"
        again, _ = closure_matrix(closed, norm)
        assert np.array_equal(again, closed), f"trial {trial}: not idempotent"
        off = ~np.eye(n, dtype=bool)
        assert np.all(closed[off] <= 1.0 - TOL), f"trial {trial}: discernibility lost"


# 8 -------------------------------------------------------------------------

GOLDEN = [
    (["query", "{kb}", "I(p|q)"], "0.600000\n"),
    (["query", "{kb}", "nec(q|p)"], "0.600000\n"),
    (["query", "{kb}", "pi(1, p)"], "{w0}\n"),
    (["query", "--explain", "{kb}", "I(p|q)"], "0.600000\n  farthest conditioning world: w2\n  nearest p-world: w0\n"),
    (["closure", "--check-only", "{kb}"], "0 entries raised\n"),
]


def oracle_and_dsl(tmp_dir):
    rng = np.random.default_rng(8)
    grid = np.linspace(0.0, 1.0, 101)
    for norm in NORMS:
        for a, b in itertools.product(grid[::5], repeat=2):
            assert abs(norm.residuum(a, b) - oracle_residuum(norm, a, b)) <= 1e-3 + TOL, f"{norm} residuum"
        for seed in range(40):
            n = int(rng.integers(1, 9))
            _, S = random_valid_model(500 + seed, n, norm)
            u = S.universe
            for _ in range(5):
                p, q, E = (Proposition(u, rng.random(n) < 0.5) for _ in range(3))
                if E.is_empty():
                    E = u.full()
                alpha = float(rng.random())
                assert degree_of_implication(p, q, S) == oracle_implication(p, q, S)
                assert degree_of_consistence(p, q, S) == oracle_consistence(p, q, S)
                assert set(alpha_possible(p, alpha, S).indices) == oracle_alpha_possible(p, alpha, S)
                assert necessarily_implies(q, p, alpha, S) == oracle_necessarily_implies(q, p, alpha, S)
                assert abs(tightest_conditional_necessity(q, p, E, S, norm)
                           - oracle_conditional(q, p, E, S, norm, "necessity")) <= 2e-3
                assert abs(tightest_conditional_possibility(q, p, E, S, norm)
                           - oracle_conditional(q, p, E, S, norm, "possibility")) <= 2e-3
                P = random_partition(rng, u)
                for mode, solve in ((Mode.NECESSITY, gmp_necessity), (Mode.POSSIBILITY, gmp_possibility)):
                    got = solve(tight_problem(P, q, E, S, mode), E, S)
                    assert abs(got - oracle_gmp_bound(P, q, E, S, norm, mode.value)) <= 2e-3, f"{norm} gmp"

    for i in range(500):
        kb = parse_kb(random_kb_text(rng))
        text = serialize_kb(kb)
        assert parse_kb(text) == kb, f"round trip {i}"

    path = os.path.join(tmp_dir, "worked.pkb")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(WORKED_KB)
    for argv, expected in GOLDEN:
        argv = [path if x == "{kb}" else x for x in argv]
        for _ in range(2):
            out, err = io.StringIO(), io.StringIO()
            assert cli_main(argv, out, err) == 0 and out.getvalue() == expected, f"golden {argv}"


def test_criterion_1_classical_limit():
    record(1, "classical limit", 5, classical_limit)


def test_criterion_2_algebraic_suite():
    record(2, "t-norm algebra on the 101-point grid", 5, algebraic_suite)


def test_criterion_3_metric_duality():
    record(3, "metric duality", 30, metric_duality)


def test_criterion_4_implication_transitivity():
    record(4, "implication transitivity", 60, implication_transitivity)


def test_criterion_5_lattice_and_modal():
    record(5, "I <= C, disjunction, modal characterization, nestedness", 30, lattice_and_modal)


def test_criterion_6_gmp_soundness():
    record(6, "GMP soundness", 60, gmp_soundness)


def test_criterion_7_closure():
    record(7, "closure correctness", 30, closure_correctness)


def test_criterion_8_oracle_and_dsl(tmp_path):
    record(8, "engine/oracle equivalence, DSL round trip, CLI goldens", 60, lambda: oracle_and_dsl(str(tmp_path)))


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
        failed = 0
        for test in tests:
            try:
                test(tmp) if test.__code__.co_argcount else test()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
