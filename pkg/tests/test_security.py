from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from mbrsec.errors import BadIndex, BadParams, BudgetExceeded
from mbrsec.graph_code import VANDERMONDE, gc_build, graph_from_edges, parse_edges
from mbrsec.matrix import MatrixFq
from mbrsec.pm_code import pm_build
from mbrsec.security import (
    audit,
    block_security_level,
    bounds_report,
    degradation_profile,
    dimakis_bound,
    exhaustive_mi_check,
    formula_level,
    observation_matrix,
    pawar_bound,
    perfect_secrecy_check,
    reduced_mbr_bound,
    secure_wrap,
    solution_counts,
    theorem1_level,
    theorem2_level,
)


@pytest.fixture(scope="module")
def d423():
    return gc_build(4, 2, 3, 13)


def test_closed_form_levels():
    assert theorem1_level(2, 3, 1) == 2
    assert theorem1_level(3, 4, 1) == 5
    assert theorem1_level(3, 4, 2) == 2
    assert [theorem1_level(5, 6, l) for l in range(5)] == [20, 14, 9, 5, 2]
    assert [theorem2_level(5, l) for l in range(5)] == [5, 4, 3, 2, 1]
    with pytest.raises(BadParams):
        theorem1_level(3, 4, 3)
    with pytest.raises(BadParams):
        theorem2_level(3, 3)


def test_bounds():
    assert dimakis_bound(5, 6, 6, 1) == 20
    assert pawar_bound(5, 6, 6, 1, 2) == 9
    assert pawar_bound(5, 6, 6, 1, 0) == 20
    # beyond MBR: alpha caps the per-node term
    assert dimakis_bound(3, 4, 2, 1) == 6
    with pytest.raises(BadParams):
        pawar_bound(3, 4, 4, 1, 3)
    with pytest.raises(BadParams):
        dimakis_bound(5, 4, 4, 1)
    r = bounds_report(7, 5, 6, 6, 1, 2)
    assert (r.dimakis, r.pawar, r.reduced) == (20, 9, 9)


def test_reduced_form_matches_sum():
    for d in range(1, 9):
        for k in range(1, d + 1):
            for ell in range(k):
                exact = (k - ell) * (d - Fraction(k + ell - 1, 2))
                assert pawar_bound(k, d, d, 1, ell) == exact == reduced_mbr_bound(k, d, ell)


def test_block_level_of_single_node(d423):
    rep = block_security_level(observation_matrix(d423, [1]), [1])
    assert (rep.min_distance, rep.block_level, rep.rank) == (3, 2, 3)
    assert not rep.full_reconstruction
    empty = block_security_level(MatrixFq.zeros(d423.field, 0, 5))
    assert empty.block_level == 5 and empty.min_distance is None


def test_audit_cauchy_and_vandermonde(d423):
    res = audit(d423, 1)
    assert res.worst.block_level == 2 and res.checked == res.total == 4
    assert audit(d423, 2).worst.block_level == 0
    assert audit(d423, 0).worst.block_level == 5
    g = graph_from_edges(parse_edges("1-4,2-4,1-2,1-3,3-4,2-3"))
    vcode = gc_build(4, 2, 3, 13, VANDERMONDE, graph=g, points=[1, 3, 5, 7, 9, 11])
    worst = audit(vcode, 1).worst
    assert worst.nodes == (4,) and worst.block_level == 0
    assert worst.witness.coefficients == (9, 1, 3) and worst.witness.support == (3,)
    with pytest.raises(BadParams):
        audit(d423, 5)
    with pytest.raises(BadParams):
        audit(d423, 1, mode="fast")


def test_audit_sampled_and_budget():
    code = gc_build(5, 3, 4, 19)
    res = audit(code, 1, mode="sampled", samples=3, seed=1)
    assert res.mode == "sampled" and res.checked <= 3 and res.worst.block_level == 5
    with pytest.raises(BudgetExceeded):
        audit(code, 2, subset_budget=3)
    with pytest.raises(BudgetExceeded):
        audit(code, 1, budget=10, method="enumerate")
    with pytest.raises(BudgetExceeded):
        audit(code, 1, budget=10, method="enumerate", skip_over_budget=True)


def test_pm_audit_levels():
    code = pm_build(5, 3, 4, 11)
    assert audit(code, 1).worst.block_level == 2
    assert audit(code, 2).worst.block_level == 1
    assert audit(code, 3).worst.block_level == 0


def test_secure_wrap_sizes(d423):
    w = secure_wrap(d423, 1)
    assert (w.R, w.secret_size) == (3, 2)
    w2 = secure_wrap(gc_build(7, 5, 6, 41, check_budget=10**7), 2)
    assert (w2.R, w2.secret_size) == (11, 9)
    with pytest.raises(BadParams):
        secure_wrap(d423, 2)
    assert w.extract_secret(w.compose([7, 8], [1, 2, 3])) == [7, 8]


def test_perfect_secrecy(d423):
    w = secure_wrap(d423, 1)
    assert all(perfect_secrecy_check(w, [v]) for v in range(1, 5))
    assert not perfect_secrecy_check(w, [1, 2])
    assert not perfect_secrecy_check(secure_wrap(d423, 0), [1])


def test_mutual_information_small():
    code = pm_build(4, 2, 3, 7)
    # M = 5 over F_5: 3125 files
    one = exhaustive_mi_check(code, [1], [1])
    assert one.files == 7**5
    rep = block_security_level(observation_matrix(code, [1]))
    assert rep.block_level == 1
    assert not exhaustive_mi_check(code, [1], rep.witness.support).zero
    assert exhaustive_mi_check(code, [], [1, 2, 3]).zero
    assert not exhaustive_mi_check(code, [1, 2], [1]).zero
    with pytest.raises(BadIndex):
        exhaustive_mi_check(code, [1], [6])
    with pytest.raises(BudgetExceeded):
        exhaustive_mi_check(code, [1], [1], budget=100)


def test_mi_on_every_small_target_set():
    code = pm_build(4, 2, 3, 7)
    for v in range(1, 5):
        rep = block_security_level(observation_matrix(code, [v]))
        for size in range(1, rep.block_level + 1):
            for b in combinations(range(1, 6), size):
                assert exhaustive_mi_check(code, [v], b).zero
        assert not exhaustive_mi_check(code, [v], rep.witness.support).zero


def test_solution_counts_shape():
    code = pm_build(4, 2, 3, 7)
    t = solution_counts(code, [1], [1, 0, 0, 0, 0])
    assert t.shape[1] == 7 and np.all(t == t[:, :1])
    t = solution_counts(code, [1, 2], [1, 0, 0, 0, 0])
    assert not np.all(t == t[:, :1])


def test_formula_level_and_profile():
    code = pm_build(7, 5, 6, 13)
    assert [formula_level(code, l) for l in range(8)] == [5, 4, 3, 2, 1, 0, 0, 0]
    prof = degradation_profile(code, 7)
    assert [r.audited_b for r in prof] == [20, 4, 3, 2, 1, 0, 0, 0]
    w = secure_wrap(code, 2)
    assert [r.formula_b for r in degradation_profile(w, 3)][:3] == [w.secret_size] * 3
    with pytest.raises(BadParams):
        degradation_profile(code, 8)
