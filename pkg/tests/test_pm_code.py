from itertools import combinations

import numpy as np
import pytest

from mbrsec.analysis import all_determinable, min_distance
from mbrsec.errors import BadIndex, BadParams, FieldTooSmall, LengthMismatch, WrongHelperCount
from mbrsec.graph_code import VANDERMONDE
from mbrsec.pm_code import (
    index_set,
    pack_message,
    pm_build,
    pm_eavesdrop_blockmatrix,
    pm_encode,
    pm_reconstruct,
    pm_repair,
    pm_repair_helper,
    stack_observation,
    unpack_message,
)


def test_index_set_k3_d5():
    idx = index_set(3, 5)
    assert idx.elements == (
        (1, 1), (1, 2), (1, 3), (1, 4), (1, 5),
        (2, 2), (2, 3), (2, 4), (2, 5),
        (3, 3), (3, 4), (3, 5),
    )
    assert len(idx) == 12 == 3 * 5 - 3
    assert idx.position(4, 2) == 7
    with pytest.raises(BadParams):
        index_set(4, 3)


def test_pack_message_layout():
    idx = index_set(2, 3)
    m = pack_message(idx, [1, 2, 3, 4, 5])
    # [[S, T], [T^t, 0]] with S = [[1,2],[2,4]], T = [[3],[5]]
    assert m.tolist() == [[1, 2, 3], [2, 4, 5], [3, 5, 0]]
    assert unpack_message(idx, m) == [1, 2, 3, 4, 5]
    with pytest.raises(LengthMismatch):
        pack_message(idx, [1, 2])


def test_blockmatrix_pattern():
    code = pm_build(4, 2, 3, 7)
    e = code.psi.array[0]
    eb = pm_eavesdrop_blockmatrix(code, [1]).array
    # column order (1,1),(1,2),(1,3),(2,2),(2,3)
    expected = [
        [e[0], e[1], e[2], 0, 0],
        [0, e[0], 0, e[1], e[2]],
        [0, 0, e[0], 0, e[1]],
    ]
    assert eb.tolist() == [[int(x) for x in r] for r in expected]


@pytest.mark.parametrize("n,k,d,q", [(4, 3, 3, 7), (5, 3, 4, 11), (6, 2, 4, 11)])
def test_blockmatrix_identity(n, k, d, q):
    code = pm_build(n, k, d, q)
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = rng.integers(0, q, code.M).tolist()
        rows = pm_encode(code, f)
        for ell in (1, 2):
            for b in combinations(range(1, n + 1), ell):
                lhs = pm_eavesdrop_blockmatrix(code, b).array @ np.array(f) % q
                rhs = stack_observation(code, {v: rows[v - 1] for v in b}, b)
                assert lhs.tolist() == rhs


@pytest.mark.parametrize("n,k,d,q", [(4, 3, 3, 7), (5, 3, 4, 11)])
def test_eavesdrop_code_distance_and_determinability(n, k, d, q):
    code = pm_build(n, k, d, q)
    for ell in range(1, k):
        for b in combinations(range(1, n + 1), ell):
            eb = pm_eavesdrop_blockmatrix(code, b)
            assert min_distance(eb) == k - ell + 1
            assert all_determinable(eb, k - ell)
            assert not all_determinable(eb, k - ell + 1)


@pytest.mark.parametrize("n,k,d,q", [(4, 3, 3, 7), (5, 3, 4, 11), (5, 2, 4, 11)])
def test_round_trip_and_repair(n, k, d, q):
    code = pm_build(n, k, d, q)
    f = np.random.default_rng(5).integers(0, q, code.M).tolist()
    rows = pm_encode(code, f)
    for s in combinations(range(1, n + 1), k):
        assert pm_reconstruct(code, {v: rows[v - 1] for v in s}) == f
    for v in range(1, n + 1):
        helpers = [h for h in range(1, n + 1) if h != v][:d]
        sent = {h: pm_repair_helper(code, h, v, rows[h - 1]) for h in helpers}
        assert pm_repair(code, v, sent) == rows[v - 1]


def test_build_errors():
    with pytest.raises(FieldTooSmall):
        pm_build(4, 3, 3, 5)
    with pytest.raises(FieldTooSmall):
        pm_build(7, 3, 4, 7, VANDERMONDE)
    with pytest.raises(BadParams):
        pm_build(4, 3, 4, 7)


def test_vandermonde_sampled_verification():
    code = pm_build(6, 3, 4, 7, VANDERMONDE, budget=3)
    assert code.verified == "sampled"
    assert pm_build(6, 3, 4, 7, VANDERMONDE).verified == "exhaustive"


def test_runtime_errors():
    code = pm_build(4, 3, 3, 7)
    rows = pm_encode(code, range(code.M))
    with pytest.raises(BadIndex):
        pm_reconstruct(code, {1: rows[0], 2: rows[1]})
    with pytest.raises(BadIndex):
        pm_repair_helper(code, 2, 2, rows[1])
    with pytest.raises(WrongHelperCount):
        pm_repair(code, 1, {2: 0, 3: 0})
    with pytest.raises(BadIndex):
        pm_eavesdrop_blockmatrix(code, [5])
