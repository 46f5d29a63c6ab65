import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fuscat import catalog
from fuscat.errors import InputError, PreconditionError
from fuscat.fusion_ring import (FusionRing, corners, direct_sum_rings, global_dimension,
                                is_indecomposable, quantum_dims, validate)

PHI = (1 + np.sqrt(5)) / 2


def fib_ring(n_ttt=1):
    fusion = {('1', '1', '1'): 1, ('1', 't', 't'): 1, ('t', '1', 't'): 1,
              ('t', 't', '1'): 1, ('t', 't', 't'): n_ttt}
    return FusionRing(['1', 't'], ['1'], {'1': (1, 1), 't': (1, 1)}, {'1': '1', 't': 't'}, fusion)


def z2_ring():
    fusion = {('1', '1', '1'): 1, ('1', 'g', 'g'): 1, ('g', '1', 'g'): 1, ('g', 'g', '1'): 1}
    return FusionRing(['1', 'g'], ['1'], {'1': (1, 1), 'g': (1, 1)}, {'1': '1', 'g': 'g'}, fusion)


def brute_associativity(ring):
    """Independent oracle: sum_e N_ab^e N_ec^d == sum_f N_bc^f N_af^d over all tuples."""
    L = ring.labels
    bad = []
    for a, b, c, d in itertools.product(L, repeat=4):
        lhs = sum(ring.Nabc(a, b, e) * ring.Nabc(e, c, d) for e in L)
        rhs = sum(ring.Nabc(b, c, f) * ring.Nabc(a, f, d) for f in L)
        if lhs != rhs:
            bad.append((a, b, c, d))
    return bad


def test_validate_group_and_fib():
    assert validate(z2_ring()).ok
    assert validate(fib_ring()).ok
    assert brute_associativity(fib_ring()) == []


def test_validate_injected_multiplicity():
    # t t = 1 + 2t still generates a commutative, associative ring: both bracketings of
    # t t t give 2 + 5t, and the brute-force contraction agrees that nothing is violated
    ring = fib_ring(n_ttt=2)
    assert brute_associativity(ring) == []
    assert validate(ring).ok
    assert abs(quantum_dims(ring).d['t'] - (1 + np.sqrt(2))) < 1e-9


def broken_ring():
    """Three labels with a a = a, b b = b, a b = b a = 1: not associative."""
    labels = ['1', 'a', 'b']
    fusion = {('1', x, x): 1 for x in labels}
    fusion.update({(x, '1', x): 1 for x in labels})
    fusion.update({('a', 'b', '1'): 1, ('b', 'a', '1'): 1, ('a', 'a', 'a'): 1, ('b', 'b', 'b'): 1})
    return FusionRing(labels, ['1'], {x: (1, 1) for x in labels}, {'1': '1', 'a': 'b', 'b': 'a'},
                      fusion)


def test_validate_associativity_violation():
    ring = broken_ring()
    rep = validate(ring)
    assert not rep.ok
    witnesses = {v.witness for v in rep.violations if v.kind == 'associativity'}
    assert witnesses == set(brute_associativity(ring))
    assert ('a', 'a', 'b', '1') in witnesses


def test_validate_unknown_label_is_input_error():
    with pytest.raises(InputError):
        FusionRing(['1'], ['1'], {'1': (1, 1)}, {'1': '1'}, {('1', 'q', '1'): 1})


def test_validate_duality_violation():
    fusion = {('1', '1', '1'): 1, ('1', 'g', 'g'): 1, ('g', '1', 'g'): 1, ('g', 'g', 'g'): 1}
    ring = FusionRing(['1', 'g'], ['1'], {'1': (1, 1), 'g': (1, 1)}, {'1': '1', 'g': 'g'}, fusion)
    rep = validate(ring)
    assert not rep.ok
    assert 'duality' in rep.kinds()


def test_quantum_dims():
    assert_allclose(list(quantum_dims(z2_ring()).d.values()), [1, 1])
    d = quantum_dims(fib_ring()).d
    assert abs(d['t'] - 1.6180339887) < 1e-9
    # largest eigenvalue of the fusion matrix of t
    assert abs(d['t'] - max(np.linalg.eigvalsh(np.array([[0, 1], [1, 1]])))) < 1e-12
    ising = catalog.load('ising').ring
    assert abs(quantum_dims(ising).d['sigma'] - 1.4142135624) < 1e-9


@pytest.mark.parametrize('name', ['fib', 'ising', 'vecz3', 'mm:fib:2', 'mm:ising:2'])
def test_dims_are_a_character(name):
    ring = catalog.load_any(name).ring
    d = quantum_dims(ring).d
    for a, b in itertools.product(ring.labels, repeat=2):
        if ring.right(a) != ring.left(b):
            continue
        assert abs(d[a] * d[b] - sum(ring.Nabc(a, b, c) * d[c] for c in ring.labels)) < 1e-9
    for x in ring.labels:
        assert d[x] == d[ring.dual[x]]
        assert d[x] >= 1 - 1e-12
    for u in ring.unit:
        assert d[u] == 1


def test_global_dimension():
    assert abs(global_dimension(fib_ring()) - 3.6180339887) < 1e-9
    assert abs(global_dimension(fib_ring()) - (1 + PHI ** 2)) < 1e-12
    mm = catalog.load_any('mm:fib:2').ring
    for i, j in itertools.product(mm.corner_ids, repeat=2):
        assert abs(global_dimension(mm, i, j) - 3.6180339887) < 1e-9
    vec2 = catalog.load_any('mm:vec:2').ring
    for i, j in itertools.product(vec2.corner_ids, repeat=2):
        assert global_dimension(vec2, i, j) == 1


def test_decomposable():
    ring = direct_sum_rings(catalog.load('fib').ring, catalog.load('ising').ring)
    assert validate(ring).ok
    assert not is_indecomposable(ring)
    with pytest.raises(PreconditionError, match='C_12'):
        global_dimension(ring)
    assert quantum_dims(ring).D is None
    assert is_indecomposable(fib_ring())


def test_corners_of_matrix_category():
    mm = catalog.load_any('mm:fib:2').ring
    cs = corners(mm)
    assert len(cs) == 2
    for i, c in zip(mm.corner_ids, cs):
        assert validate(c).ok
        assert c.unit == (mm.unit_of(i),)
        assert [x.split('_')[0] for x in c.labels] == ['1', 'tau']
        assert abs(global_dimension(c) - 3.6180339887) < 1e-9


def test_json_round_trip():
    ring = catalog.load('ising').ring
    again = FusionRing.from_json_dict(ring.to_json_dict())
    assert again.labels == ring.labels
    assert np.array_equal(again.N, ring.N)
    with pytest.raises(InputError):
        FusionRing.from_json('{"labels": [}')
    with pytest.raises(InputError):
        FusionRing.from_json_dict({'labels': ['1']})
