import numpy as np
import pytest
from numpy.testing import assert_allclose

from fuscat import catalog
from fuscat.diagram import (RELATIONS, Compose, ExternalTensor, NodePair, OpenFamily, Tensor,
                            evaluate, node_pair_element, parse, relation_sweep,
                            relation_tuples, verify_relation)
from fuscat.diagram import _pairing
from fuscat.errors import InputError

rng = np.random.default_rng(7)
PHI = (1 + np.sqrt(5)) / 2


@pytest.fixture(scope='module')
def fib():
    return catalog.load('fib')


@pytest.fixture(scope='module')
def ising():
    return catalog.load('ising')


def test_parse_structure():
    d = parse('(id(x) ⊗ ev(y)) ∘ node(x,y,z;L;a)')
    assert isinstance(d, Compose)
    assert isinstance(d.left, Tensor)
    assert isinstance(d.right, NodePair)
    assert d.right.side == 'L'
    # ascii spellings of the operators parse to the same tree shape
    e = parse('(id(x) * ev(y)) . node(x,y,z;L;a)')
    assert type(e) is type(d) and type(e.left) is type(d.left)


def test_type_errors_are_found_at_evaluation(fib):
    d = parse('id(t) ∘ ev(t)', fib)
    with pytest.raises(InputError, match=r'type error in span \[0:7\]'):
        evaluate(d, fib)


def test_syntax_error_reports_position(fib):
    with pytest.raises(InputError, match='position 8') as err:
        parse('id(t) ∘ ∘ ev(t)', fib)
    assert '^' in str(err.value)
    with pytest.raises(InputError):
        parse('id(nope)', fib)


def test_single_node_half_is_scaled(fib):
    r = evaluate('node(t,t,t;L)', fib)
    assert isinstance(r, OpenFamily)
    assert len(r.values) == 1
    (val,) = r.values.values()
    assert_allclose(val.blocks['1'], [[PHI ** 1.5]], atol=1e-12)


@pytest.mark.parametrize('name', ['fib', 'ising', 'vecz2w'])
def test_loop_values(name):
    skel = catalog.load(name)
    for x in skel.labels:
        v = evaluate(f'ev({x}) ∘ ev*({x})', skel)
        assert abs(v.blocks[skel.ring.unit[0]][0, 0] - skel.d[x]) < 1e-12
        v = evaluate(f'coev*({x}) ∘ coev({x})', skel)
        assert abs(v.blocks[skel.ring.unit[0]][0, 0] - skel.d[x]) < 1e-12


def test_node_pair_duality(ising):
    elem = node_pair_element(ising, 'sigma', 'sigma', 'psi')
    assert len(elem) == 1
    elem = node_pair_element(ising, 'sigma', 'sigma', '1')
    for a in range(len(elem)):
        for b in range(len(elem)):
            assert abs(_pairing(ising, elem.lower[a], elem.upper[b], None) - (a == b)) < 1e-12
    with pytest.raises(InputError):
        node_pair_element(catalog.load_any('mm:fib:2'), 'tau_12', 'tau_12', 'tau_11')


def test_bigon_values(fib, ising):
    """Closed bigons: sqrt(d_x d_y / d_z) times the identity on z."""
    assert verify_relation('Bigon1', ('t', 't', 't'), fib) < 1e-12
    B = '(id(tau,tau) ⊗ coev*(tau)) ∘ (node(tau,tau,tau;L) ⊗ id(tau))'
    T = '(id(tau) ⊗ ev(tau,tau)) ∘ (node(tau,tau,tau;R) ⊗ id(tau,tau))'
    val = evaluate(f'{T} ∘ {B}', fib)
    assert_allclose(val.blocks['tau'], [[np.sqrt(PHI)]], atol=1e-12)
    assert verify_relation('Fusion', ('sigma', 'sigma'), ising) < 1e-12
    assert verify_relation('TwoBigons', ('sigma', 'sigma', 1), ising) < 1e-12


def test_basis_change_invariance():
    """Paired node halves do not depend on the chosen basis of the node space."""
    skel = catalog.load_any('mm:ising:2')
    x, y, z = 'sigma_12', 'sigma_21', '1_11'
    B = f'(id({x},{y}) ⊗ coev*({z})) ∘ (node({x},{y},{z};L) ⊗ id({z}))'
    T = f'(id({z}) ⊗ ev({x},{y})) ∘ (node({x},{y},{z};R) ⊗ id({x},{y}))'
    ref = evaluate(f'{B} ∘ {T}', skel)
    for _ in range(3):
        U = rng.normal(size=(1, 1)) + 1j * rng.normal(size=(1, 1))
        other = evaluate(f'{B} ∘ {T}', skel, node_bases={(x, y, z): U})
        assert ref.dist(other) < 1e-12
        # the unpaired half alone does change
        half = evaluate(f'node({x},{y},{z};L)', skel, node_bases={(x, y, z): U})
        base = evaluate(f'node({x},{y},{z};L)', skel)
        assert_allclose(half.values[(0,)].vector(), U[0, 0] * base.values[(0,)].vector())


@pytest.mark.parametrize('w', [('sigma', 'sigma', '1'), ('sigma', 'psi', 'sigma')])
def test_summed_pair_is_basis_free(ising, w):
    elem = node_pair_element(ising, *w)
    ref = elem.summed()
    n = len(elem)
    for _ in range(3):
        U = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        other = node_pair_element(ising, *w, basis_change=U)
        assert_allclose(other.summed(), ref, atol=1e-12)


def test_bracketing_independence(ising):
    a = evaluate('(id(sigma) ⊗ id(psi)) ⊗ id(sigma)', ising)
    b = evaluate('id(sigma) ⊗ (id(psi) ⊗ id(sigma))', ising)
    assert a.dist(b) < 1e-14
    f = '(ev(sigma) ⊗ id(sigma)) ∘ (id(sigma) ⊗ ev*(sigma))'
    g = '(id(sigma) ⊗ coev*(sigma)) ∘ (coev(sigma) ⊗ id(sigma))'
    assert evaluate(f'({f}) ∘ ({g})', ising).dist(evaluate(f'{f} ∘ {g}', ising)) < 1e-14


def test_named_environment(fib):
    f = fib.random(['tau', 'tau'], ['tau'], rng)
    v = evaluate('F ∘ (id(tau) ⊗ id(tau))', fib, env={'F': f})
    assert v.dist(f) < 1e-14
    w = evaluate('2 * F + F', fib, env={'F': f})
    assert w.dist(3 * f) < 1e-13


def test_external_tensor(fib):
    r = evaluate('id(tau) & ev(tau)', fib)
    assert isinstance(r, ExternalTensor)
    assert len(r.signatures) == 2
    with pytest.raises(InputError):
        r + evaluate('id(tau) & id(tau)', fib)


def test_relation_tuple_counts(fib):
    assert len(relation_tuples('Fusion', fib)) == 4
    assert len(relation_tuples('Bigon1', fib)) == 8
    with pytest.raises(InputError):
        relation_tuples('Pentagon', fib)


@pytest.mark.parametrize('name', ['vec', 'vecz2', 'vecz3', 'vecz2w', 'fib', 'ising'])
def test_relation_sweep(name):
    out = relation_sweep(catalog.load(name))
    assert set(out) == set(RELATIONS)
    for rel, r in out.items():
        assert r['residual'] < 1e-9, (rel, r)
        assert r['count'] > 0


def test_relation_sweep_multifusion():
    out = relation_sweep(catalog.load_any('mm:vecz2w:2'))
    assert max(r['residual'] for r in out.values()) < 1e-9


def test_relations_detect_a_wrong_normalisation(fib):
    """A deliberately wrong dual functor breaks Bigon1."""
    bad = fib.dual.rescaled({'1': 1.0, 'tau': 2.0}, name='bad')
    B = '(id(tau,tau) ⊗ coev*(tau)) ∘ (node(tau,tau,tau;L) ⊗ id(tau))'
    T = '(id(tau) ⊗ ev(tau,tau)) ∘ (node(tau,tau,tau;R) ⊗ id(tau,tau))'
    good = evaluate(f'{T} ∘ {B}', fib)
    off = evaluate(f'{T} ∘ {B}', fib, dual=bad)
    assert good.dist(np.sqrt(PHI) * fib.identity(['tau'])) < 1e-12
    assert off.dist(good) > 1e-3
