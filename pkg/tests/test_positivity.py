import numpy as np
import pytest
from numpy.testing import assert_allclose

from fuscat import catalog
from fuscat.errors import InputError
from fuscat.positivity import (chi, cone_dual_test, frobenius_shift, frobenius_unshift, is_cp,
                               phase_rescaled_dual, reality_residual, rotate, selinger_map,
                               split_query, theta_from_f, transport_cp, unrotate)
from fuscat.skeleton import tensor

rng = np.random.default_rng(31)
PHI = (1 + np.sqrt(5)) / 2


@pytest.fixture(scope='module')
def fib():
    return catalog.load('fib')


@pytest.fixture(scope='module')
def ising():
    return catalog.load('ising')


def random_f(skel, tries=200):
    """Random f : a c -> b between simple letters with a non-zero hom space."""
    L = skel.labels
    ring = skel.ring
    for _ in range(tries):
        a, c, b = rng.choice(L, 3)
        if ring.right(a) != ring.left(c):
            continue
        if skel.hom_dim([a, c], [b]):
            return skel.random([a, c], [b], rng)
    raise RuntimeError('no admissible triple found')


def min_eig(M):
    return min(np.linalg.eigvalsh(0.5 * (X + X.conj().T)).min() for X in M.blocks.values() if X.size)


def test_theta_of_identity(fib):
    th = theta_from_f(fib.identity(['tau']), ['tau'])
    assert th.dist(fib.identity(['tau', 'tau'])) < 1e-14
    cert = is_cp(th)
    assert cert.is_cp and cert.reconstruction < 1e-12
    bad = is_cp(-th)
    assert not bad.is_cp
    assert abs(bad.min_eigenvalue + PHI) < 1e-12
    assert bad.eigvector is not None


def test_zero_is_cp(ising):
    th = theta_from_f(ising.identity(['sigma']), ['sigma'])
    cert = is_cp(th - th)
    assert cert.is_cp and cert.boundary


def test_rotation_of_identity(fib):
    th = fib.identity(['tau', 'tau'])
    r = rotate(th)
    assert r.dist(fib.ev(['tau']).dag() @ fib.ev(['tau'])) < 1e-14
    assert unrotate(r, ['tau'], ['tau']).dist(th) < 1e-13
    with pytest.raises(InputError):
        rotate(th, 2)


@pytest.mark.parametrize('name', ['fib', 'ising', 'vecz2w', 'mm:fib:2'])
def test_theta_f_is_cp(name):
    skel = catalog.load_any(name)
    for _ in range(6):
        f = random_f(skel)
        th = theta_from_f(f)
        cert = is_cp(th)
        assert cert.is_cp
        assert cert.reconstruction < 1e-9
        assert min_eig(rotate(th, -1)) > -1e-10
        assert unrotate(rotate(th), th.source[:1], th.target[:1]).dist(th) < 1e-12
        assert reality_residual(th) < 1e-12
        assert not is_cp(-th).is_cp or th.max_abs() < 1e-12


def test_split_query(fib):
    th = theta_from_f(random_f(fib))
    q = split_query(th)
    assert len(q.a) == 1 and len(q.b) == 1
    with pytest.raises(InputError):
        split_query(fib.identity(['tau', 'tau', 'tau']))


def test_frobenius_shift(ising):
    x, y, e, z = 'sigma', 'sigma', 'psi', 'sigma'
    for _ in range(4):
        f = ising.random([x, y, e], [z], rng)
        th = theta_from_f(f, [x, y])
        sh = frobenius_shift(th, [x])
        assert is_cp(sh, [y], [ising.ring.dual[x], z]).is_cp
        assert frobenius_unshift(sh, [x]).dist(th) < 1e-12
    # additivity
    f, g = ising.random([x, y, e], [z], rng), ising.random([x, y, e], [z], rng)
    t1, t2 = theta_from_f(f, [x, y]), theta_from_f(g, [x, y])
    lhs = frobenius_shift(t1 + 2.5 * t2, [x])
    assert lhs.dist(frobenius_shift(t1, [x]) + 2.5 * frobenius_shift(t2, [x])) < 1e-12


def test_cone_dual_test(fib):
    for _ in range(5):
        ff = fib.random(['1', 'tau'], ['tau'], rng)
        th = theta_from_f(ff, [])
        assert cone_dual_test(th)
        res = cone_dual_test(-th)
        assert not res
        assert res.witness is not None and res.min_value < 0
    with pytest.raises(InputError):
        cone_dual_test(th, phi={'1': 0.0})


def test_cone_dual_test_multifusion_state():
    mm = catalog.load_any('mm:fib:2')
    ff = mm.random(['1_11', 'tau_12'], ['tau_12'], rng)
    th = theta_from_f(ff, [])
    assert cone_dual_test(th, phi={'1_11': 0.3, '1_22': 0.7})
    assert not cone_dual_test(-th, phi=[0.5, 0.5])


def test_chi_identity_and_unitarity(fib):
    assert chi(fib, ['tau'], fib.dual, fib.dual).dist(fib.identity(['tau'])) < 1e-12
    d2 = phase_rescaled_dual(fib, rng)
    U = chi(fib, ['tau', 'tau'], fib.dual, d2)
    assert (U @ U.dag()).dist(fib.identity(U.source)) < 1e-12


@pytest.mark.parametrize('name', ['fib', 'ising'])
def test_transport_by_phases(name):
    skel = catalog.load(name)
    for _ in range(4):
        th = theta_from_f(random_f(skel))
        d2 = phase_rescaled_dual(skel, rng)
        assert is_cp(transport_cp(th, skel.dual, d2), dual=d2).is_cp
        assert not is_cp(transport_cp(-th, skel.dual, d2), dual=d2).is_cp
        same = transport_cp(th, skel.dual, skel.dual)
        assert same.dist(th) < 1e-12


def test_transport_by_corner_weights():
    mm = catalog.load_any('mm:fib:2')
    d3 = phase_rescaled_dual(mm, rng, corner_weights={1: 1.0, 2: 3.7})
    for _ in range(6):
        f0 = random_f(mm)
        th = theta_from_f(f0)
        f = mm.random(f0.source, f0.target, rng)
        mix = th - rng.random() * 2 * theta_from_f(f)
        verdict = is_cp(mix).is_cp
        assert is_cp(transport_cp(mix, mm.dual, d3), dual=d3).is_cp == verdict


def test_selinger_positivity(ising):
    for _ in range(5):
        f = ising.random(['sigma', 'sigma'], ['psi'], rng)
        th = theta_from_f(f, ['sigma'])
        h = ising.random(['sigma', 'sigma'], ['sigma', 'sigma'], rng)
        S = selinger_map(th, h @ h.dag(), ['sigma'])
        assert min_eig(S) > -1e-10


def test_reality_on_anomalous_z2():
    z2w = catalog.load('vecz2w')
    f = z2w.random(['g', 'g'], ['1'], rng)
    th = theta_from_f(f)
    assert reality_residual(th) < 1e-12
    assert reality_residual(1j * th) > 1e-3 or th.max_abs() < 1e-12


def test_cone_axioms(ising):
    a, c, b = 'sigma', 'sigma', 'psi'
    f, g = ising.random([a, c], [b], rng), ising.random([a, c], [b], rng)
    t1, t2 = theta_from_f(f), theta_from_f(g)
    assert is_cp(t1 + t2).is_cp                           # sums
    assert is_cp(3.0 * t1).is_cp                          # positive scaling
    # composition: P_{b,e} o P_{a,b} in P_{a,e}
    k = ising.random([b, 'psi'], ['1'], rng)
    t3 = theta_from_f(k)
    assert is_cp(t3 @ t1).is_cp
    # adjoint lands in P_{b,a}
    assert is_cp(t1.dag(), [b], [a]).is_cp
    # amplification by id_{d dbar}
    d = ['sigma']
    amp = tensor(tensor(ising.identity(d), t1), ising.identity(ising.dual_word(ising.word(d))))
    assert is_cp(amp, d + [a], d + [b]).is_cp
    assert not is_cp(-amp, d + [a], d + [b]).is_cp
