import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fuscat import catalog
from fuscat.center import (TubeAlgebra, center_hom_dim, center_tensor, corner_lift,
                           corner_project, corners_compare, delta, enumerate_center,
                           half_braiding_verify, perturb, projector_report, relabel, u_iso,
                           unit_object)
from fuscat.errors import PreconditionError

rng = np.random.default_rng(5)
PHI = (1 + np.sqrt(5)) / 2

_centers = {}


def center_of(name):
    if name not in _centers:
        _centers[name] = enumerate_center(catalog.load_any(name), seed=0)
    return _centers[name]


def brute_pointed_center(skel):
    """All one-dimensional half-braidings of a pointed category by exhaustive search.

    Every ``e_c`` is a root of unity of order ``2|G|`` and the hexagon reads
    ``e_{cd} = w(c,d,X) w(c,X,d) w(X,c,d) e_c e_d`` with ``w`` the (real, +-1) associator.
    Returns ``{(X, k_c, ...)}`` with ``e_c = exp(2 pi i k_c / 2|G|)`` for the non-unit ``c``.
    """
    ring = skel.ring
    L = list(ring.labels)
    n = 2 * len(L)

    def prod(a, b):
        return ring.outcomes(a, b)[0]

    def w(a, b, c):
        return complex(skel.F[a, b, c, prod(prod(a, b), c), prod(a, b), prod(b, c)].ravel()[0])

    roots = [np.exp(2j * np.pi * k / n) for k in range(n)]
    u = ring.unit[0]
    others = [c for c in L if c != u]
    sols = set()
    for X in L:
        for ks in itertools.product(range(n), repeat=len(others)):
            e = {u: 1.0}
            e.update({c: roots[k] for c, k in zip(others, ks)})
            if all(abs(e[prod(c, d)] - w(c, d, X) * w(c, X, d) * w(X, c, d) * e[c] * e[d]) < 1e-12
                   for c in L for d in L):
                sols.add((X,) + ks)
    return sols


def exponents(skel, z):
    n = 2 * len(skel.labels)
    u = skel.ring.unit[0]
    ((X, m),) = z.X.items
    assert m == 1
    ks = []
    for c in skel.labels:
        if c == u:
            continue
        (v,) = [M[0, 0] for M in z.e[c].blocks.values() if M.size]
        k = np.angle(v) / (2 * np.pi) * n
        assert abs(abs(v) - 1) < 1e-12 and abs(k - round(k)) < 1e-9
        ks.append(int(round(k)) % n)
    return (X,) + tuple(ks)


def test_unit_object_is_trivial():
    for name in ('fib', 'vecz2w', 'mm:fib:2'):
        rep = half_braiding_verify(unit_object(catalog.load_any(name)))
        assert rep.ok
        assert max(rep.residuals.values()) == 0


def test_delta_of_unit():
    fib = catalog.load('fib')
    d = delta(fib, '1')
    assert d.X.as_dict() == {'1': 2, 'tau': 1}
    assert half_braiding_verify(d.obj).ok
    ising = catalog.load('ising')
    assert delta(ising, '1').X.as_dict() == {'1': 3, 'psi': 1}


@pytest.mark.parametrize('name', ['vecz2w', 'fib', 'ising'])
def test_delta_half_braiding(name):
    skel = catalog.load(name)
    Y = skel.obj({x: 1 for x in skel.labels})
    rep = half_braiding_verify(delta(skel, Y).obj)
    assert rep.ok, rep.to_dict()


def test_perturbation_trips_hexagon():
    fib = catalog.load('fib')
    bad = perturb(delta(fib, 'tau').obj, 1e-3, rng=1)
    rep = half_braiding_verify(bad)
    assert not rep.ok
    assert 'hexagon' in rep.failures()
    assert rep.witness['hexagon'] is not None


@pytest.mark.parametrize('name', ['vecz2', 'vecz2w', 'vecz3'])
def test_pointed_centers_against_brute_force(name):
    skel = catalog.load(name)
    cd = center_of(name)
    assert {exponents(skel, z) for z in cd.simples} == brute_pointed_center(skel)


@pytest.mark.parametrize('name,count', [('vec', 1), ('vecz2', 4), ('vecz2w', 4), ('vecz3', 9),
                                        ('fib', 4), ('ising', 9)])
def test_enumerate_counts(name, count):
    cd = center_of(name)
    assert len(cd.simples) == count
    assert abs(sum(d * d for d in cd.dims) - cd.D ** 2) < 1e-6
    assert np.array_equal(cd.hom_table, np.eye(count, dtype=int))
    assert max(cd.residuals.values()) < 1e-10


def test_fib_center_dims():
    assert_allclose(sorted(center_of('fib').dims), [1, PHI, PHI, PHI + 1], atol=1e-10)


def test_ising_center_dims():
    assert_allclose(sorted(center_of('ising').dims),
                    [1, 1, 1, 1] + [np.sqrt(2)] * 4 + [2], atol=1e-10)


@pytest.mark.parametrize('name', ['vecz2w', 'fib', 'ising'])
def test_projector_machinery(name):
    for z in center_of(name).simples:
        rep = projector_report(z)
        assert rep['ok'], rep
        # trace of p on the corner block: a positive integer
        assert abs(rep['rank'] - round(rep['rank'])) < 1e-9 and round(rep['rank']) >= 1


def test_u_is_an_isometry_on_fib_unit():
    fib = catalog.load('fib')
    u = u_iso(unit_object(fib))
    assert (u.dag() @ u).dist(fib.identity(u.source)) < 1e-12


def test_tube_algebra_closure():
    for name, dim in (('fib', 7), ('ising', 12)):
        tube = TubeAlgebra.build(catalog.load(name))
        assert tube.dim == dim
        assert tube.closure_residual() < 1e-10


def test_center_tensor_is_a_center_object():
    zs = center_of('fib').simples
    for a, b in itertools.product(zs[1:3], repeat=2):
        assert half_braiding_verify(center_tensor(a, b)).ok


def test_multifusion_centers():
    assert len(center_of('mm:vec:2').simples) == 1
    cd = center_of('mm:vecz2w:2')
    assert len(cd.simples) == 4
    for z in cd.simples:
        dims = z.corner_dims()
        assert abs(dims[1] - dims[2]) < 1e-12


def test_corner_projection_is_tensor_functorial():
    C = catalog.load_any('mm:vecz2w:2')
    zs = center_of('mm:vecz2w:2').simples
    for a, b in itertools.product(zs, repeat=2):
        lhs = corner_project(center_tensor(a, b), 1)
        rhs = center_tensor(corner_project(a, 1), corner_project(b, 1))
        assert lhs.X == rhs.X
        for c, f in lhs.e.items():
            assert f.dist(rhs.e[c]) < 1e-12
    with pytest.raises(PreconditionError):
        corner_project(_off_diagonal(C), 1)


def _off_diagonal(C):
    """An object of C (not a center object) with off-diagonal support."""
    obj = unit_object(C)
    X = C.obj({'1_11': 1, 'g_12': 1})
    return type(obj)(C, X, {}, name='junk')


def test_corner_lift_round_trip():
    C = catalog.load_any('mm:vecz2w:2')
    for z in center_of('mm:vecz2w:2').simples:
        proj = corner_project(z, 2)
        lifted, W, res = corner_lift(proj, C, 2)
        assert max(res.values()) < 1e-10
        assert center_hom_dim(lifted, z) == 1


def test_corners_compare():
    C = catalog.load_any('mm:vecz2w:2')
    out = corners_compare(C)
    assert out['ok'], out
    out = corners_compare(C, catalog.load('vecz2w'))
    assert out['ok']
    with pytest.raises(PreconditionError):
        corners_compare(catalog.load_any('sum:vecz2:vecz2w'))


def test_relabel_round_trip():
    C = catalog.load_any('mm:fib:2')
    fib = catalog.load('fib')
    z = center_of('fib').simples[1]
    up = relabel(z, C.corner(1), {'1': '1_11', 'tau': 'tau_11'})
    assert half_braiding_verify(up).ok
    back = relabel(up, fib, {'1_11': '1', 'tau_11': 'tau'})
    assert center_hom_dim(back, z) == 1
