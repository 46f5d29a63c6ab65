import json
import os
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest
from numpy.testing import assert_allclose

from fuscat import catalog, kernels
from fuscat.errors import InputError
from fuscat.fusion_ring import global_dimension, is_indecomposable, validate
from fuscat.skeleton import verify_axioms

PHI = (1 + np.sqrt(5)) / 2


def test_vec():
    vec = catalog.load('vec')
    assert list(vec.labels) == ['1']
    assert vec.D == 1


def test_fib_passes_axioms():
    fib = catalog.load('fib')
    rep = verify_axioms(fib, dual_functor=True)
    assert rep.ok
    assert abs(fib.d['tau'] - PHI) < 1e-12
    # the one non-trivial block of F^{ttt}_t in the orthonormal gauge
    t = 'tau'
    M = np.array([[fib.Farr(t, t, t, t, e, f)[0, 0, 0, 0] for f in ('1', t)] for e in ('1', t)])
    assert_allclose(M, [[1 / PHI, 1 / np.sqrt(PHI)], [1 / np.sqrt(PHI), -1 / PHI]], atol=1e-12)


def test_z2_and_anomalous_z2_share_the_ring():
    a, b = catalog.load('vecz2'), catalog.load('vecz2w')
    assert np.array_equal(a.ring.N, b.ring.N)
    assert all(np.all(v == 1) for v in a.F.values())
    signs = [complex(v.ravel()[0]) for v in b.F.values()]
    assert signs.count(-1) == 1
    assert b.F['g', 'g', 'g', 'g', '1', '1'].ravel()[0] == -1


def test_aliases_and_unknown():
    assert catalog.load('Fibonacci').name == 'fib'
    assert catalog.load_any('vec(z/2,omega)').name == 'vecz2w'
    with pytest.raises(InputError):
        catalog.load('su2_5')
    with pytest.raises(InputError):
        catalog.load_any('mm:fib')
    with pytest.raises(InputError):
        catalog.load_any('mm:fib:0')


def test_matrix_multifusion_vec():
    mm = catalog.load_any('mm:vec:2')
    assert len(mm.labels) == 4
    assert list(mm.ring.unit) == ['1_11', '1_22']
    assert validate(mm.ring).ok
    assert is_indecomposable(mm.ring)


def test_matrix_multifusion_fib():
    mm = catalog.load_any('mm:fib:2')
    assert len(mm.labels) == 8
    assert verify_axioms(mm).ok
    for i in mm.ring.corner_ids:
        for j in mm.ring.corner_ids:
            assert abs(global_dimension(mm.ring, i, j) - 3.6180339887) < 1e-9
    lm = catalog.corner_label_map(mm, 2)
    assert lm == {'1_22': '1', 'tau_22': 'tau'}


def test_direct_sum():
    s = catalog.load_any('sum:fib:ising')
    assert validate(s.ring).ok
    assert not is_indecomposable(s.ring)
    assert len(s.labels) == 5
    assert verify_axioms(s).ok


def test_generated_entries_match_bundled():
    for name in catalog.names():
        stored = json.loads(resources.files('fuscat').joinpath('data', f'{name}.json').read_text())
        fresh = catalog.generate_entry(name)
        assert fresh['labels'] == stored['labels']
        key = lambda e: (e['a'], e['b'], e['c'], e['d'], e['e'], e['f'])
        a = {key(e): (e['re'], e['im']) for e in fresh['F']}
        b = {key(e): (e['re'], e['im']) for e in stored['F']}
        assert a.keys() == b.keys()
        assert_allclose([a[k] for k in a], [b[k] for k in a], atol=1e-14)


def test_pure_python_fallback_is_selected_by_env():
    code = 'from fuscat import kernels; print(kernels.BACKEND)'
    env = dict(os.environ, FUSCAT_PURE='1')
    out = subprocess.run([sys.executable, '-c', code], env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == 'python'
    assert kernels.BACKEND in kernels.available_backends()
