"""Bundled category data and constructors for derived (multi)fusion categories.

Bundled entries live in ``fuscat/data/*.json`` in the JSON schema of
:meth:`Skeleton.from_json_dict`. They are produced by :func:`generate_entry` (run via
``python -m fuscat.catalog --regenerate``), which refuses to write data failing
:func:`~fuscat.skeleton.verify_axioms`.
"""
from __future__ import annotations

import itertools
import json
import os
from importlib import resources

import numpy as np

from .errors import AxiomViolation, InputError
from .fusion_ring import DEFAULT_TOL, FusionRing, direct_sum_rings
from .skeleton import Skeleton, verify_axioms

__all__ = ['CATALOG', 'load', 'names', 'load_any', 'matrix_multifusion', 'direct_sum',
           'generate_entry']

CATALOG = {
    'vec': 'Vec: the trivial fusion category',
    'vecz2': 'Vec(Z/2) with trivial associator',
    'vecz3': 'Vec(Z/3) with trivial associator',
    'vecz2w': 'Vec(Z/2, omega) with the non-trivial 3-cocycle',
    'fib': 'Fibonacci category',
    'ising': 'Ising category',
}

_ALIASES = {
    'vec': 'vec', 'vecz2': 'vecz2', 'vec(z/2)': 'vecz2', 'z2': 'vecz2',
    'vecz3': 'vecz3', 'vec(z/3)': 'vecz3', 'z3': 'vecz3',
    'vecz2w': 'vecz2w', 'vec(z/2,omega)': 'vecz2w', 'z2w': 'vecz2w',
    'fib': 'fib', 'fibonacci': 'fib', 'ising': 'ising',
}

_cache = {}


def names() -> list:
    return list(CATALOG)


def _data_path(name: str):
    return resources.files('fuscat').joinpath('data', f'{name}.json')


def load(name: str, tol: float = DEFAULT_TOL, check: bool = True) -> Skeleton:
    """Load a bundled entry; the axiom suite is run on every load."""
    key = _ALIASES.get(name.lower())
    if key is None:
        raise InputError(f'unknown catalog entry {name!r}; known: {", ".join(CATALOG)}')
    text = _data_path(key).read_text()
    skel = Skeleton.from_json(text, name=key, tol=tol)
    if check:
        rep = verify_axioms(skel)
        if not rep.ok:
            raise AxiomViolation(f'bundled entry {key} fails {rep.failures()}', rep)
    return skel


def load_any(spec: str, tol: float = DEFAULT_TOL) -> Skeleton:
    """Catalog name, ``mm:<name>:<k>`` (matrix multifusion), ``sum:<a>:<b>`` or a JSON path."""
    if spec.startswith('mm:'):
        try:
            _, base, k = spec.split(':')
            return matrix_multifusion(load(base, tol=tol), int(k))
        except ValueError as err:
            raise InputError(f'bad matrix spec {spec!r} (use mm:<name>:<k>)') from err
    if spec.startswith('sum:'):
        try:
            _, a, b = spec.split(':')
        except ValueError as err:
            raise InputError(f'bad direct-sum spec {spec!r} (use sum:<a>:<b>)') from err
        return direct_sum(load(a, tol=tol), load(b, tol=tol))
    if spec.lower() in _ALIASES:
        return load(spec, tol=tol)
    if os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
        return Skeleton.from_json(text, tol=tol)
    raise InputError(f'{spec!r} is neither a catalog entry nor a readable file')


def load_ring_any(spec: str) -> FusionRing:
    """Like :func:`load_any` but also accepts ring-only JSON files (no F-symbols)."""
    if os.path.exists(spec) and spec.lower() not in _ALIASES:
        with open(spec) as fh:
            text = fh.read()
        return FusionRing.from_json(text)
    return load_any(spec).ring


# ---------------------------------------------------------------------- constructions

def matrix_multifusion(C: Skeleton, k: int) -> Skeleton:
    """The k x k matrix category over the fusion category ``C``.

    Simples are ``x_ij`` for ``x in Irr(C)`` and corners ``1 <= i, j <= k``; fusion and
    F-symbols are those of ``C`` on the underlying labels.
    """
    ring = C.ring
    if len(ring.unit) != 1:
        raise InputError('matrix_multifusion needs a fusion category (simple unit)')
    if not 1 <= k <= 9:
        raise InputError('k must be between 1 and 9')

    def lab(x, i, j):
        return f'{x}_{i}{j}'

    corners = range(1, k + 1)
    labels = [lab(x, i, j) for i in corners for j in corners for x in ring.labels]
    u = ring.unit[0]
    unit = [lab(u, i, i) for i in corners]
    grade = {lab(x, i, j): (i, j) for i in corners for j in corners for x in ring.labels}
    dual = {lab(x, i, j): lab(ring.dual[x], j, i)
            for i in corners for j in corners for x in ring.labels}
    fusion = {}
    base = ring.fusion_dict()
    for i, j, l in itertools.product(corners, repeat=3):
        for (a, b, c), n in base.items():
            fusion[lab(a, i, j), lab(b, j, l), lab(c, i, l)] = n
    aliases = {}
    for alias, target in ring.aliases.items():
        for i, j in itertools.product(corners, repeat=2):
            aliases[lab(alias, i, j)] = lab(target, i, j)
    name = f'mm({C.name},{k})'
    new_ring = FusionRing(labels, unit, grade, dual, fusion, name=name, aliases=aliases)
    F = {}
    for i, j, l, m in itertools.product(corners, repeat=4):
        for (a, b, c, d, e, f), arr in C.F.items():
            F[lab(a, i, j), lab(b, j, l), lab(c, l, m), lab(d, i, m), lab(e, i, l), lab(f, j, m)] = arr
    return Skeleton(new_ring, F, name=name, tol=C.tol)


def corner_label_map(mm: Skeleton, i: int) -> dict:
    """For a matrix category: label of corner ``C_ii`` -> underlying base label."""
    suffix = f'_{i}{i}'
    return {x: x[:-len(suffix)] for x in mm.ring.corner_labels(i, i)}


def direct_sum(C: Skeleton, D: Skeleton) -> Skeleton:
    """The decomposable multifusion category ``C + D`` (labels prefixed by ``A``/``B``)."""
    ring = direct_sum_rings(C.ring, D.ring)
    F = {}
    for tag, S in (('A', C), ('B', D)):
        for key, arr in S.F.items():
            F[tuple(tag + x for x in key)] = arr
    return Skeleton(ring, F, name=f'{C.name}+{D.name}', tol=min(C.tol, D.tol))


# ---------------------------------------------------------------------- data generation

def _group_ring(n: int, names_: list) -> dict:
    fusion = {(names_[a], names_[b], names_[(a + b) % n]): 1 for a in range(n) for b in range(n)}
    return {
        'labels': names_, 'unit': [names_[0]],
        'grade': {x: [1, 1] for x in names_},
        'dual': {names_[a]: names_[(-a) % n] for a in range(n)},
        'fusion': [{'a': a, 'b': b, 'c': c, 'n': 1} for (a, b, c) in fusion],
    }


def _ring_data(name: str) -> dict:
    if name == 'vec':
        return _group_ring(1, ['1'])
    if name in ('vecz2', 'vecz2w'):
        return _group_ring(2, ['1', 'g'])
    if name == 'vecz3':
        return _group_ring(3, ['1', 'g', 'g2'])
    if name == 'fib':
        fusion = [('1', '1', '1'), ('1', 'tau', 'tau'), ('tau', '1', 'tau'),
                  ('tau', 'tau', '1'), ('tau', 'tau', 'tau')]
        return {'labels': ['1', 'tau'], 'unit': ['1'], 'grade': {'1': [1, 1], 'tau': [1, 1]},
                'dual': {'1': '1', 'tau': 'tau'},
                'fusion': [{'a': a, 'b': b, 'c': c, 'n': 1} for a, b, c in fusion],
                'aliases': {'t': 'tau', 'τ': 'tau'}}
    if name == 'ising':
        fusion = [('1', x, x) for x in ('1', 'sigma', 'psi')] + [
            ('sigma', '1', 'sigma'), ('psi', '1', 'psi'),
            ('sigma', 'sigma', '1'), ('sigma', 'sigma', 'psi'),
            ('sigma', 'psi', 'sigma'), ('psi', 'sigma', 'sigma'), ('psi', 'psi', '1')]
        return {'labels': ['1', 'sigma', 'psi'], 'unit': ['1'],
                'grade': {x: [1, 1] for x in ('1', 'sigma', 'psi')},
                'dual': {x: x for x in ('1', 'sigma', 'psi')},
                'fusion': [{'a': a, 'b': b, 'c': c, 'n': 1} for a, b, c in fusion],
                'aliases': {'s': 'sigma', 'σ': 'sigma', 'p': 'psi', 'ψ': 'psi'}}
    raise InputError(name)


def _special_F(name: str) -> dict:
    """Non-trivial F-values; every other admissible entry equals 1."""
    if name == 'vecz2w':
        return {('g', 'g', 'g', 'g', '1', '1'): -1.0}
    if name == 'fib':
        phi = (1 + np.sqrt(5)) / 2
        t = 'tau'
        return {(t, t, t, t, '1', '1'): 1 / phi, (t, t, t, t, '1', t): phi ** -0.5,
                (t, t, t, t, t, '1'): phi ** -0.5, (t, t, t, t, t, t): -1 / phi}
    if name == 'ising':
        s, p = 'sigma', 'psi'
        r = 1 / np.sqrt(2)
        return {(s, s, s, s, '1', '1'): r, (s, s, s, s, '1', p): r,
                (s, s, s, s, p, '1'): r, (s, s, s, s, p, p): -r,
                (s, p, s, p, s, s): -1.0, (p, s, p, s, s, s): -1.0}
    return {}


def generate_entry(name: str) -> dict:
    """Assemble the JSON data of a bundled entry and validate it with the checker."""
    data = _ring_data(name)
    data['name'] = name
    ring = FusionRing.from_json_dict(data)
    special = _special_F(name)
    F = []
    L = ring.labels
    N = ring.Nabc
    for a, b, c, d, e, f in itertools.product(L, repeat=6):
        if N(a, b, e) and N(e, c, d) and N(b, c, f) and N(a, f, d):
            val = special.get((a, b, c, d, e, f), 1.0)
            F.append({'a': a, 'b': b, 'c': c, 'd': d, 'e': e, 'f': f,
                      'mu': 0, 'nu': 0, 'rho': 0, 'sigma': 0, 're': float(val), 'im': 0.0})
    data['F'] = F
    skel = Skeleton.from_json_dict(data)
    rep = verify_axioms(skel, dual_functor=True)
    if not rep.ok:
        raise AxiomViolation(f'generated data for {name} fails {rep.failures()}', rep)
    return data


def regenerate(directory: str | None = None):
    directory = directory or str(resources.files('fuscat').joinpath('data'))
    os.makedirs(directory, exist_ok=True)
    for name in CATALOG:
        data = generate_entry(name)
        with open(os.path.join(directory, f'{name}.json'), 'w') as fh:
            json.dump(data, fh, indent=1, ensure_ascii=False)
            fh.write('\n')


if __name__ == '__main__':  # pragma: no cover
    import sys
    if '--regenerate' in sys.argv:
        regenerate()
