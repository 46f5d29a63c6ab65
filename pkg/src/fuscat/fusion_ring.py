"""Combinatorial layer: simple labels, multifusion grading and fusion multiplicities.

A :class:`FusionRing` stores the based ring of a (multi)fusion category: an ordered list
of simple labels, the unit components ``1_1, ..., 1_k``, the corner index ``grade(x) = (i, j)``
of each simple (meaning ``x`` lies in ``C_ij = 1_i C 1_j``), the duality involution and the
multiplicity tensor ``N[a, b, c] = N_{ab}^c``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, NumericalError, PreconditionError

__all__ = [
    'FusionRing', 'Violation', 'ValidationReport', 'DimensionData', 'validate',
    'quantum_dims', 'global_dimension', 'is_indecomposable', 'corners', 'DEFAULT_TOL',
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Violation:
    """A single violated invariant together with the label tuple witnessing it."""
    kind: str
    witness: tuple
    detail: str = ''

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'witness': list(self.witness), 'detail': self.detail}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, witness: tuple, detail: str = ''):
        self.violations.append(Violation(kind, tuple(witness), detail))

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {'ok': self.ok, 'violations': [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class DimensionData:
    """Quantum dimensions ``d`` (label -> float) and the global dimension ``D``.

    ``D`` is ``None`` for decomposable rings, where no common corner value exists.
    """
    d: dict
    D: float | None

    def to_dict(self) -> dict:
        return {'d': dict(self.d), 'D': self.D}


class FusionRing:
    """Based ring of a multifusion category.

    Parameters
    ----------
    labels : sequence of str
        Simple objects, in the canonical order used for all bases.
    unit : sequence of str
        The unit components ``1_i``; the corner index of ``unit[i]`` is ``grade[unit[i]][0]``.
    grade : mapping label -> (i, j)
    dual : mapping label -> label
    fusion : mapping (a, b, c) -> int
        Non-zero multiplicities ``N_{ab}^c``; omitted triples are zero.
    aliases : mapping str -> label, optional
        Alternative spellings accepted by :meth:`label`.
    """

    def __init__(self, labels: Sequence[str], unit: Sequence[str], grade: Mapping, dual: Mapping,
                 fusion: Mapping, name: str | None = None, aliases: Mapping | None = None):
        labels = [str(x) for x in labels]
        if not labels:
            raise InputError('a fusion ring needs at least one label')
        if len(set(labels)) != len(labels):
            raise InputError('duplicate labels')
        self.labels: tuple = tuple(labels)
        self.index = {x: n for n, x in enumerate(labels)}
        self.name = name
        self.aliases = dict(aliases or {})
        unit = [unit] if isinstance(unit, str) else list(unit)
        if not unit:
            raise InputError('the unit must have at least one component')
        for u in unit:
            self._check_label(u, 'unit')
        self.unit: tuple = tuple(unit)
        # grade
        if set(grade) != set(labels):
            missing = set(labels) - set(grade)
            extra = set(grade) - set(labels)
            raise InputError(f'grade must be total on labels (missing {sorted(missing)}, '
                             f'unknown {sorted(extra)})')
        self.grade = {x: (int(grade[x][0]), int(grade[x][1])) for x in labels}
        if set(dual) != set(labels):
            raise InputError('dual must be total on labels')
        for x, y in dual.items():
            self._check_label(y, 'dual')
        self.dual = {x: str(dual[x]) for x in labels}
        n = len(labels)
        self.N = np.zeros((n, n, n), dtype=np.int64)
        for key, mult in fusion.items():
            a, b, c = key
            for lab in key:
                self._check_label(lab, 'fusion')
            mult = int(mult)
            if mult < 0:
                raise InputError(f'negative multiplicity at {key}')
            self.N[self.index[a], self.index[b], self.index[c]] = mult
        self.corner_ids: tuple = tuple(self.grade[u][0] for u in self.unit)
        self._unit_of = {self.grade[u][0]: u for u in self.unit}
        self._outcomes = {}
        for a in labels:
            for b in labels:
                ia, ib = self.index[a], self.index[b]
                self._outcomes[a, b] = tuple(labels[c] for c in np.nonzero(self.N[ia, ib])[0])

    # ------------------------------------------------------------------ access
    def _check_label(self, x, where: str):
        if x not in self.index:
            raise InputError(f'unknown label {x!r} in {where}')

    def label(self, name: str) -> str:
        """Resolve ``name`` (a label, an alias, or ``<label>bar`` for the dual)."""
        if name in self.index:
            return name
        if name in self.aliases:
            return self.aliases[name]
        if name.endswith('bar') and len(name) > 3:
            return self.dual[self.label(name[:-3])]
        raise InputError(f'unknown label {name!r}')

    def Nabc(self, a: str, b: str, c: str) -> int:
        return int(self.N[self.index[a], self.index[b], self.index[c]])

    def outcomes(self, a: str, b: str) -> tuple:
        """Labels ``c`` with ``N_{ab}^c > 0``, in canonical order."""
        return self._outcomes[a, b]

    def left(self, x: str) -> int:
        return self.grade[x][0]

    def right(self, x: str) -> int:
        return self.grade[x][1]

    def unit_of(self, i: int) -> str:
        return self._unit_of[i]

    def is_unit(self, x: str) -> bool:
        return x in self._unit_of.values()

    def corner_labels(self, i: int, j: int) -> list:
        """``Irr(C_ij)`` in canonical order."""
        return [x for x in self.labels if self.grade[x] == (i, j)]

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def multiplicity_free(self) -> bool:
        return int(self.N.max(initial=0)) <= 1

    def __repr__(self):
        return f'FusionRing({self.name or "?"}, labels={list(self.labels)})'

    def __eq__(self, other):
        if not isinstance(other, FusionRing):
            return NotImplemented
        return (self.labels == other.labels and self.unit == other.unit
                and self.grade == other.grade and self.dual == other.dual
                and np.array_equal(self.N, other.N))

    def __hash__(self):
        return hash((self.labels, self.unit))

    # ------------------------------------------------------------------ (de)serialization
    def fusion_dict(self) -> dict:
        out = {}
        for ia, ib, ic in zip(*np.nonzero(self.N)):
            out[self.labels[ia], self.labels[ib], self.labels[ic]] = int(self.N[ia, ib, ic])
        return out

    def to_json_dict(self) -> dict:
        return {
            'labels': list(self.labels),
            'unit': list(self.unit),
            'grade': {x: list(g) for x, g in self.grade.items()},
            'dual': dict(self.dual),
            'fusion': [{'a': a, 'b': b, 'c': c, 'n': n} for (a, b, c), n in self.fusion_dict().items()],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping, name: str | None = None) -> 'FusionRing':
        try:
            labels = [str(x) for x in data['labels']]
            unit = data.get('unit', labels[0])
            grade = data.get('grade')
            if grade is None:
                grade = {x: (1, 1) for x in labels}
            dual = data['dual']
            fusion = {}
            for entry in data['fusion']:
                key = (str(entry['a']), str(entry['b']), str(entry['c']))
                fusion[key] = fusion.get(key, 0) + int(entry.get('n', 1))
        except (KeyError, TypeError, IndexError) as err:
            raise InputError(f'malformed fusion ring JSON: {err!r}') from err
        return cls(labels, unit, grade, dual, fusion, name=name or data.get('name'),
                   aliases=data.get('aliases'))

    @classmethod
    def from_json(cls, text: str) -> 'FusionRing':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError(f'invalid JSON: {err}') from err
        return cls.from_json_dict(data)


# ---------------------------------------------------------------------- validation

def validate(ring: FusionRing) -> ValidationReport:
    """Check grading, associativity, unit and duality axioms exhaustively.

    Returns a report listing every violation with its witnessing label tuple;
    the report is empty iff all axioms hold.
    """
    rep = ValidationReport()
    L = ring.labels
    N = ring.N
    idx = ring.index
    # unit components sit in diagonal corners, one per corner
    seen = set()
    for u in ring.unit:
        i, j = ring.grade[u]
        if i != j:
            rep.add('unit-grade', (u,), 'unit component must lie in a diagonal corner')
        if i in seen:
            rep.add('unit-grade', (u,), 'two unit components in the same corner')
        seen.add(i)
    for x in L:
        i, j = ring.grade[x]
        if i not in seen or j not in seen:
            rep.add('grade', (x,), f'grade {(i, j)} refers to a corner without unit component')
    # grading of N
    for ia, ib, ic in zip(*np.nonzero(N)):
        a, b, c = L[ia], L[ib], L[ic]
        ga, gb, gc = ring.grade[a], ring.grade[b], ring.grade[c]
        if not (ga[1] == gb[0] and gc == (ga[0], gb[1])):
            rep.add('grading', (a, b, c), f'N_{{{a}{b}}}^{{{c}}} != 0 with grades {ga},{gb},{gc}')
    # duality
    for x in L:
        xb = ring.dual[x]
        if ring.dual[xb] != x:
            rep.add('duality', (x,), 'dual is not an involution')
        if ring.grade[xb] != ring.grade[x][::-1]:
            rep.add('duality', (x,), 'grade of dual is not reversed')
    # unit
    for u in ring.unit:
        iu = idx[u]
        i = ring.grade[u][0]
        for a in L:
            ia = idx[a]
            for c in L:
                ic = idx[c]
                expect_l = int(a == c and ring.grade[a][0] == i)
                expect_r = int(a == c and ring.grade[a][1] == i)
                if N[iu, ia, ic] != expect_l:
                    rep.add('unit', (u, a, c), 'left unit law')
                if N[ia, iu, ic] != expect_r:
                    rep.add('unit', (a, u, c), 'right unit law')
    # duality multiplicities N_{ab}^{1_i} = delta_{b, abar} [grade(a) starts at i]
    for u in ring.unit:
        iu = idx[u]
        i = ring.grade[u][0]
        for a in L:
            for b in L:
                expect = int(b == ring.dual[a] and ring.grade[a][0] == i)
                if N[idx[a], idx[b], iu] != expect:
                    rep.add('duality', (a, b, u), f'N_{{{a}{b}}}^{{{u}}} should be {expect}')
    # associativity: sum_e N_ab^e N_ec^d == sum_f N_bc^f N_af^d
    lhs = np.einsum('abe,ecd->abcd', N, N)
    rhs = np.einsum('bcf,afd->abcd', N, N)
    for ia, ib, ic, id_ in zip(*np.nonzero(lhs != rhs)):
        w = (L[ia], L[ib], L[ic], L[id_])
        rep.add('associativity', w, f'{lhs[ia, ib, ic, id_]} != {rhs[ia, ib, ic, id_]}')
    return rep


# ---------------------------------------------------------------------- dimensions

def _perron_frobenius(M: np.ndarray, max_iter: int = 100000, tol: float = 1e-15) -> np.ndarray:
    """Positive eigenvector of the non-negative irreducible symmetric matrix ``M``.

    Power iteration on ``M + 1`` (the shift makes the iteration aperiodic).
    """
    n = M.shape[0]
    A = M + np.eye(n)
    v = np.ones(n) / np.sqrt(n)
    for _ in range(max_iter):
        w = A @ v
        w /= np.linalg.norm(w)
        if np.max(np.abs(w - v)) < tol:
            return w
        v = w
    raise NumericalError('power iteration for quantum dimensions did not converge')


def quantum_dims(ring: FusionRing) -> DimensionData:
    """Perron-Frobenius dimensions, normalised so that ``d_{1_i} = 1``.

    Each diagonal corner ``C_ii`` is a fusion ring; its dimensions are the PF eigenvector
    of the symmetrised total fusion matrix. An off-diagonal simple ``x in C_ij`` then has
    ``d_x^2 = sum_c N_{x xbar}^c d_c`` with ``c in C_ii``.
    """
    idx = ring.index
    d = {}
    for i in ring.corner_ids:
        labs = ring.corner_labels(i, i)
        sub = [idx[x] for x in labs]
        Nsub = ring.N[np.ix_(sub, sub, sub)].astype(float)
        M = Nsub.sum(axis=0)
        M = 0.5 * (M + M.T)
        v = _perron_frobenius(M)
        v = v / v[labs.index(ring.unit_of(i))]
        for x, val in zip(labs, v):
            d[x] = float(val)
    for x in ring.labels:
        if x in d:
            continue
        i = ring.left(x)
        xb = ring.dual[x]
        sq = sum(ring.Nabc(x, xb, c) * d[c] for c in ring.corner_labels(i, i))
        d[x] = float(np.sqrt(sq))
    d = {x: 0.5 * (d[x] + d[ring.dual[x]]) for x in ring.labels}
    D = None
    if is_indecomposable(ring):
        i = ring.corner_ids[0]
        D = float(sum(d[x] ** 2 for x in ring.corner_labels(i, i)))
    return DimensionData(d, D)


def is_indecomposable(ring: FusionRing) -> bool:
    """True iff every corner ``C_ij`` is non-empty."""
    return all(ring.corner_labels(i, j) for i in ring.corner_ids for j in ring.corner_ids)


def global_dimension(ring: FusionRing, i: int | None = None, j: int | None = None,
                     tol: float = DEFAULT_TOL, dims: DimensionData | None = None) -> float:
    """``sum_{x in Irr(C_ij)} d_x^2``, asserting that it is the same for all corners."""
    for a in ring.corner_ids:
        for b in ring.corner_ids:
            if not ring.corner_labels(a, b):
                raise PreconditionError(f'ring is decomposable: corner C_{a}{b} is empty')
    if dims is None:
        dims = quantum_dims(ring)
    sums = {}
    for a in ring.corner_ids:
        for b in ring.corner_ids:
            sums[a, b] = sum(dims.d[x] ** 2 for x in ring.corner_labels(a, b))
    ref = next(iter(sums.values()))
    for key, val in sums.items():
        if abs(val - ref) > tol * max(1.0, ref):
            raise NumericalError(f'corner sums disagree: C_{key} gives {val}, expected {ref}')
    if i is None:
        i = ring.corner_ids[0]
    if j is None:
        j = i
    return float(sums[i, j])


def corners(ring: FusionRing) -> list:
    """The diagonal corners ``C_ii`` as fusion rings with simple unit ``1_i``."""
    out = []
    for i in ring.corner_ids:
        labs = ring.corner_labels(i, i)
        fusion = {(a, b, c): ring.Nabc(a, b, c)
                  for a, b, c in itertools.product(labs, repeat=3) if ring.Nabc(a, b, c)}
        out.append(FusionRing(labs, [ring.unit_of(i)], {x: (i, i) for x in labs},
                              {x: ring.dual[x] for x in labs}, fusion,
                              name=f'{ring.name}[{i}]' if ring.name else None))
    return out


def direct_sum_rings(r1: FusionRing, r2: FusionRing, tags: tuple = ('A', 'B')) -> FusionRing:
    """Decomposable ring ``r1 + r2`` (labels are prefixed to keep them distinct)."""
    shift = max(r1.corner_ids) - min(r2.corner_ids) + 1
    labels, grade, dual, fusion = [], {}, {}, {}
    unit = []
    for tag, r, sh in ((tags[0], r1, 0), (tags[1], r2, shift)):
        ren = {x: f'{tag}{x}' for x in r.labels}
        labels += [ren[x] for x in r.labels]
        unit += [ren[u] for u in r.unit]
        for x in r.labels:
            grade[ren[x]] = (r.grade[x][0] + sh, r.grade[x][1] + sh)
            dual[ren[x]] = ren[r.dual[x]]
        for (a, b, c), n in r.fusion_dict().items():
            fusion[ren[a], ren[b], ren[c]] = n
    return FusionRing(labels, unit, grade, dual, fusion)
