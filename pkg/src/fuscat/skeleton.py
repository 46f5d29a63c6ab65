"""Skeletal unitary multifusion categories: F-symbols, fusion-tree bases and morphisms.

Conventions
-----------
An object is a multiplicity vector over simples (:class:`Obj`). A *word* is a tuple of
objects, read as their tensor product with all parentheses to the left. For a word
``w`` and a simple ``t`` the space ``Hom(t, w)`` has the orthonormal basis of
left-associated splitting trees

    ``(V^{l1 l2}_{c2} (x) id ...)  V^{c_{n-1} ln}_{t}``,

built from isometric trivalent vertices. Each leaf is a pair ``(label, copy)`` picking a
summand of the corresponding letter. A :class:`Morphism` ``w1 -> w2`` is block diagonal in
the total charge ``t``; the block has shape ``(#trees(w2, t), #trees(w1, t))``.

The F-symbols relate the two bracketings of three strands::

    alpha( (V^{ab}_{e,mu} (x) id_c) V^{ec}_{d,nu} )
        = sum_{f,rho,sigma} F[a,b,c,d,e,f][mu,nu,rho,sigma] (id_a (x) V^{bc}_{f,rho}) V^{af}_{d,sigma}

and are stored as arrays of shape ``(N_ab^e, N_ec^d, N_bc^f, N_af^d)``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import InputError, NumericalError
from .fusion_ring import DEFAULT_TOL, FusionRing, quantum_dims

__all__ = [
    'Obj', 'Skeleton', 'Morphism', 'DualFunctorData', 'AxiomReport', 'build_dual_functor',
    'verify_axioms', 'verify_dual_functor', 'hom_dim', 'hom_basis', 'compose', 'tensor',
    'dagger', 'conjugate_morphism',
]


class Obj:
    """Finite direct sum of simples, stored as ``((label, multiplicity), ...)``.

    The summand order is the canonical label order of the ring; copies of a simple are
    numbered ``0 .. m-1``. A simple label ``x`` is the object ``Obj(((x, 1),))``.
    """
    __slots__ = ('items', '_hash')

    def __init__(self, items: Iterable):
        self.items = tuple((str(x), int(m)) for x, m in items if int(m) > 0)
        self._hash = hash(self.items)

    @classmethod
    def simple(cls, label: str) -> 'Obj':
        return cls(((label, 1),))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, Obj) and self.items == other.items

    def __repr__(self):
        if self.is_simple:
            return self.items[0][0]
        if not self.items:
            return '0'
        return '+'.join(x if m == 1 else f'{m}*{x}' for x, m in self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def mult(self, label: str) -> int:
        for x, m in self.items:
            if x == label:
                return m
        return 0

    def as_dict(self) -> dict:
        return dict(self.items)

    @property
    def is_simple(self) -> bool:
        return len(self.items) == 1 and self.items[0][1] == 1

    @property
    def labels(self) -> tuple:
        return tuple(x for x, _ in self.items)


Tree = tuple  # (leaves, charges, mults); leaves = ((label, copy), ...)
Word = tuple  # tuple of Obj


@dataclass
class DualFunctorData:
    """Coefficients of ``ev_x : xbar x -> 1`` and ``coev_x : 1 -> x xbar`` per simple ``x``.

    Both hom spaces are one dimensional and spanned by the single splitting vertex, so a
    dual functor on a skeleton is determined by two complex numbers per simple.
    """
    ev: dict
    coev: dict
    name: str = 'balanced'

    def rescaled(self, factors: Mapping, name: str = 'rescaled') -> 'DualFunctorData':
        """``coev_x -> lam_x coev_x`` and ``ev_x -> ev_x / lam_x`` (zig-zags are preserved)."""
        ev = {x: self.ev[x] / factors.get(x, 1.0) for x in self.ev}
        coev = {x: self.coev[x] * factors.get(x, 1.0) for x in self.coev}
        return DualFunctorData(ev, coev, name)


@dataclass
class AxiomReport:
    """Max residuals of the axiom families; ``witness`` holds the worst label tuple."""
    residuals: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    tol: float = DEFAULT_TOL

    def record(self, kind: str, value: float, witness=None):
        if kind not in self.residuals or value > self.residuals[kind]:
            self.residuals[kind] = float(value)
            self.witness[kind] = witness
        return self

    @property
    def ok(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    def failures(self) -> list:
        return [k for k, v in self.residuals.items() if not v < self.tol]

    def to_dict(self) -> dict:
        return {
            'ok': self.ok,
            'tol': self.tol,
            'residuals': dict(self.residuals),
            'witness': {k: (list(w) if isinstance(w, tuple) else w) for k, w in self.witness.items()},
        }


class Skeleton:
    """A :class:`FusionRing` together with F-symbols and a unitary dual functor.

    Parameters
    ----------
    ring : FusionRing
    F : mapping ``(a, b, c, d, e, f) -> array`` of shape ``(N_ab^e, N_ec^d, N_bc^f, N_af^d)``.
        Admissible entries that are omitted are zero.
    """

    def __init__(self, ring: FusionRing, F: Mapping, name: str | None = None,
                 tol: float = DEFAULT_TOL):
        self.ring = ring
        self.name = name or ring.name
        self.tol = tol
        self.F = {}
        for key, arr in F.items():
            arr = np.asarray(arr, dtype=complex)
            a, b, c, d, e, f = key
            shape = self._fshape(a, b, c, d, e, f)
            if arr.ndim == 0:
                arr = arr.reshape((1, 1, 1, 1))
            if arr.shape != shape:
                raise InputError(f'F{key} has shape {arr.shape}, expected {shape}')
            self.F[tuple(key)] = arr
        self.dims = quantum_dims(ring)
        self.d = self.dims.d
        self._dual = None
        self._partial_cache = {}
        self._index_cache = {}
        self._pair_cache = {}
        self._attach_cache = {}

    # ------------------------------------------------------------------ basic data
    def _fshape(self, a, b, c, d, e, f) -> tuple:
        N = self.ring.Nabc
        return (N(a, b, e), N(e, c, d), N(b, c, f), N(a, f, d))

    def Farr(self, a, b, c, d, e, f) -> np.ndarray:
        """F-symbol block; zeros if omitted (shape may contain zeros if inadmissible)."""
        arr = self.F.get((a, b, c, d, e, f))
        if arr is None:
            return np.zeros(self._fshape(a, b, c, d, e, f), dtype=complex)
        return arr

    def F_matrix(self, a, b, c, d):
        """The associator ``(ab)c -> a(bc)`` on ``Hom(d, abc)`` as a matrix.

        Returns ``(rows, cols, M)`` with rows ``(e, mu, nu)`` and columns ``(f, rho, sigma)``.
        """
        ring = self.ring
        rows = [(e, mu, nu) for e in ring.outcomes(a, b) for mu in range(ring.Nabc(a, b, e))
                for nu in range(ring.Nabc(e, c, d))]
        cols = [(f, rho, sig) for f in ring.outcomes(b, c) for rho in range(ring.Nabc(b, c, f))
                for sig in range(ring.Nabc(a, f, d))]
        M = np.zeros((len(rows), len(cols)), dtype=complex)
        for r, (e, mu, nu) in enumerate(rows):
            for s, (f, rho, sig) in enumerate(cols):
                M[r, s] = self.Farr(a, b, c, d, e, f)[mu, nu, rho, sig]
        return rows, cols, M

    @property
    def labels(self) -> tuple:
        return self.ring.labels

    @property
    def D(self) -> float | None:
        return self.dims.D

    @property
    def dual(self) -> 'DualFunctorData':
        if self._dual is None:
            self._dual = build_dual_functor(self)
        return self._dual

    def __repr__(self):
        return f'Skeleton({self.name or "?"}, labels={list(self.ring.labels)})'

    # ------------------------------------------------------------------ objects and words
    def obj(self, spec) -> Obj:
        """Build an :class:`Obj` from a label, an ``Obj`` or a mapping label -> multiplicity."""
        if isinstance(spec, Obj):
            return spec
        if isinstance(spec, str):
            return Obj.simple(self.ring.label(spec))
        if isinstance(spec, Mapping):
            resolved = {}
            for x, m in spec.items():
                x = self.ring.label(x)
                resolved[x] = resolved.get(x, 0) + int(m)
            return Obj((x, resolved[x]) for x in self.ring.labels if x in resolved)
        raise InputError(f'cannot interpret {spec!r} as an object')

    def word(self, spec) -> Word:
        """Normalise a word given as a sequence of labels/objects (or a single label)."""
        if isinstance(spec, tuple) and all(isinstance(s, Obj) for s in spec):
            w = spec
        else:
            if isinstance(spec, (str, Obj, Mapping)):
                spec = [spec]
            w = tuple(self.obj(s) for s in spec)
        self.check_word(w)
        return w

    def dual_obj(self, a: Obj) -> Obj:
        dual = self.ring.dual
        m = dict(a.items)
        return Obj((y, m[dual[y]]) for y in self.ring.labels if dual[y] in m)

    def dual_word(self, w: Word) -> Word:
        return tuple(self.dual_obj(a) for a in reversed(w))

    def direct_sum(self, *objs: Obj) -> Obj:
        total = {}
        for a in objs:
            for x, m in a.items:
                total[x] = total.get(x, 0) + m
        return Obj((x, total[x]) for x in self.ring.labels if x in total)

    def check_word(self, w: Word):
        """Raise :class:`InputError` if consecutive simple letters are not composable."""
        for a, b in zip(w[:-1], w[1:]):
            if a.is_simple and b.is_simple:
                x, y = a.items[0][0], b.items[0][0]
                if self.ring.right(x) != self.ring.left(y):
                    raise InputError(f'word {list(w)} is not composable at ({x}, {y})')

    # ------------------------------------------------------------------ fusion trees
    def _partials(self, w: Word) -> dict:
        """Map charge -> list of left-associated trees of ``w`` (canonical order)."""
        if not isinstance(w, tuple):
            w = self.word(w)
        res = self._partial_cache.get(w)
        if res is not None:
            return res
        ring = self.ring
        raw = {}
        if len(w) == 0:
            raw = {u: [((), (), ())] for u in ring.unit}
        elif len(w) == 1:
            for x, m in w[0].items:
                raw[x] = [(((x, k),), (), ()) for k in range(m)]
        else:
            prev = self._partials(w[:-1])
            for t, trees in prev.items():
                for tree in trees:
                    for x, m in w[-1].items:
                        outs = ring.outcomes(t, x)
                        if not outs:
                            continue
                        for k in range(m):
                            for c in outs:
                                for mu in range(ring.Nabc(t, x, c)):
                                    raw.setdefault(c, []).append(
                                        (tree[0] + ((x, k),), tree[1] + (c,), tree[2] + (mu,)))
        res = {t: raw[t] for t in ring.labels if t in raw}
        self._partial_cache[w] = res
        return res

    def trees(self, w: Word, t: str) -> list:
        return self._partials(w).get(t, [])

    def tree_index(self, w: Word, t: str) -> dict:
        w = self.word(w)
        key = (w, t)
        res = self._index_cache.get(key)
        if res is None:
            res = {tree: n for n, tree in enumerate(self.trees(w, t))}
            self._index_cache[key] = res
        return res

    def charges(self, w: Word) -> list:
        return list(self._partials(w))

    def multiplicities(self, w: Word) -> dict:
        """Decomposition of the word into simples: charge -> number of trees."""
        return {t: len(v) for t, v in self._partials(w).items()}

    def flatten(self, w: Word) -> Obj:
        """The object ``sum_t t^{n_t(w)}`` isomorphic to the word via its tree basis."""
        return Obj((t, n) for t, n in self.multiplicities(w).items())

    def hom_dim(self, w1, w2) -> int:
        w1, w2 = self.word(w1), self.word(w2)
        self.check_word(w1)
        self.check_word(w2)
        m1, m2 = self.multiplicities(w1), self.multiplicities(w2)
        return sum(n * m2.get(t, 0) for t, n in m1.items())

    def hom_basis(self, w1, w2) -> list:
        """Ordered basis ``(t, target_tree, source_tree)`` of ``Hom(w1, w2)``."""
        w1, w2 = self.word(w1), self.word(w2)
        self.check_word(w1)
        self.check_word(w2)
        out = []
        for t in self.ring.labels:
            for T2 in self.trees(w2, t):
                for T1 in self.trees(w1, t):
                    out.append((t, T2, T1))
        return out

    # ------------------------------------------------------------------ recoupling
    def _attach(self, s: str, t2: Tree, s2: str, kap: int, u: str) -> list:
        """Expand ``(id_s (x) T2) V^{s s2}_{u,kap}`` in left trees of ``(s, leaves(T2))``.

        Returns a list of ``(coefficient, charges, mults)`` for the vertices after the
        first leaf ``s``.
        """
        key = (s, t2, s2, kap, u)
        res = self._attach_cache.get(key)
        if res is not None:
            return res
        leaves, chs, mls = t2
        m = len(leaves)
        if m == 1:
            res = [(1.0, (u,), (kap,))]
        else:
            ring = self.ring
            last = leaves[-1][0]
            tp = chs[-2] if m >= 3 else leaves[0][0]
            nu = mls[-1]
            sub = (leaves[:-1], chs[:-1], mls[:-1])
            res = []
            for e in ring.outcomes(s, tp):
                n2 = ring.Nabc(e, last, u)
                if n2 == 0:
                    continue
                Fa = self.F.get((s, tp, last, u, e, s2))
                if Fa is None:
                    continue
                for mu1 in range(ring.Nabc(s, tp, e)):
                    inner = None
                    for mu2 in range(n2):
                        coef = np.conj(Fa[mu1, mu2, nu, kap])
                        if coef == 0:
                            continue
                        if inner is None:
                            inner = self._attach(s, sub, tp, mu1, e)
                        for c2, ch, ml in inner:
                            res.append((coef * c2, ch + (u,), ml + (mu2,)))
        self._attach_cache[key] = res
        return res

    def pair_matrix(self, w1: Word, w2: Word, u: str):
        """Unitary from the pair basis ``{(T1 (x) T2) V^{s s2}_{u,kap}}`` to left trees of ``w1 w2``.

        Returns ``(C, slices)``; ``slices[(s, s2, kap)] = (offset, n1, n2)`` locates the
        columns ``offset + i1 * n2 + i2`` of the pair ``(trees(w1,s)[i1], trees(w2,s2)[i2])``.
        """
        key = (w1, w2, u)
        res = self._pair_cache.get(key)
        if res is not None:
            return res
        ring = self.ring
        index = self.tree_index(w1 + w2, u)
        n = len(index)
        P1, P2 = self._partials(w1), self._partials(w2)
        blocks, slices = [], {}
        off = 0
        for s, trees1 in P1.items():
            for s2, trees2 in P2.items():
                for kap in range(ring.Nabc(s, s2, u)):
                    n1, n2 = len(trees1), len(trees2)
                    block = np.zeros((n, n1 * n2), dtype=complex)
                    for i2, T2 in enumerate(trees2):
                        if len(w1) == 0:
                            block[index[T2], i2] = 1.0
                            continue
                        if len(w2) == 0:
                            for i1, T1 in enumerate(trees1):
                                block[index[T1], i1 * n2 + i2] = 1.0
                            continue
                        expansion = self._attach(s, T2, s2, kap, u)
                        for i1, T1 in enumerate(trees1):
                            for coef, ch, ml in expansion:
                                tree = (T1[0] + T2[0], T1[1] + ch, T1[2] + ml)
                                block[index[tree], i1 * n2 + i2] += coef
                    slices[s, s2, kap] = (off, n1, n2)
                    off += n1 * n2
                    blocks.append(block)
        C = np.hstack(blocks) if blocks else np.zeros((n, 0), dtype=complex)
        res = (C, slices)
        self._pair_cache[key] = res
        return res

    # ------------------------------------------------------------------ morphism constructors
    def zero(self, source, target) -> 'Morphism':
        return Morphism(self, self.word(source), self.word(target))

    def identity(self, w) -> 'Morphism':
        w = self.word(w)
        blocks = {t: np.eye(n, dtype=complex) for t, n in self.multiplicities(w).items()}
        return Morphism(self, w, w, blocks)

    def from_function(self, source, target, fn) -> 'Morphism':
        """Morphism whose matrix entries are ``fn(t, target_tree, source_tree)``."""
        f = self.zero(source, target)
        for t, M in f.blocks.items():
            for r, T2 in enumerate(self.trees(f.target, t)):
                for c, T1 in enumerate(self.trees(f.source, t)):
                    M[r, c] = fn(t, T2, T1)
        return f

    def random(self, source, target, rng=None, hermitian: bool = False) -> 'Morphism':
        rng = np.random.default_rng(rng)
        f = self.zero(source, target)
        for t, M in f.blocks.items():
            M[...] = rng.normal(size=M.shape) + 1j * rng.normal(size=M.shape)
        if hermitian:
            f = 0.5 * (f + f.dag())
        return f

    def vertex(self, a: str, b: str, c: str, mu: int = 0) -> 'Morphism':
        """The isometric splitting vertex ``V^{ab}_{c,mu} : c -> a b``."""
        w = self.word([a, b])
        tree = (((a, 0), (b, 0)), (c,), (mu,))

        def fn(t, T2, T1):
            return 1.0 if (t == c and T2 == tree) else 0.0

        return self.from_function([c], w, fn)

    def ev(self, a, dual: DualFunctorData | None = None) -> 'Morphism':
        """``ev_a : abar (x) a -> 1`` for an object or a word ``a``."""
        dual = dual or self.dual
        w = self.word(a)
        if len(w) != 1:
            return self._ev_word(w, dual)
        a = w[0]
        src = (self.dual_obj(a), a)
        ring = self.ring

        def fn(t, T2, T1):
            (l1, k1), (l2, k2) = T1[0]
            if k1 == k2 and ring.dual[l2] == l1:
                return dual.ev[l2]
            return 0.0

        return self.from_function(src, (), fn)

    def coev(self, a, dual: DualFunctorData | None = None) -> 'Morphism':
        """``coev_a : 1 -> a (x) abar`` for an object or a word ``a``."""
        dual = dual or self.dual
        w = self.word(a)
        if len(w) != 1:
            return self._coev_word(w, dual)
        a = w[0]
        tgt = (a, self.dual_obj(a))
        ring = self.ring

        def fn(t, T2, T1):
            (l1, k1), (l2, k2) = T2[0]
            if k1 == k2 and ring.dual[l1] == l2:
                return dual.coev[l1]
            return 0.0

        return self.from_function((), tgt, fn)

    def _ev_word(self, w: Word, dual) -> 'Morphism':
        if len(w) == 0:
            return self.identity(())
        inner = self._ev_word(w[:-1], dual)
        last = w[-1:]
        lb = self.dual_word(last)
        return self.ev(last, dual) @ tensor(tensor(self.identity(lb), inner), self.identity(last))

    def _coev_word(self, w: Word, dual) -> 'Morphism':
        if len(w) == 0:
            return self.identity(())
        first = w[:1]
        inner = self._coev_word(w[1:], dual)
        return tensor(tensor(self.identity(first), inner),
                      self.identity(self.dual_word(first))) @ self.coev(first, dual)

    def pivotal(self, w, dual: DualFunctorData | None = None) -> 'Morphism':
        """``phi_w = (id (x) ev_w)(ev_wbar^* (x) id) : w -> wbarbar = w``."""
        w = self.word(w)
        wb = self.dual_word(w)
        ev_wb = self.ev(wb, dual)
        ev_w = self.ev(w, dual)
        return tensor(self.identity(w), ev_w) @ tensor(ev_wb.dag(), self.identity(w))

    def conjugate(self, f: 'Morphism', dual: DualFunctorData | None = None,
                  check: bool = True) -> 'Morphism':
        """``fbar : w1bar -> w2bar`` by bending ``f^*`` with ev/coev (antilinear in ``f``)."""
        w1, w2 = f.source, f.target
        w1b, w2b = self.dual_word(w1), self.dual_word(w2)
        fs = f.dag()
        first = (tensor(self.identity(w2b), self.coev(w1, dual).dag())
                 @ tensor(tensor(self.identity(w2b), fs), self.identity(w1b))
                 @ tensor(self.ev(w2, dual).dag(), self.identity(w1b)))
        if check:
            second = (tensor(self.ev(w1, dual), self.identity(w2b))
                      @ tensor(tensor(self.identity(w1b), fs), self.identity(w2b))
                      @ tensor(self.identity(w1b), self.coev(w2, dual)))
            err = (first - second).max_abs()
            if err > self.tol * (1.0 + f.max_abs()) * 10:
                raise NumericalError(f'the two bendings of fbar disagree by {err:.3e}')
        return first

    # ------------------------------------------------------------------ sub-categories
    def corner(self, i: int) -> 'Skeleton':
        """The fusion category ``C_ii`` with F-symbols restricted."""
        from .fusion_ring import corners
        sub = [r for r in corners(self.ring) if r.unit == (self.ring.unit_of(i),)][0]
        labs = set(sub.labels)
        F = {k: v for k, v in self.F.items() if set(k) <= labs}
        return Skeleton(sub, F, name=sub.name, tol=self.tol)

    # ------------------------------------------------------------------ serialisation
    def to_json_dict(self) -> dict:
        out = self.ring.to_json_dict()
        if self.name:
            out['name'] = self.name
        if self.ring.aliases:
            out['aliases'] = dict(self.ring.aliases)
        entries = []
        for (a, b, c, d, e, f), arr in self.F.items():
            for idx in itertools.product(*(range(s) for s in arr.shape)):
                z = complex(arr[idx])
                if z == 0:
                    continue
                entries.append({'a': a, 'b': b, 'c': c, 'd': d, 'e': e, 'f': f,
                                'mu': idx[0], 'nu': idx[1], 'rho': idx[2], 'sigma': idx[3],
                                're': z.real, 'im': z.imag})
        out['F'] = entries
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping, name: str | None = None,
                       tol: float = DEFAULT_TOL) -> 'Skeleton':
        ring = FusionRing.from_json_dict(data, name=name)
        if 'F' not in data:
            raise InputError('no F-symbols ("F") in input')
        F = {}
        try:
            for ent in data['F']:
                key = tuple(str(ent[k]) for k in 'abcdef')
                for lab in key:
                    if lab not in ring.index:
                        raise InputError(f'unknown label {lab!r} in F')
                if key not in F:
                    a, b, c, d, e, f = key
                    N = ring.Nabc
                    F[key] = np.zeros((N(a, b, e), N(e, c, d), N(b, c, f), N(a, f, d)), dtype=complex)
                idx = tuple(int(ent.get(k, 0)) for k in ('mu', 'nu', 'rho', 'sigma'))
                try:
                    F[key][idx] = complex(float(ent.get('re', 0.0)), float(ent.get('im', 0.0)))
                except IndexError as err:
                    raise InputError(f'F entry {key}{idx} is not admissible') from err
        except (KeyError, TypeError, ValueError) as err:
            if isinstance(err, InputError):
                raise
            raise InputError(f'malformed F entry: {err!r}') from err
        return cls(ring, F, name=name or data.get('name'), tol=tol)

    @classmethod
    def from_json(cls, text: str, **kw) -> 'Skeleton':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError(f'invalid JSON: {err}') from err
        return cls.from_json_dict(data, **kw)


class Morphism:
    """A morphism between words: one complex matrix per total charge.

    ``g @ f`` is the composite ``g o f``; ``f.dag()`` the adjoint; ``tensor(f, g)`` the
    tensor product. Matrices are indexed ``[target_tree, source_tree]``.
    """
    __slots__ = ('skel', 'source', 'target', 'blocks')

    def __init__(self, skel: Skeleton, source: Word, target: Word, blocks: Mapping | None = None):
        self.skel = skel
        self.source = tuple(source)
        self.target = tuple(target)
        ms = skel.multiplicities(self.source)
        mt = skel.multiplicities(self.target)
        self.blocks = {}
        for t in skel.ring.labels:
            if t in ms and t in mt:
                shape = (mt[t], ms[t])
                if blocks is not None and t in blocks:
                    M = np.asarray(blocks[t], dtype=complex)
                    if M.shape != shape:
                        raise InputError(f'block {t} has shape {M.shape}, expected {shape}')
                    self.blocks[t] = M
                else:
                    self.blocks[t] = np.zeros(shape, dtype=complex)

    # ---------------------------------------------------------------- algebra
    def __matmul__(self, other: 'Morphism') -> 'Morphism':
        return compose(self, other)

    def dag(self) -> 'Morphism':
        return Morphism(self.skel, self.target, self.source,
                        {t: M.conj().T for t, M in self.blocks.items()})

    def _check_same(self, other):
        if self.source != other.source or self.target != other.target:
            raise InputError(f'cannot add morphisms {self.signature()} and {other.signature()}')

    def __add__(self, other: 'Morphism') -> 'Morphism':
        self._check_same(other)
        return Morphism(self.skel, self.source, self.target,
                        {t: M + other.blocks[t] for t, M in self.blocks.items()})

    def __sub__(self, other: 'Morphism') -> 'Morphism':
        self._check_same(other)
        return Morphism(self.skel, self.source, self.target,
                        {t: M - other.blocks[t] for t, M in self.blocks.items()})

    def __neg__(self) -> 'Morphism':
        return (-1.0) * self

    def __mul__(self, scalar) -> 'Morphism':
        return Morphism(self.skel, self.source, self.target,
                        {t: scalar * M for t, M in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> 'Morphism':
        return self * (1.0 / scalar)

    def copy(self) -> 'Morphism':
        return Morphism(self.skel, self.source, self.target,
                        {t: M.copy() for t, M in self.blocks.items()})

    # ---------------------------------------------------------------- inspection
    def signature(self) -> str:
        return f'{list(self.source)} -> {list(self.target)}'

    def __repr__(self):
        return f'Morphism({self.signature()}, dim={self.dim})'

    @property
    def dim(self) -> int:
        return sum(M.size for M in self.blocks.values())

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(M))) for M in self.blocks.values() if M.size), default=0.0)

    def dist(self, other: 'Morphism') -> float:
        return (self - other).max_abs()

    def allclose(self, other: 'Morphism', tol: float | None = None) -> bool:
        tol = self.skel.tol if tol is None else tol
        return self.dist(other) < tol

    def to_matrix(self) -> np.ndarray:
        """Dense block-diagonal matrix (charges in canonical label order)."""
        ms = self.skel.multiplicities(self.source)
        mt = self.skel.multiplicities(self.target)
        rows, cols = sum(mt.values()), sum(ms.values())
        out = np.zeros((rows, cols), dtype=complex)
        r = c = 0
        for t in self.skel.ring.labels:
            nr, nc = mt.get(t, 0), ms.get(t, 0)
            if t in self.blocks:
                out[r:r + nr, c:c + nc] = self.blocks[t]
            r += nr
            c += nc
        return out

    def vector(self) -> np.ndarray:
        """All entries concatenated in charge order (a coordinate vector of the hom space)."""
        return np.concatenate([M.ravel() for M in self.blocks.values()]) if self.blocks \
            else np.zeros(0, dtype=complex)

    @classmethod
    def from_vector(cls, skel, source, target, vec) -> 'Morphism':
        f = skel.zero(source, target)
        off = 0
        for t, M in f.blocks.items():
            M[...] = np.asarray(vec[off:off + M.size]).reshape(M.shape)
            off += M.size
        return f

    def scalars(self) -> dict:
        """For an endomorphism of the empty word: unit component -> scalar."""
        if self.source != () or self.target != ():
            raise InputError('scalars() needs an endomorphism of the unit')
        return {u: complex(M[0, 0]) for u, M in self.blocks.items()}

    def trace(self) -> complex:
        return complex(sum(np.trace(M) for M in self.blocks.values()))

    def to_json_dict(self) -> dict:
        mat = self.to_matrix()
        return {
            'source': [repr(a) for a in self.source],
            'target': [repr(a) for a in self.target],
            'rows': [[[float(z.real), float(z.imag)] for z in row] for row in mat],
        }


# ---------------------------------------------------------------------- free functions

def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g o f``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise InputError(f'cannot compose: target {list(f.target)} != source {list(g.source)}')
    blocks = {}
    for t, M in f.blocks.items():
        if t in g.blocks:
            blocks[t] = g.blocks[t] @ M
    return Morphism(f.skel, f.source, g.target, blocks)


def dagger(f: Morphism) -> Morphism:
    return f.dag()


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Tensor product ``f (x) g : f.source g.source -> f.target g.target``."""
    skel = f.skel
    src = f.source + g.source
    tgt = f.target + g.target
    skel.check_word(src)
    skel.check_word(tgt)
    out = Morphism(skel, src, tgt)
    if not out.blocks:
        return out
    fb, gb = f.blocks, g.blocks
    for u, M in out.blocks.items():
        Cin, sin = skel.pair_matrix(f.source, g.source, u)
        Cout, sout = skel.pair_matrix(f.target, g.target, u)
        for key, (oi, n1i, n2i) in sin.items():
            so = sout.get(key)
            if so is None:
                continue
            s, s2, _ = key
            A, B = fb.get(s), gb.get(s2)
            if A is None or B is None:
                continue
            oo, n1o, n2o = so
            M += Cout[:, oo:oo + n1o * n2o] @ np.kron(A, B) @ Cin[:, oi:oi + n1i * n2i].conj().T
    return out


def hom_dim(skel: Skeleton, w1, w2) -> int:
    return skel.hom_dim(w1, w2)


def hom_basis(skel: Skeleton, w1, w2) -> list:
    return skel.hom_basis(w1, w2)


def conjugate_morphism(f: Morphism, dual: DualFunctorData | None = None) -> Morphism:
    return f.skel.conjugate(f, dual)


# ---------------------------------------------------------------------- dual functor

def build_dual_functor(skel: Skeleton, check: bool = True) -> DualFunctorData:
    """Balanced dual functor in the gauge ``coev_x = sqrt(d_x) V^{x xbar}_{1_i}``.

    ``ev_x`` is fixed by the first zig-zag identity; the other zig-zag, balancing and
    sphericality are then verified (a failure signals inconsistent F-data).
    """
    ring = skel.ring
    ev, coev = {}, {}
    for x in ring.labels:
        ui, uj = ring.unit_of(ring.left(x)), ring.unit_of(ring.right(x))
        xb = ring.dual[x]
        Fv = skel.Farr(x, xb, x, x, ui, uj)
        if Fv.size == 0 or abs(Fv[0, 0, 0, 0]) < 1e-12:
            raise NumericalError(f'no duality data for {x!r}: F[{x},{xb},{x};{x}] vanishes')
        c = np.sqrt(skel.d[x])
        coev[x] = complex(c)
        ev[x] = complex(1.0 / (c * Fv[0, 0, 0, 0]))
    data = DualFunctorData(ev, coev)
    if check:
        rep = verify_dual_functor(skel, data, n_samples=0)
        if not rep.ok:
            kind = rep.failures()[0]
            raise NumericalError(f'dual functor check {kind} failed at {rep.witness[kind]} '
                                 f'(residual {rep.residuals[kind]:.3e})')
    return data


def verify_dual_functor(skel: Skeleton, dual: DualFunctorData | None = None, n_samples: int = 3,
                        rng=0, words: Sequence | None = None) -> AxiomReport:
    """Zig-zag, balancing and sphericality residuals.

    Sphericality compares both closures of random endomorphisms of single simples and of
    composable two-letter words (``n_samples`` each).
    """
    dual = dual or skel.dual
    ring = skel.ring
    rep = AxiomReport(tol=skel.tol)
    rng = np.random.default_rng(rng)
    for x in ring.labels:
        xb = ring.dual[x]
        wx, wxb = skel.word([x]), skel.word([xb])
        i, j = ring.left(x), ring.right(x)
        ev, coev = skel.ev(wx, dual), skel.coev(wx, dual)
        z1 = tensor(skel.identity(wx), ev) @ tensor(coev, skel.identity(wx))
        z2 = tensor(ev, skel.identity(wxb)) @ tensor(skel.identity(wxb), coev)
        rep.record('zigzag', z1.dist(skel.identity(wx)), (x,))
        rep.record('zigzag', z2.dist(skel.identity(wxb)), (x,))
        e2 = (ev @ ev.dag()).scalars()
        c2 = (coev.dag() @ coev).scalars()
        err = max(abs(e2[u] - (skel.d[x] if u == ring.unit_of(j) else 0)) for u in e2)
        err = max(err, max(abs(c2[u] - (skel.d[x] if u == ring.unit_of(i) else 0)) for u in c2))
        rep.record('balancing', err, (x,))
    if words is None:
        words = [[x] for x in ring.labels]
        words += [[x, y] for x in ring.labels for y in ring.labels if ring.right(x) == ring.left(y)]
    for w in words:
        w = skel.word(w)
        samples = [skel.identity(w)] + [skel.random(w, w, rng) for _ in range(n_samples)]
        for f in samples:
            err = _sphericality_residual(skel, f, dual)
            rep.record('sphericality', err, tuple(repr(a) for a in w))
    return rep


def _sphericality_residual(skel: Skeleton, f: Morphism, dual) -> float:
    w = f.source
    wb = skel.dual_word(w)
    ev = skel.ev(w, dual)
    coev = skel.coev(w, dual)
    left = (ev @ tensor(skel.identity(wb), f) @ ev.dag()).scalars()
    right = (coev.dag() @ tensor(f, skel.identity(wb)) @ coev).scalars()
    # for a word in C_ij the left closure lives on 1_j and the right one on 1_i
    return abs(sum(left.values()) - sum(right.values()))


# ---------------------------------------------------------------------- F-axioms

def _dense_F(skel: Skeleton) -> np.ndarray:
    n = skel.ring.rank
    idx = skel.ring.index
    F6 = np.zeros((n,) * 6, dtype=complex)
    for (a, b, c, d, e, f), arr in skel.F.items():
        if arr.size:
            F6[idx[a], idx[b], idx[c], idx[d], idx[e], idx[f]] = arr[0, 0, 0, 0]
    return F6


def pentagon_residual(skel: Skeleton, backend: str | None = None):
    """Max pentagon deviation and a witnessing tuple ``(a,b,c,d,e,f,g,k,l)``.

    In our convention the pentagon reads, for ``abcd -> e`` with ``ab -> f``, ``fc -> g``,
    ``cd -> l`` and ``bl -> k``::

        sum_s F[f,c,d,e,g,l] F[a,b,l,e,f,k]
            = sum_h F[a,b,c,g,f,h] F[a,h,d,e,g,k] F[b,c,d,k,h,l]

    (multiplicity indices contracted accordingly).
    """
    ring = skel.ring
    L = ring.labels
    if ring.multiplicity_free and ring.rank <= kernels.DENSE_MAX_RANK:
        F6 = _dense_F(skel)
        Nm = (ring.N > 0).astype(np.uint8)
        res, wit = kernels.pentagon(F6, Nm, backend=backend)
        return res, (tuple(L[i] for i in wit) if res > 0 else None)
    return _pentagon_general(skel)


def _pentagon_general(skel: Skeleton):
    ring = skel.ring
    L = ring.labels
    out = ring.outcomes
    N = ring.Nabc
    worst, wit = 0.0, None
    for a, b, c, d in itertools.product(L, repeat=4):
        if not (ring.right(a) == ring.left(b) and ring.right(b) == ring.left(c)
                and ring.right(c) == ring.left(d)):
            continue
        for f in out(a, b):
            for g in out(f, c):
                for l in out(c, d):
                    for k in out(b, l):
                        for e in out(g, d):
                            if N(a, k, e) == 0 or N(f, l, e) == 0:
                                continue
                            lhs = np.einsum('xyns,msrt->mxynrt', skel.Farr(f, c, d, e, g, l),
                                            skel.Farr(a, b, l, e, f, k))
                            rhs = np.zeros_like(lhs)
                            for h in out(b, c):
                                if N(a, h, g) == 0 or N(h, d, k) == 0:
                                    continue
                                rhs += np.einsum('mxkl,lywt,kwnr->mxynrt',
                                                 skel.Farr(a, b, c, g, f, h),
                                                 skel.Farr(a, h, d, e, g, k),
                                                 skel.Farr(b, c, d, k, h, l))
                            if lhs.size:
                                r = float(np.max(np.abs(lhs - rhs)))
                                if r > worst:
                                    worst, wit = r, (a, b, c, d, e, f, g, k, l)
    return worst, wit


def unitarity_residual(skel: Skeleton):
    ring = skel.ring
    worst, wit = 0.0, None
    for a, b, c, d in itertools.product(ring.labels, repeat=4):
        rows, cols, M = skel.F_matrix(a, b, c, d)
        if len(rows) != len(cols):
            return float('inf'), (a, b, c, d)
        if not rows:
            continue
        r = float(np.max(np.abs(M @ M.conj().T - np.eye(len(rows)))))
        if r > worst:
            worst, wit = r, (a, b, c, d)
    return worst, wit


def triangle_residual(skel: Skeleton):
    """Deviation of F-moves with a unit strand from the identity (unit normalisation)."""
    ring = skel.ring
    worst, wit = 0.0, None

    def upd(r, w):
        nonlocal worst, wit
        if r > worst:
            worst, wit = r, w

    for u in ring.unit:
        i = ring.left(u)
        for a in ring.labels:
            for c in ring.labels:
                # middle unit: F^{a 1 c}_d[(a,0,nu),(c,0,sig)] = delta
                if ring.right(a) == i and ring.left(c) == i:
                    for d in ring.outcomes(a, c):
                        M = skel.Farr(a, u, c, d, a, c)[0, :, 0, :]
                        upd(float(np.max(np.abs(M - np.eye(M.shape[0])))), (a, u, c, d))
                # left unit: F^{1 a c}_d[(a,0,nu),(d,nu',0)] = delta
                if ring.left(a) == i and ring.right(a) == ring.left(c):
                    for d in ring.outcomes(a, c):
                        M = skel.Farr(u, a, c, d, a, d)[0, :, :, 0]
                        upd(float(np.max(np.abs(M - np.eye(M.shape[0])))), (u, a, c, d))
                # right unit: F^{a c 1}_d[(d,mu,0),(c,0,sig)] = delta
                if ring.right(c) == i and ring.right(a) == ring.left(c):
                    for d in ring.outcomes(a, c):
                        M = skel.Farr(a, c, u, d, d, c)[:, 0, 0, :]
                        upd(float(np.max(np.abs(M - np.eye(M.shape[0])))), (a, c, u, d))
    return worst, wit


def verify_axioms(skel: Skeleton, dual_functor: bool = False, n_samples: int = 3,
                  rng=0, backend: str | None = None) -> AxiomReport:
    """Pentagon, F-unitarity and triangle residuals (plus dual-functor checks if asked)."""
    rep = AxiomReport(tol=skel.tol)
    rep.record('pentagon', *pentagon_residual(skel, backend=backend))
    rep.record('unitarity', *unitarity_residual(skel))
    rep.record('triangle', *triangle_residual(skel))
    if dual_functor:
        try:
            dual = skel.dual
        except NumericalError as err:
            rep.record('dual-functor', float('inf'), str(err))
            return rep
        sub = verify_dual_functor(skel, dual, n_samples=n_samples, rng=rng)
        for k, v in sub.residuals.items():
            rep.record(k, v, sub.witness[k])
    return rep
