"""Half-braidings, the induction functor Delta and the Drinfeld center of a skeleton.

A center object is a pair ``(X, e)`` with ``X`` an :class:`~fuscat.skeleton.Obj` and
``e[c] : X c -> c X`` a unitary for every simple ``c`` (values on other objects follow by
naturality). ``Delta(Y) = sum_c c Y cbar`` carries a canonical half-braiding built from
node pairs; the simple center objects are cut out of ``Delta(sum_s s)`` by the minimal
projections of its commutant (the tube algebra), and every result is re-checked against
the unitarity, hexagon and unit constraints.

For a multifusion category with corners ``C_ii`` the same machinery gives the corner
projection ``Pi_i`` and its inverse ``Phi_i`` (``corner_project`` / ``corner_lift``).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import diagram
from .errors import InputError, NumericalError, PreconditionError
from .fusion_ring import is_indecomposable
from .skeleton import Morphism, Obj, Skeleton, tensor

__all__ = [
    'CenterObject', 'HalfBraidingReport', 'DeltaObject', 'CenterData', 'TubeAlgebra', 'unit_object',
    'half_braiding_verify', 'delta', 'u_iso', 'p_proj', 'projector_report', 'intertwiners',
    'center_hom_dim', 'commutant', 'enumerate_center', 'center_tensor', 'corner_project',
    'corner_lift', 'relabel', 'corners_compare', 'perturb',
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CenterObject:
    """``(X, e)`` with ``e[c] : [X, c] -> [c, X]`` for every simple ``c`` with ``X c != 0``."""
    skel: Skeleton
    X: Obj
    e: dict = field(hash=False)
    name: str = ''

    @property
    def dim(self) -> float:
        return float(sum(m * self.skel.d[x] for x, m in self.X.items))

    def corner_dims(self) -> dict:
        """Quantum dimension of the ``C_ii`` component for every corner ``i``."""
        ring = self.skel.ring
        out = {}
        for x, m in self.X.items:
            i = ring.left(x)
            out[i] = out.get(i, 0.0) + m * self.skel.d[x]
        return out

    def support(self) -> set:
        """Grades ``(i, j)`` of the simples occurring in ``X``."""
        return {self.skel.ring.grade[x] for x, _ in self.X.items}

    def __repr__(self):
        return f'CenterObject({self.name or "?"}: {self.X!r})'


def _simples_against(skel: Skeleton, X: Obj) -> list:
    """Simples ``c`` with ``X c`` nonzero (so that ``e[c]`` is a non-empty map)."""
    ring = skel.ring
    rights = {ring.right(x) for x, _ in X.items}
    return [c for c in ring.labels if ring.left(c) in rights]


def unit_object(skel: Skeleton) -> CenterObject:
    """The tensor unit ``sum_i 1_i`` with the trivial half-braiding."""
    X = Obj((u, 1) for u in skel.ring.unit)
    e = {}
    for c in _simples_against(skel, X):
        src, tgt = (X, skel.obj(c)), (skel.obj(c), X)
        f = skel.zero(src, tgt)
        for t, M in f.blocks.items():
            M[...] = np.eye(*M.shape)
        e[c] = f
    return CenterObject(skel, X, e, name='1')


# ---------------------------------------------------------------------- verification

@dataclass
class HalfBraidingReport:
    residuals: dict
    witness: dict
    tol: float

    @property
    def ok(self) -> bool:
        return all(v < self.tol for v in self.residuals.values())

    def failures(self) -> list:
        return [k for k, v in self.residuals.items() if not v < self.tol]

    def record(self, kind, value, witness):
        value = float(value)
        if value >= self.residuals.get(kind, -1.0):
            self.residuals[kind] = value
            self.witness[kind] = witness

    def to_dict(self) -> dict:
        return {'ok': self.ok, 'tol': self.tol, 'residuals': dict(self.residuals),
                'witness': {k: list(v) if isinstance(v, tuple) else v
                            for k, v in self.witness.items()}}


def half_braiding_verify(obj: CenterObject, tol: float | None = None) -> HalfBraidingReport:
    """Unitarity, hexagon and unit residuals of a half-braiding, with witnessing labels.

    The hexagon is checked in the strict form
    ``(id_c (x) e_d)(e_c (x) id_d) = sum_{t,mu} (V (x) id_X) e_t (id_X (x) V^*)``
    with ``V = V^{cd}_{t,mu}`` the splitting vertices.
    """
    skel = obj.skel
    ring = skel.ring
    tol = skel.tol if tol is None else tol
    rep = HalfBraidingReport({'unitarity': 0.0, 'hexagon': 0.0, 'unit': 0.0}, {}, tol)
    X = obj.X
    idX = skel.identity([X])
    cs = _simples_against(skel, X)
    for c in cs:
        if c not in obj.e:
            rep.record('unitarity', np.inf, (c, 'missing'))
            continue
        e = obj.e[c]
        rep.record('unitarity', max((e @ e.dag()).dist(skel.identity(e.target)),
                                    (e.dag() @ e).dist(skel.identity(e.source))), (c,))
        if ring.is_unit(c):
            err = max((float(np.max(np.abs(M - np.eye(*M.shape)))) for M in e.blocks.values()
                       if M.size), default=0.0)
            rep.record('unit', err, (c,))
    for c in cs:
        for d in ring.labels:
            if ring.left(d) != ring.right(c) or c not in obj.e or d not in obj.e:
                continue
            lhs = (tensor(skel.identity([c]), obj.e[d])
                   @ tensor(obj.e[c], skel.identity([d])))
            rhs = skel.zero(lhs.source, lhs.target)
            for t in ring.outcomes(c, d):
                for mu in range(ring.Nabc(c, d, t)):
                    V = skel.vertex(c, d, t, mu)
                    rhs = rhs + (tensor(V, idX) @ obj.e[t] @ tensor(idX, V.dag()))
            rep.record('hexagon', lhs.dist(rhs), (c, d))
    return rep


def perturb(obj: CenterObject, eps: float = 1e-3, rng=None, label: str | None = None) -> CenterObject:
    """Copy of ``obj`` with one half-braiding matrix perturbed (for negative controls)."""
    rng = np.random.default_rng(rng)
    e = {c: f.copy() for c, f in obj.e.items()}
    cands = [c for c, f in e.items() if f.dim and not obj.skel.ring.is_unit(c)]
    c = label if label is not None else cands[int(rng.integers(len(cands)))]
    for M in e[c].blocks.values():
        if M.size:
            M += eps * (rng.normal(size=M.shape) + 1j * rng.normal(size=M.shape))
            break
    return CenterObject(obj.skel, obj.X, e, name=f'{obj.name}~')


# ---------------------------------------------------------------------- Delta

@dataclass
class DeltaObject:
    """``Delta(Y)`` flattened to one object ``obj.X`` with inclusions of ``[c, Y, cbar]``."""
    obj: CenterObject
    Y: Obj
    inclusions: dict

    @property
    def X(self) -> Obj:
        return self.obj.X


def _flat_inclusions(skel: Skeleton, words: dict):
    """Flatten ``{key: word}`` into one object with isometric inclusions ``word -> [O]``."""
    mult = {}
    offsets = {}
    for key, w in words.items():
        for t, n in skel.multiplicities(w).items():
            offsets[key, t] = mult.get(t, 0)
            mult[t] = mult.get(t, 0) + n
    O = Obj((t, mult[t]) for t in skel.ring.labels if t in mult)
    inc = {}
    for key, w in words.items():
        f = skel.zero(w, [O])
        for t, M in f.blocks.items():
            off = offsets[key, t]
            M[off:off + M.shape[1], :] = np.eye(M.shape[1])
        inc[key] = f
    return O, inc


def _delta_words(skel: Skeleton, Y: Obj) -> dict:
    ring = skel.ring
    lefts = {ring.left(y) for y, _ in Y.items}
    words = {}
    for c in ring.labels:
        if ring.right(c) not in lefts:
            continue
        w = (skel.obj(c), Y, skel.obj(ring.dual[c]))
        if Y.is_simple:
            skel.check_word(w)
        if skel.multiplicities(w):
            words[c] = w
    return words


def delta(skel: Skeleton, Y) -> DeltaObject:
    """``Delta(Y) = sum_c c Y cbar`` with half-braiding
    ``sum_{b,c} d_a^{-1/2} (node(a,b,cbar;L) bent to c -> a b) (x) id_Y (x) (its partner
    bent to cbar a -> bbar)``; for a multifusion category this is ``Delta_i`` on objects of
    the corner ``C_ii`` (the sum only meets ``c`` in ``C_{ji}``)."""
    ring = skel.ring
    Y = skel.obj(Y)
    words = _delta_words(skel, Y)
    O, inc = _flat_inclusions(skel, words)
    env = {'idY': skel.identity([Y])}
    e = {}
    for a in _simples_against(skel, O):
        f = skel.zero([O, skel.obj(a)], [skel.obj(a), O])
        ida = skel.identity([a])
        for c in words:
            cb = ring.dual[c]
            for b in ring.labels:
                if not ring.Nabc(a, b, c) or b not in words:
                    continue
                bb = ring.dual[b]
                B = f'(id({a},{b}) ⊗ coev*({cb})) ∘ (node({a},{b},{cb};L) ⊗ id({c})) ∘ piv({c})'
                T = (f'(coev*({cb}) ⊗ id({bb}) ⊗ ev({a})) ∘ '
                     f'(id({cb}) ⊗ node({a},{b},{cb};R) ⊗ id({a}))')
                term = diagram.evaluate(f'({B}) ⊗ idY ⊗ ({T})', skel, env=env)
                f = f + tensor(ida, inc[b]) @ term @ tensor(inc[c].dag(), ida)
        e[a] = f / np.sqrt(skel.d[a])
    obj = CenterObject(skel, O, e, name=f'Delta({Y!r})')
    return DeltaObject(obj, Y, inc)


def _single_corner(obj: CenterObject) -> int:
    sup = obj.support()
    corners = {i for i, j in sup}
    if any(i != j for i, j in sup):
        raise PreconditionError(f'{obj!r} has off-diagonal support {sorted(sup)}')
    if len(corners) != 1:
        raise PreconditionError(f'{obj!r} spans corners {sorted(corners)}; project it first')
    return corners.pop()


def _corner_D(skel: Skeleton, i: int) -> float:
    return float(sum(skel.d[c] ** 2 for c in skel.ring.corner_labels(i, i)))


def u_iso(obj: CenterObject, dobj: DeltaObject | None = None) -> Morphism:
    """``u_X = D^{-1/2} sum_{c in C_ii} sqrt(d_c) (e_{X,c} (x) id_cbar)(id_X (x) coev_c)``."""
    skel = obj.skel
    i = _single_corner(obj)
    dobj = dobj or delta(skel, obj.X)
    D = _corner_D(skel, i)
    X = obj.X
    u = skel.zero([X], [dobj.X])
    for c in skel.ring.corner_labels(i, i):
        term = (tensor(obj.e[c], skel.identity([skel.ring.dual[c]]))
                @ tensor(skel.identity([X]), skel.coev([c])))
        u = u + np.sqrt(skel.d[c]) * (dobj.inclusions[c] @ term)
    return u / np.sqrt(D)


def p_proj(obj: CenterObject, dobj: DeltaObject | None = None) -> Morphism:
    """The double-node projector on ``Delta(X)``:

    ``p|_{x -> y} = D^{-1} sum_{a in C_ii} sqrt(d_a) sum_alpha
    (id_{yX} (x) R_alpha)(id_y (x) e_{X,a}^* (x) id_xbar)(L_alpha (x) id_{X xbar})``

    for ``x, y`` in the same ``C_ji``; ``L_alpha : x -> y a`` and ``R_alpha : a xbar -> ybar``
    are the bent halves of the node pair on ``(ybar, x, abar)``.
    """
    skel = obj.skel
    ring = skel.ring
    i = _single_corner(obj)
    dobj = dobj or delta(skel, obj.X)
    D = _corner_D(skel, i)
    X = obj.X
    env = {'idX': skel.identity([X])}
    P = skel.zero([dobj.X], [dobj.X])
    words = dobj.inclusions
    for x in words:
        for y in words:
            if ring.left(x) != ring.left(y):
                continue
            xb, yb = ring.dual[x], ring.dual[y]
            for a in ring.corner_labels(i, i):
                if not ring.Nabc(yb, x, a):
                    continue
                B, T = diagram._bigon_pieces(ring, yb, x, a, 'o')
                L = f'(id({y}) ⊗ ({T})) ∘ (coev({y}) ⊗ id({x}))'
                R = f'(id({yb}) ⊗ coev*({x})) ∘ (({B}) ⊗ id({xb}))'
                env['eXa'] = obj.e[a].dag()
                expr = (f'(id({y}) ⊗ idX ⊗ ({R})) ∘ (id({y}) ⊗ eXa ⊗ id({xb})) ∘ '
                        f'(({L}) ⊗ idX ⊗ id({xb}))')
                term = diagram.evaluate(expr, skel, env=env)
                P = P + (np.sqrt(skel.d[a]) / D) * (words[y] @ term @ words[x].dag())
    return P


def projector_report(obj: CenterObject, tol: float | None = None) -> dict:
    """Residuals of ``u*u = id``, ``uu* = p`` (on the ``C_ii`` block), ``p^2 = p``, ``p* = p``,
    ``p`` commuting with the half-braiding of ``Delta(X)``, ``u`` intertwining, and rank."""
    skel = obj.skel
    tol = skel.tol if tol is None else tol
    dobj = delta(skel, obj.X)
    u = u_iso(obj, dobj)
    p = p_proj(obj, dobj)
    i = _single_corner(obj)
    # restriction of p to the summands c X cbar with c in C_ii
    Q = skel.zero([dobj.X], [dobj.X])
    for c, inc in dobj.inclusions.items():
        if skel.ring.grade[c] == (i, i):
            Q = Q + inc @ inc.dag()
    res = {
        'u*u-id': (u.dag() @ u).dist(skel.identity([obj.X])),
        'uu*-p': (u @ u.dag()).dist(Q @ p @ Q),
        'p^2-p': (p @ p).dist(p),
        'p*-p': p.dag().dist(p),
    }
    comm, inter = 0.0, 0.0
    for a, ea in dobj.obj.e.items():
        ida = skel.identity([a])
        comm = max(comm, (ea @ tensor(p, ida)).dist(tensor(ida, p) @ ea))
        if a in obj.e:
            inter = max(inter, (ea @ tensor(u, ida)).dist(tensor(ida, u) @ obj.e[a]))
    res['[p,e]'] = comm
    res['u-intertwines'] = inter
    rank = float(np.real(p.trace()))
    res['rank-integrality'] = abs(rank - round(rank))
    out = {k: float(v) for k, v in res.items()}
    out['ok'] = all(v < tol for k, v in out.items() if k != 'rank-integrality') \
        and out['rank-integrality'] < 1e-6
    out['rank'] = rank
    return out


# ---------------------------------------------------------------------- linear algebra

def _basis(skel: Skeleton, src, tgt) -> list:
    out = []
    proto = skel.zero(src, tgt)
    for t, M in proto.blocks.items():
        for r in range(M.shape[0]):
            for c in range(M.shape[1]):
                f = skel.zero(src, tgt)
                f.blocks[t][r, c] = 1.0
                out.append(f)
    return out


def _nullspace(A: np.ndarray, tol: float) -> np.ndarray:
    if A.shape[0] == 0:
        return np.eye(A.shape[1], dtype=complex)
    u, s, vh = np.linalg.svd(A, full_matrices=True)
    rank = int((s > tol * max(1.0, s.max() if s.size else 1.0)).sum())
    return vh[rank:].conj().T


def intertwiners(A: CenterObject, B: CenterObject, tol: float | None = None) -> list:
    """Orthonormal basis of ``Hom_Z(A, B)``: ``T : X_A -> X_B`` with
    ``e_B[c] (T (x) id_c) = (id_c (x) T) e_A[c]`` for every simple ``c``."""
    skel = A.skel
    tol = skel.tol if tol is None else tol
    basis = _basis(skel, [A.X], [B.X])
    if not basis:
        return []
    rows = []
    cs = sorted(set(A.e) | set(B.e), key=skel.ring.labels.index)
    for c in cs:
        idc = skel.identity([c])
        cols = []
        for T in basis:
            lhs = B.e[c] @ tensor(T, idc) if c in B.e else None
            rhs = tensor(idc, T) @ A.e[c] if c in A.e else None
            if lhs is None:
                v = -rhs.vector()
            elif rhs is None:
                v = lhs.vector()
            else:
                v = (lhs - rhs).vector()
            cols.append(v)
        rows.append(np.array(cols).T)
    K = _nullspace(np.vstack(rows), 1e3 * tol)
    out = []
    for k in range(K.shape[1]):
        out.append(Morphism.from_vector(skel, [A.X], [B.X], K[:, k]))
    return out


def center_hom_dim(A: CenterObject, B: CenterObject) -> int:
    return len(intertwiners(A, B))


def commutant(obj: CenterObject) -> list:
    """Orthonormal basis of ``End_Z(obj)``."""
    return intertwiners(obj, obj)


@dataclass
class TubeAlgebra:
    """``End_Z(Delta(Y))`` as a subspace of ``End(Delta(Y))`` with its basis."""
    delta: DeltaObject
    basis: list

    @classmethod
    def build(cls, skel: Skeleton, Y=None) -> 'TubeAlgebra':
        ring = skel.ring
        if Y is None:
            Y = Obj((x, 1) for x in ring.labels if ring.left(x) == ring.right(x))
        dobj = delta(skel, Y)
        return cls(dobj, commutant(dobj.obj))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, f: Morphism) -> np.ndarray:
        return np.array([np.vdot(b.vector(), f.vector()) for b in self.basis])

    def closure_residual(self) -> float:
        """Distance of ``id``, daggers and products of basis elements from the span."""
        skel = self.delta.obj.skel
        B = np.array([b.vector() for b in self.basis]).T
        P = B @ B.conj().T
        tests = [skel.identity([self.delta.X])] + [b.dag() for b in self.basis]
        tests += [a @ b for a in self.basis for b in self.basis]
        return max(float(np.max(np.abs(v - P @ v), initial=0.0))
                   for v in (t.vector() for t in tests))


# ---------------------------------------------------------------------- enumeration

@dataclass
class CenterData:
    simples: list
    dims: list
    hom_table: np.ndarray
    seed: int
    residuals: dict
    D: float | None

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'simples': [{'name': z.name, 'X': z.X.as_dict(), 'dim': z.dim,
                         'corner_dims': {str(k): v for k, v in z.corner_dims().items()}}
                        for z in self.simples],
            'dims': self.dims,
            'sum_dim_squared': float(sum(d * d for d in self.dims)),
            'D': self.D,
            'hom_table': self.hom_table.tolist(),
            'residuals': self.residuals,
        }


def _image(skel: Skeleton, p: Morphism, X: Obj, tol: float):
    """Isometry ``V : [Z] -> [X]`` onto the range of the projection ``p``."""
    cols = {}
    for t, M in p.blocks.items():
        if M.size == 0:
            continue
        w, U = np.linalg.eigh(0.5 * (M + M.conj().T))
        keep = w > 0.5
        if keep.any():
            cols[t] = U[:, keep]
    Z = Obj((t, cols[t].shape[1]) for t in skel.ring.labels if t in cols)
    V = skel.zero([Z], [X])
    for t, U in cols.items():
        V.blocks[t][...] = U
    return Z, V


def _restrict(dobj: CenterObject, V: Morphism, Z: Obj, name: str) -> CenterObject:
    skel = dobj.skel
    e = {}
    for c in _simples_against(skel, Z):
        idc = skel.identity([c])
        e[c] = tensor(idc, V.dag()) @ dobj.e[c] @ tensor(V, idc)
    return CenterObject(skel, Z, e, name=name)


def _minimal_projections(skel, A: list, X: Obj, rng, tol: float):
    """Spectral projections of a random Hermitian element of the *-algebra span(A)."""
    coeffs = rng.normal(size=len(A)) + 1j * rng.normal(size=len(A))
    h = sum((c * a for c, a in zip(coeffs, A)), skel.zero([X], [X]))
    h = 0.5 * (h + h.dag())
    evals = []
    for t, M in h.blocks.items():
        if M.size:
            w, U = np.linalg.eigh(M)
            for k in range(len(w)):
                evals.append((float(w[k]), t, U[:, k]))
    evals.sort(key=lambda r: r[0])
    scale = 1.0 + max(abs(r[0]) for r in evals)
    groups, cur = [], [evals[0]]
    for r in evals[1:]:
        if r[0] - cur[-1][0] > 1e-7 * scale:
            groups.append(cur)
            cur = [r]
        else:
            cur.append(r)
    groups.append(cur)
    projs = []
    for g in groups:
        p = skel.zero([X], [X])
        for _, t, v in g:
            p.blocks[t] += np.outer(v, v.conj())
        projs.append(p)
    return projs


def _algebra_rank(mats: list, tol: float) -> int:
    if not mats:
        return 0
    M = np.array([m.vector() for m in mats])
    s = np.linalg.svd(M, compute_uv=False)
    return int((s > tol * max(1.0, s.max())).sum())


def enumerate_center(skel: Skeleton, seed: int = 0, max_tries: int = 8,
                     tol: float | None = None, verify: bool = True) -> CenterData:
    """Simple objects of the Drinfeld center via the tube algebra ``End_Z(Delta(sum_s s))``.

    A random Hermitian element of the commutant is split into spectral projections;
    each must be minimal (``dim pAp = 1``), otherwise a new element is drawn (up to
    ``max_tries``). Projections are grouped into isomorphism classes (``q A p != 0``) and
    the image of one representative per class gives a center simple.
    """
    ring = skel.ring
    tol = skel.tol if tol is None else tol
    tube = TubeAlgebra.build(skel)
    dobj, A = tube.delta, tube.basis
    rng = np.random.default_rng(seed)
    for attempt in range(max_tries):
        projs = _minimal_projections(skel, A, dobj.X, rng, tol)
        ok = True
        for p in projs:
            if _algebra_rank([p @ a @ p for a in A], 1e-8) != 1:
                ok = False
                break
        if ok:
            break
        log.info('spectral splitting degenerate (attempt %d); retrying', attempt + 1)
    else:
        raise NumericalError(f'tube algebra splitting stayed degenerate after {max_tries} tries')
    classes = []
    for p in projs:
        for cl in classes:
            q = cl[0]
            if max(((q @ a @ p).max_abs() for a in A), default=0.0) > 1e-7:
                cl.append(p)
                break
        else:
            classes.append([p])
    simples = []
    for k, cl in enumerate(classes):
        Z, V = _image(skel, cl[0], dobj.X, tol)
        simples.append(_restrict(dobj.obj, V, Z, name=f'Z{k}'))
    simples.sort(key=lambda z: (round(z.dim, 8), [(ring.labels.index(x), m) for x, m in z.X.items]))
    for k, z in enumerate(simples):
        object.__setattr__(z, 'name', f'Z{k}')
    residuals = {}
    if verify:
        for z in simples:
            rep = half_braiding_verify(z, tol)
            for kind, v in rep.residuals.items():
                residuals[kind] = max(residuals.get(kind, 0.0), v)
            if not rep.ok:
                raise NumericalError(f'center simple {z.name} fails {rep.failures()}')
    table = np.array([[center_hom_dim(a, b) for b in simples] for a in simples], dtype=int)
    dims = [z.dim for z in simples]
    return CenterData(simples, dims, table, seed, residuals, skel.D)


# ---------------------------------------------------------------------- tensor products

def center_tensor(A: CenterObject, B: CenterObject) -> CenterObject:
    """``(X_A X_B, (e_A (x) id)(id (x) e_B))`` flattened to a single object."""
    skel = A.skel
    w = (A.X, B.X)
    O, inc = _flat_inclusions(skel, {0: w})
    J = inc[0]
    e = {}
    for c in _simples_against(skel, O):
        if c not in A.e or c not in B.e:
            continue
        idc = skel.identity([c])
        br = tensor(A.e[c], skel.identity([B.X])) @ tensor(skel.identity([A.X]), B.e[c])
        e[c] = tensor(idc, J) @ br @ tensor(J.dag(), idc)
    return CenterObject(skel, O, e, name=f'({A.name}{B.name})')


# ---------------------------------------------------------------------- corners

def relabel(obj: CenterObject, target: Skeleton, mapping: dict | None = None) -> CenterObject:
    """Carry a center object to another skeleton with identical F-data on its labels.

    ``mapping`` sends labels of ``obj.skel`` to labels of ``target`` (identity by default).
    The label order must be preserved so that fusion-tree bases correspond.
    """
    mapping = mapping or {}

    def m(x):
        return mapping.get(x, x)

    X = Obj((m(x), k) for x, k in obj.X.items)
    X = target.obj({x: k for x, k in X.items})
    e = {}
    for c, f in obj.e.items():
        mc = target.obj(m(c))
        g = target.zero([X, mc], [mc, X])
        for t, M in f.blocks.items():
            tt = m(t)
            if tt not in g.blocks or g.blocks[tt].shape != M.shape:
                raise InputError(f'cannot relabel block {t} -> {tt}')
            g.blocks[tt] = M.copy()
        e[m(c)] = g
    return CenterObject(target, X, e, name=obj.name)


def corner_project(obj: CenterObject, i: int, tol: float | None = None) -> CenterObject:
    """``Pi_i``: restrict ``X`` to ``C_ii`` and ``e`` to ``c`` in ``C_ii`` (a center object
    of the corner skeleton). Off-diagonal support of ``X`` is a violation."""
    skel = obj.skel
    ring = skel.ring
    tol = skel.tol if tol is None else tol
    off = [x for x, _ in obj.X.items if ring.left(x) != ring.right(x)]
    if off:
        raise PreconditionError(f'{obj!r} has off-diagonal support {off}; not a center object')
    corner = skel.corner(i)
    Xi = Obj((x, m) for x, m in obj.X.items if ring.grade[x] == (i, i))
    e = {}
    if Xi.items:
        for c in ring.corner_labels(i, i):
            f = obj.e[c]
            g = corner.zero([corner.obj(Xi.as_dict()), corner.obj(c)],
                            [corner.obj(c), corner.obj(Xi.as_dict())])
            for t, M in g.blocks.items():
                M[...] = f.blocks[t]
            # all other charges of e_c must vanish (they would involve X_jj (x) c, j != i)
            e[c] = g
    Xi = corner.obj(Xi.as_dict()) if Xi.items else Xi
    return CenterObject(corner, Xi, e, name=f'Pi{i}({obj.name})')


def corner_lift(obj: CenterObject, C: Skeleton, i: int, tol: float | None = None):
    """``Phi_i``: the image of ``p_X`` on ``Delta_i(X)`` for a center object of ``C_ii``.

    Returns ``(lifted, W, residual)`` where ``W = V^* u_X : X -> Phi_i(X)`` is the unitary
    onto the ``C_ii`` block certifying ``Pi_i Phi_i(X) = X`` and ``residual`` collects its
    unitarity and intertwining defects.
    """
    tol = C.tol if tol is None else tol
    X = relabel(obj, C)
    dobj = delta(C, X.X)
    p = p_proj(X, dobj)
    Z, V = _image(C, p, dobj.X, tol)
    lifted = _restrict(dobj.obj, V, Z, name=f'Phi{i}({obj.name})')
    u = u_iso(X, dobj)
    W = V.dag() @ u
    Q = C.zero([Z], [Z])
    for t, M in Q.blocks.items():
        if C.ring.grade[t] == (i, i):
            M[...] = np.eye(M.shape[0])
    res = {
        'W*W-id': (W.dag() @ W).dist(C.identity([X.X])),
        'WW*-id_ii': (W @ W.dag()).dist(Q),
    }
    inter = 0.0
    for c in C.ring.corner_labels(i, i):
        idc = C.identity([c])
        inter = max(inter, (lifted.e[c] @ tensor(W, idc)).dist(tensor(idc, W) @ X.e[c]))
    res['W-intertwines'] = inter
    return lifted, W, {k: float(v) for k, v in res.items()}


def corners_compare(C: Skeleton, base: Skeleton | None = None, label_map=None,
                    seed: int = 0) -> dict:
    """Cross-check of ``Z(C) = Z(C_ii)`` for every corner ``i`` of a multifusion ``C``.

    The projected center simples of ``C`` are matched bijectively with the center simples
    of the comparison category (with equal hom tables), and every projected simple is lifted
    back with a certified unitary. The comparison category is the corner skeleton ``C_ii``
    itself, or ``base`` with labels translated by ``label_map(i)`` (for a matrix category
    over ``base`` the ``_ii`` suffix is stripped by default).
    """
    if not is_indecomposable(C.ring):
        raise PreconditionError('corners_compare needs an indecomposable multifusion category')
    ZC = enumerate_center(C, seed=seed)
    out = {'seed': seed, 'n_center_C': len(ZC.simples), 'corners': {}}
    ok = True
    base_cache = {}
    for i in C.ring.corner_ids:
        if base is None:
            ref, lm = C.corner(i), {}
        else:
            ref, lm = base, (label_map(i) if label_map else _matrix_label_map(C, i))
        key = id(ref) if base is not None else i
        if key not in base_cache:
            base_cache[key] = enumerate_center(ref, seed=seed)
        ZB = base_cache[key]
        proj = [relabel(corner_project(z, i), ref, lm) for z in ZC.simples]
        match = []
        for z in proj:
            hits = [k for k, w in enumerate(ZB.simples) if center_hom_dim(z, w) == 1]
            match.append(hits[0] if len(hits) == 1 else None)
        bij = None not in match and sorted(match) == list(range(len(ZB.simples)))
        table_ok = bool(bij) and all(
            ZC.hom_table[a, b] == ZB.hom_table[match[a], match[b]]
            for a in range(len(proj)) for b in range(len(proj)))
        worst = 0.0
        back = True
        for z in ZC.simples:
            lifted, W, res = corner_lift(corner_project(z, i), C, i)
            worst = max(worst, max(res.values()))
            back = back and center_hom_dim(lifted, z) == 1
        out['corners'][i] = {'n_center_corner': len(ZB.simples), 'matching': match,
                             'bijection': bool(bij), 'hom_tables_agree': bool(table_ok),
                             'roundtrip_residual': worst, 'lift_isomorphic': bool(back)}
        ok = ok and bij and table_ok and worst < C.tol and back
    out['ok'] = bool(ok)
    return out


def _matrix_label_map(C: Skeleton, i: int) -> dict:
    suffix = f'_{i}{i}'
    return {x: x[:-len(suffix)] for x in C.ring.corner_labels(i, i) if x.endswith(suffix)}
