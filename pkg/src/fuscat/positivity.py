"""Completely positive cones on a skeletal unitary multifusion category.

For objects ``a, b`` the cone ``P_{a,b}`` inside ``Hom(a abar, b bbar)`` consists of the
maps ``theta_f = (f (x) fbar)(id_a (x) coev_c (x) id_abar)`` for ``f : a c -> b``.
Membership is decided by the one-click rotation criterion: ``theta`` is cp exactly when
``rho(theta)`` is a positive operator on ``abar b``.

Objects ``a`` and ``b`` may be words; ``abar`` is then the reversed word of duals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InputError, NumericalError
from .skeleton import DualFunctorData, Morphism, Obj, Skeleton, tensor

__all__ = [
    'CpQuery', 'CpCertificate', 'DualTestResult', 'theta_from_f', 'rotate', 'unrotate',
    'is_cp', 'frobenius_shift', 'frobenius_unshift', 'cone_dual_test', 'chi', 'transport_cp',
    'selinger_map', 'reality_residual', 'phase_rescaled_dual', 'split_query',
]


@dataclass
class CpQuery:
    """``theta : a abar -> b bbar`` together with the words ``a`` and ``b``."""
    a: tuple
    b: tuple
    theta: Morphism


@dataclass
class CpCertificate:
    """Verdict of :func:`is_cp`.

    For ``cp`` the witness is ``f : a c -> b`` with ``theta = theta_f``; otherwise the most
    negative eigenvalue of the rotation (or the anti-Hermitian norm) and an eigenvector.
    """
    verdict: str
    a: tuple
    b: tuple
    min_eigenvalue: float
    antihermitian: float
    witness: Morphism | None = None
    c: Obj | None = None
    eigvector: tuple | None = None
    boundary: bool = False
    reconstruction: float | None = None

    @property
    def is_cp(self) -> bool:
        return self.verdict == 'cp'

    def __bool__(self):
        return self.is_cp

    def to_dict(self) -> dict:
        out = {'verdict': self.verdict, 'min_eigenvalue': self.min_eigenvalue,
               'antihermitian_norm': self.antihermitian, 'boundary': self.boundary,
               'a': [repr(x) for x in self.a], 'b': [repr(x) for x in self.b]}
        if self.is_cp:
            out['witness'] = {'c': repr(self.c), 'f': self.witness.to_json_dict(),
                              'reconstruction_residual': self.reconstruction}
        elif self.eigvector is not None:
            t, vec = self.eigvector
            out['eigvector'] = {'charge': t, 'vector': [[float(z.real), float(z.imag)] for z in vec]}
        return out


def _halve(skel: Skeleton, w: tuple, what: str) -> tuple:
    if len(w) % 2:
        raise InputError(f'cannot split {what} word {list(w)} as x (x) xbar; pass it explicitly')
    x = w[:len(w) // 2]
    if skel.dual_word(x) != w[len(w) // 2:]:
        raise InputError(f'{what} word {list(w)} is not of the form x (x) xbar')
    return x


def split_query(theta: Morphism, a=None, b=None) -> CpQuery:
    """Recover ``a`` and ``b`` from ``theta : a abar -> b bbar`` (or check given ones)."""
    skel = theta.skel
    a = _halve(skel, theta.source, 'source') if a is None else skel.word(a)
    b = _halve(skel, theta.target, 'target') if b is None else skel.word(b)
    if theta.source != a + skel.dual_word(a) or theta.target != b + skel.dual_word(b):
        raise InputError(f'theta {theta.signature()} is not a map a abar -> b bbar')
    return CpQuery(a, b, theta)


def _id(skel, w):
    return skel.identity(w)


def theta_from_f(f: Morphism, a=None, dual: DualFunctorData | None = None) -> Morphism:
    """``theta_f = (f (x) fbar)(id_a (x) coev_c (x) id_abar)`` for ``f : a c -> b``.

    ``a`` is the leading part of ``f.source`` (default: its first letter).
    """
    skel = f.skel
    if a is None:
        n = 1
    else:
        a = skel.word(a)
        n = len(a)
        if f.source[:n] != a:
            raise InputError('a is not a prefix of the source of f')
    a, c = f.source[:n], f.source[n:]
    fb = skel.conjugate(f, dual)
    ab = skel.dual_word(a)
    amp = tensor(tensor(_id(skel, a), skel.coev(c, dual)), _id(skel, ab))
    return tensor(f, fb) @ amp


def rotate(theta: Morphism, direction: int = 1, a=None, b=None,
           dual: DualFunctorData | None = None) -> Morphism:
    """One-click rotations of ``theta : a abar -> b bbar``.

    ``+1``: ``(id_{abar b} (x) ev_b)(id_abar (x) theta (x) id_b)(ev_a^* (x) id_{abar b})``
    in ``End(abar b)``; ``-1``: ``(ev_b (x) id_{bbar a})(id_bbar (x) theta (x) id_a)
    (id_{bbar a} (x) ev_a^*)`` in ``End(bbar a)``. Both are positive iff ``theta`` is cp.
    """
    q = split_query(theta, a, b)
    skel = theta.skel
    a, b = q.a, q.b
    ab, bb = skel.dual_word(a), skel.dual_word(b)
    if direction == 1:
        return (tensor(_id(skel, ab + b), skel.ev(b, dual))
                @ tensor(tensor(_id(skel, ab), theta), _id(skel, b))
                @ tensor(skel.ev(a, dual).dag(), _id(skel, ab + b)))
    if direction == -1:
        return (tensor(skel.ev(b, dual), _id(skel, bb + a))
                @ tensor(tensor(_id(skel, bb), theta), _id(skel, a))
                @ tensor(_id(skel, bb + a), skel.ev(a, dual).dag()))
    raise InputError('direction must be +1 or -1')


def unrotate(M: Morphism, a, b, dual: DualFunctorData | None = None) -> Morphism:
    """Inverse of ``rotate(., +1)``: ``End(abar b) -> Hom(a abar, b bbar)``."""
    skel = M.skel
    a, b = skel.word(a), skel.word(b)
    ab, bb = skel.dual_word(a), skel.dual_word(b)
    if M.source != ab + b or M.target != ab + b:
        raise InputError(f'{M.signature()} is not an endomorphism of abar b')
    return (tensor(skel.coev(a, dual).dag(), _id(skel, b + bb))
            @ tensor(tensor(_id(skel, a), M), _id(skel, bb))
            @ tensor(_id(skel, a + ab), skel.coev(b, dual)))


def _spectral(M: Morphism):
    """Per charge: Hermitian eigen-decomposition and anti-Hermitian norm."""
    out = {}
    anti = 0.0
    for t, X in M.blocks.items():
        if X.size == 0:
            continue
        H = 0.5 * (X + X.conj().T)
        A = 0.5 * (X - X.conj().T)
        anti = max(anti, float(np.linalg.norm(A, 2)))
        out[t] = np.linalg.eigh(H)
    return out, anti


def _unit_for(skel, a, b):
    ring = skel.ring
    for w, side in ((a, -1), (b, -1)):
        if w:
            lab = w[side].items[0][0]
            return ring.unit_of(ring.right(lab))
    return ring.unit[0]


def is_cp(theta: Morphism, a=None, b=None, dual: DualFunctorData | None = None,
          tol: float | None = None) -> CpCertificate:
    """Decide ``theta in P_{a,b}`` via the rotation criterion and build a certificate."""
    skel = theta.skel
    tol = skel.tol if tol is None else tol
    q = split_query(theta, a, b)
    a, b = q.a, q.b
    M = rotate(theta, 1, a, b, dual)
    scale = 1.0 + M.max_abs()
    spec, anti = _spectral(M)
    lam_min, vec = np.inf, None
    for t, (w, U) in spec.items():
        if w[0] < lam_min:
            lam_min, vec = float(w[0]), (t, U[:, 0])
    if not spec:
        lam_min = 0.0
    cp = bool(lam_min >= -tol * scale and anti < tol * scale)
    if not cp:
        return CpCertificate('not-cp', a, b, lam_min, anti, eigvector=vec)
    # factor rho(theta) = g g^* with g : c -> abar b
    ab = skel.dual_word(a)
    cut = 1e-13 * scale
    ranks, cols = {}, {}
    for t, (w, U) in spec.items():
        keep = w > cut
        if keep.any():
            ranks[t] = int(keep.sum())
            cols[t] = U[:, keep] * np.sqrt(w[keep])
    if ranks:
        c = Obj((t, ranks[t]) for t in skel.ring.labels if t in ranks)
        g = skel.zero([c], ab + b)
        for t, G in cols.items():
            g.blocks[t][...] = G
        f = tensor(skel.coev(a, dual).dag(), _id(skel, b)) @ tensor(_id(skel, a), g)
    else:
        c = Obj.simple(_unit_for(skel, a, b))
        f = skel.zero(a + (c,), b)
    recon = theta_from_f(f, a, dual).dist(theta)
    boundary = bool(abs(lam_min) <= tol * scale)
    return CpCertificate('cp', a, b, lam_min, anti, witness=f, c=c, boundary=boundary,
                         reconstruction=recon)


# ---------------------------------------------------------------------- cone operations

def frobenius_shift(theta: Morphism, a, dual: DualFunctorData | None = None) -> Morphism:
    """``P_{a b, c} -> P_{b, abar c}``:
    ``theta -> (id_abar (x) theta (x) id_a)(ev_a^* (x) id_{b bbar} (x) conj(ev_a^*))``."""
    skel = theta.skel
    a = skel.word(a)
    n = len(theta.source)
    if theta.source[:len(a)] != a:
        raise InputError('a is not a prefix of the source of theta')
    mid = theta.source[len(a):n - len(a)]
    ab = skel.dual_word(a)
    e = skel.ev(a, dual).dag()
    left = tensor(tensor(e, _id(skel, mid)), skel.conjugate(e, dual))
    return tensor(tensor(_id(skel, ab), theta), _id(skel, a)) @ left


def frobenius_unshift(theta: Morphism, a, dual: DualFunctorData | None = None) -> Morphism:
    """Inverse of :func:`frobenius_shift`:
    ``theta -> (coev_a^* (x) id_{c cbar} (x) conj(coev_a^*))(id_a (x) theta (x) id_abar)``."""
    skel = theta.skel
    a = skel.word(a)
    ab = skel.dual_word(a)
    if theta.target[:len(ab)] != ab:
        raise InputError('abar is not a prefix of the target of theta')
    mid = theta.target[len(ab):len(theta.target) - len(a)]
    k = skel.coev(a, dual).dag()
    top = tensor(tensor(k, _id(skel, mid)), skel.conjugate(k, dual))
    return top @ tensor(tensor(_id(skel, a), theta), _id(skel, ab))


@dataclass
class DualTestResult:
    """Outcome of :func:`cone_dual_test`; truthy iff the dual-cone inequality holds."""
    positive: bool
    min_value: float
    witness: Morphism | None = None
    values: dict = field(default_factory=dict)

    def __bool__(self):
        return self.positive


def _state(skel, phi) -> dict:
    units = skel.ring.unit
    if phi is None:
        phi = {u: 1.0 / len(units) for u in units}
    elif not isinstance(phi, Mapping):
        phi = dict(zip(units, np.ravel(phi)))
    phi = {skel.ring.label(u): float(np.real(v)) for u, v in phi.items()}
    if set(phi) != set(units) or min(phi.values()) <= 0:
        raise InputError(f'state {phi} is not faithful on End(1) (needs a positive weight '
                         f'on every unit {list(units)})')
    return phi


def cone_dual_test(theta: Morphism, phi=None, dual: DualFunctorData | None = None,
                   tol: float | None = None, check: bool = True) -> DualTestResult:
    """Self-duality test for ``theta : 1 -> a abar``.

    Checks ``phi(theta' o theta) >= 0`` for all ``theta' = unrotate(g g^*)`` with ``g`` a
    vector in some ``Hom(t, abar)``: this is positivity of the Hermitian form
    ``Q_ij = phi(unrotate(E_ij) o theta)`` over matrix units ``E_ij``. With ``check`` the
    verdict is compared with :func:`is_cp`.
    """
    skel = theta.skel
    tol = skel.tol if tol is None else tol
    phi = _state(skel, phi)
    if theta.source != ():
        raise InputError('cone_dual_test needs theta : 1 -> a abar')
    a = _halve(skel, theta.target, 'target')
    ab = skel.dual_word(a)
    index = [(t, i) for t, n in skel.multiplicities(ab).items() for i in range(n)]
    n = len(index)
    Q = np.zeros((n, n), dtype=complex)
    for r, (t, i) in enumerate(index):
        for s, (t2, j) in enumerate(index):
            if t2 != t:
                continue
            E = skel.zero(ab, ab)
            E.blocks[t][i, j] = 1.0
            th = unrotate(E, a, (), dual)
            val = (th @ theta).scalars()
            Q[r, s] = sum(phi[u] * v for u, v in val.items())
    scale = 1.0 + np.max(np.abs(Q)) if n else 1.0
    H = 0.5 * (Q + Q.conj().T)
    anti = float(np.linalg.norm(Q - Q.conj().T, 2)) / 2 if n else 0.0
    if n:
        w, U = np.linalg.eigh(H)
        lam = float(w[0])
    else:
        lam = 0.0
    positive = lam >= -tol * scale and anti < tol * scale
    witness = None
    if not positive and n:
        v = U[:, 0]
        g = skel.zero(ab, ab)
        for r, (t, i) in enumerate(index):
            for s, (t2, j) in enumerate(index):
                if t == t2:
                    g.blocks[t][i, j] += v[r] * np.conj(v[s])
        witness = unrotate(g, a, (), dual)
    res = DualTestResult(bool(positive), lam, witness)
    if check:
        cert = is_cp(theta, (), a, dual, tol)
        if cert.is_cp != positive:
            raise NumericalError(f'cone_dual_test ({positive}) disagrees with is_cp '
                                 f'({cert.is_cp}); min eigenvalues {lam:.3e} / '
                                 f'{cert.min_eigenvalue:.3e}')
    return res


# ---------------------------------------------------------------------- dual functors

def chi(skel: Skeleton, w, dual1: DualFunctorData, dual2: DualFunctorData) -> Morphism:
    """Unitary polar factor of ``(ev^1_w (x) id)(id (x) coev^2_w) : wbar -> wbar``."""
    w = skel.word(w)
    wb = skel.dual_word(w)
    X = tensor(skel.ev(w, dual1), _id(skel, wb)) @ tensor(_id(skel, wb), skel.coev(w, dual2))
    U = skel.zero(wb, wb)
    for t, M in X.blocks.items():
        if M.size == 0:
            continue
        u, s, vh = np.linalg.svd(M)
        if s.min() < 1e-12 * max(1.0, s.max()):
            raise NumericalError(f'chi~ is singular on charge {t}: inconsistent dual data')
        U.blocks[t][...] = u @ vh
    return U


def transport_cp(theta: Morphism, dual1: DualFunctorData, dual2: DualFunctorData,
                 a=None, b=None) -> Morphism:
    """``(id_b (x) chi_b) theta (id_a (x) chi_a^{-1})`` carrying ``P^1_{a,b}`` to ``P^2_{a,b}``."""
    skel = theta.skel
    q = split_query(theta, a, b)
    ca, cb = chi(skel, q.a, dual1, dual2), chi(skel, q.b, dual1, dual2)
    return tensor(_id(skel, q.b), cb) @ theta @ tensor(_id(skel, q.a), ca.dag())


def phase_rescaled_dual(skel: Skeleton, rng=None, phases: Mapping | None = None,
                        corner_weights: Mapping | None = None) -> DualFunctorData:
    """Another unitary dual functor: ``coev_x -> lam_x coev_x``, ``ev_x -> ev_x / lam_x``.

    ``lam_x = p_x r_i / r_j`` for ``x`` in ``C_ij``: ``p_x`` are phases (random unless
    given) with ``p_xbar = p_x`` and ``p = 1`` on units; ``r`` are optional positive corner
    weights. Positive factors are only consistent when they factor through the grading
    like this, so on a fusion category the non-balanced choices are the phases alone.
    """
    ring = skel.ring
    rng = np.random.default_rng(rng)
    lam = {}
    for x in ring.labels:
        if x in lam:
            continue
        if ring.is_unit(x):
            lam[x] = 1.0
        else:
            val = phases[x] if phases and x in phases else np.exp(2j * np.pi * rng.random())
            lam[x] = lam[ring.dual[x]] = val
    if corner_weights:
        for x in ring.labels:
            i, j = ring.grade[x]
            lam[x] *= corner_weights.get(i, 1.0) / corner_weights.get(j, 1.0)
    return skel.dual.rescaled(lam, name='rescaled')


# ---------------------------------------------------------------------- further properties

def selinger_map(theta: Morphism, g: Morphism, d, a=None, b=None,
                 dual: DualFunctorData | None = None) -> Morphism:
    """``(id_{d b} (x) ev_b)(id_d (x) theta (x) id_b)(g (x) id_{abar b})(id_d (x) coev_a (x) id_b)``."""
    skel = theta.skel
    q = split_query(theta, a, b)
    a, b = q.a, q.b
    d = skel.word(d)
    ab = skel.dual_word(a)
    return (tensor(_id(skel, d + b), skel.ev(b, dual))
            @ tensor(tensor(_id(skel, d), theta), _id(skel, b))
            @ tensor(g, _id(skel, ab + b))
            @ tensor(tensor(_id(skel, d), skel.coev(a, dual)), _id(skel, b)))


def reality_residual(theta: Morphism, a=None, b=None, dual: DualFunctorData | None = None) -> float:
    """Deviation from ``nu~_b theta = thetabar nu~_a`` with ``nu~_x = phi_x (x) id_xbar``."""
    skel = theta.skel
    q = split_query(theta, a, b)
    nu_a = tensor(skel.pivotal(q.a, dual), _id(skel, skel.dual_word(q.a))) if q.a \
        else _id(skel, ())
    nu_b = tensor(skel.pivotal(q.b, dual), _id(skel, skel.dual_word(q.b))) if q.b \
        else _id(skel, ())
    return (nu_b @ theta).dist(skel.conjugate(theta, dual) @ nu_a)
