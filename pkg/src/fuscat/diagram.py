"""A small string-diagram language: parser, evaluator and graphical-calculus relations.

Grammar (ASCII aliases in brackets)::

    expr   := sum ( ('&' | '⊠') sum )*              external (formal) tensor of pieces
    sum    := ['-'] comp ( ('+' | '-') comp )*
    comp   := tens ( ('∘' | ';' ['.']) tens )*         composition, g ∘ f = "g after f"
    tens   := factor ( ('⊗' ['*', 'x']) factor )*     monoidal product
    factor := NUMBER ['·'] factor | atom
    atom   := id(word) | ev(word) | coev(word) | ev*(word) | coev*(word)
            | piv(word) | piv*(word)                pivotal structure and its adjoint
            | node(x, y, z; L|R [; tag]) | name | '(' expr ')'
    word   := label ((',' | ' ') label)*             (may be empty: the unit)

``xbar`` denotes the dual label of ``x`` when ``xbar`` is not itself a label.

``node(x,y,z;L)`` is the vector ``sqrt(d_x d_y d_z) e_alpha`` of ``Hom(1, x y z)`` and
``node(x,y,z;R)`` the dual-basis vector ``e^alpha`` of ``Hom(1, zbar ybar xbar)``. Halves
with the same ``(x, y, z, tag)`` inside one expression are summed over ``alpha``; the
external tensor ``&`` combines disconnected pieces (as in ``kron``), so that relations
whose two sides are sums of tensor products of morphisms can be written down directly.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InputError
from .skeleton import DualFunctorData, Morphism, Skeleton, tensor

__all__ = [
    'parse', 'evaluate', 'Diagram', 'ExternalTensor', 'OpenFamily', 'NodePairElement',
    'node_pair_element', 'verify_relation', 'relation_tuples', 'relation_sweep', 'RELATIONS',
]


# ---------------------------------------------------------------------- AST

@dataclass(frozen=True)
class Diagram:
    span: tuple = field(compare=False)


@dataclass(frozen=True)
class Id(Diagram):
    word: tuple


@dataclass(frozen=True)
class Named(Diagram):
    name: str


@dataclass(frozen=True)
class Ev(Diagram):
    word: tuple


@dataclass(frozen=True)
class Coev(Diagram):
    word: tuple


@dataclass(frozen=True)
class EvStar(Diagram):
    word: tuple


@dataclass(frozen=True)
class CoevStar(Diagram):
    word: tuple


@dataclass(frozen=True)
class Piv(Diagram):
    word: tuple
    star: bool = False


@dataclass(frozen=True)
class NodePair(Diagram):
    x: str
    y: str
    z: str
    side: str
    tag: str = ''

    @property
    def key(self):
        return (self.x, self.y, self.z, self.tag)


@dataclass(frozen=True)
class Compose(Diagram):
    left: Diagram
    right: Diagram


@dataclass(frozen=True)
class Tensor(Diagram):
    left: Diagram
    right: Diagram


@dataclass(frozen=True)
class Sum(Diagram):
    left: Diagram
    right: Diagram
    sign: int = 1


@dataclass(frozen=True)
class Scale(Diagram):
    factor: complex
    body: Diagram


@dataclass(frozen=True)
class External(Diagram):
    left: Diagram
    right: Diagram


def _children(d: Diagram):
    for attr in ('left', 'right', 'body'):
        if hasattr(d, attr):
            yield getattr(d, attr)


def node_occurrences(d: Diagram) -> list:
    if isinstance(d, NodePair):
        return [d]
    return [n for c in _children(d) for n in node_occurrences(c)]


# ---------------------------------------------------------------------- parser

_NUMBER = re.compile(r'\d+(\.\d+)?([eE][-+]?\d+)?')
_NAME = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
_LABEL = re.compile(r'[^\s,;()]+')


class _Parser:
    def __init__(self, text: str, skel: Skeleton | None):
        self.text = text
        self.pos = 0
        self.skel = skel

    def error(self, msg, pos=None):
        pos = self.pos if pos is None else pos
        raise InputError(f'syntax error at position {pos}: {msg}\n  {self.text}\n  {" " * pos}^')

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, *options) -> str | None:
        self.skip()
        for s in options:
            if self.text.startswith(s, self.pos):
                self.pos += len(s)
                return s
        return None

    def expect(self, s: str):
        if not self.accept(s):
            self.error(f'expected {s!r}')

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    # grammar
    def parse(self) -> Diagram:
        d = self.expr()
        if not self.at_end():
            self.error(f'unexpected {self.text[self.pos]!r}')
        return d

    def expr(self):
        start = self.pos
        d = self.sum_()
        while self.accept('&', '⊠'):
            d = External((start, self.pos), d, self.sum_())
            d = External((start, self.pos), d.left, d.right)
        return d

    def sum_(self):
        start = self.pos
        neg = self.accept('-')
        d = self.comp()
        if neg:
            d = Scale((start, self.pos), -1.0, d)
        while True:
            op = self.accept('+', '-')
            if not op:
                return d
            r = self.comp()
            d = Sum((start, self.pos), d, r, 1 if op == '+' else -1)

    def comp(self):
        start = self.pos
        d = self.tens()
        while True:
            self.skip()
            if self.accept('∘', ';'):
                pass
            elif self.peek('.') and not _NUMBER.match(self.text, self.pos + 1):
                self.pos += 1
            else:
                return d
            d = Compose((start, self.pos), d, self.tens())

    def _tensor_op(self) -> bool:
        if self.accept('⊗', '*'):
            return True
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if m and m.group(0) == 'x':
            self.pos = m.end()
            return True
        return False

    def tens(self):
        start = self.pos
        d = self.factor()
        while self._tensor_op():
            d = Tensor((start, self.pos), d, self.factor())
        return d

    def factor(self):
        self.skip()
        start = self.pos
        m = _NUMBER.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            val = float(m.group(0))
            self.accept('·')
            self.skip()
            if self.pos < len(self.text) and (self.text[self.pos] in '(' or
                                              _NAME.match(self.text, self.pos) or
                                              _NUMBER.match(self.text, self.pos)):
                body = self.factor()
            else:
                body = Id((start, self.pos), ())
            return Scale((start, self.pos), val, body)
        return self.atom()

    def word(self) -> tuple:
        self.expect('(')
        labels = []
        while True:
            self.skip()
            if self.accept(')'):
                return tuple(labels)
            if labels and self.accept(','):
                self.skip()
            m = _LABEL.match(self.text, self.pos)
            if not m:
                self.error('expected a label')
            labels.append(self.resolve(m.group(0), self.pos))
            self.pos = m.end()

    def resolve(self, lab: str, pos: int) -> str:
        if self.skel is None:
            return lab
        try:
            return self.skel.ring.label(lab)
        except InputError:
            self.error(f'unknown label {lab!r}', pos)

    def atom(self):
        self.skip()
        start = self.pos
        if self.accept('('):
            d = self.expr()
            self.expect(')')
            return d
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error('expected an expression')
        name = m.group(0)
        self.pos = m.end()
        if name == 'piv':
            star = self.text.startswith('*', self.pos)
            if star:
                self.pos += 1
            return Piv((start, self.pos), self.word(), star)
        if name in ('ev', 'coev'):
            star = self.text.startswith('*', self.pos)
            if star:
                self.pos += 1
            w = self.word()
            cls = {('ev', False): Ev, ('ev', True): EvStar,
                   ('coev', False): Coev, ('coev', True): CoevStar}[name, star]
            return cls((start, self.pos), w)
        if name == 'id':
            return Id((start, self.pos), self.word())
        if name == 'node':
            self.expect('(')
            labs = []
            for k in range(3):
                self.skip()
                lm = _LABEL.match(self.text, self.pos)
                if not lm:
                    self.error('expected a label')
                labs.append(self.resolve(lm.group(0), self.pos))
                self.pos = lm.end()
                self.expect(',' if k < 2 else ';')
            self.skip()
            side = self.accept('L', 'R')
            if not side:
                self.error('expected side L or R')
            tag = ''
            if self.accept(';'):
                self.skip()
                tm = _LABEL.match(self.text, self.pos)
                if not tm:
                    self.error('expected a tag')
                tag = tm.group(0)
                self.pos = tm.end()
            self.expect(')')
            return NodePair((start, self.pos), labs[0], labs[1], labs[2], side, tag)
        return Named((start, self.pos), name)


def parse(text: str, skel: Skeleton | None = None) -> Diagram:
    """Parse an expression; with ``skel`` given, labels are resolved and checked."""
    return _Parser(text, skel).parse()


# ---------------------------------------------------------------------- node pairs

@dataclass
class NodePairElement:
    """Dual bases ``e_alpha`` of ``Hom(1, x y z)`` and ``e^alpha`` of ``Hom(1, zbar ybar xbar)``.

    ``e^alpha`` is dual to ``e_alpha`` for the pairing ``P(u, v) = ev_{xyz} o (v (x) u)``.
    """
    x: str
    y: str
    z: str
    scale: float
    lower: list
    upper: list
    gram: np.ndarray

    def __len__(self):
        return len(self.lower)

    def L(self, alpha: int) -> Morphism:
        return self.scale * self.lower[alpha]

    def R(self, alpha: int) -> Morphism:
        return self.upper[alpha]

    def summed(self) -> np.ndarray:
        """``sum_alpha kron(L_alpha, R_alpha)`` as a matrix on coordinate vectors."""
        if not len(self):
            return np.zeros((0, 0))
        return sum(np.outer(self.L(a).vector(), self.R(a).vector()) for a in range(len(self)))


def _pairing(skel, u: Morphism, v: Morphism, dual) -> complex:
    w = u.target
    return sum((skel.ev(w, dual) @ tensor(v, u)).scalars().values())


def node_pair_element(skel: Skeleton, x: str, y: str, z: str,
                      dual: DualFunctorData | None = None,
                      basis_change: np.ndarray | None = None) -> NodePairElement:
    """Build the canonical node pair; ``basis_change`` (invertible) replaces ``e_alpha``
    by ``sum_beta U[beta, alpha] e_beta`` before the dual basis is computed."""
    ring = skel.ring
    x, y, z = (ring.label(t) for t in (x, y, z))
    if not (ring.right(x) == ring.left(y) and ring.right(y) == ring.left(z)
            and ring.right(z) == ring.left(x)):
        raise InputError(f'node({x},{y},{z}) is not grade compatible')
    w = skel.word([x, y, z])
    wb = skel.dual_word(w)
    one = ring.unit_of(ring.left(x))
    n = len(skel.trees(w, one))
    lower = []
    for a in range(n):
        f = skel.zero((), w)
        f.blocks[one][a, 0] = 1.0
        lower.append(f)
    if basis_change is not None:
        U = np.asarray(basis_change)
        lower = [sum((U[b, a] * lower[b] for b in range(n)), skel.zero((), w)) for a in range(n)]
    onebar = ring.unit_of(ring.right(z))
    m = len(skel.trees(wb, onebar))
    if m != n:
        raise InputError(f'hom spaces of node({x},{y},{z}) have different dimensions')
    cand = []
    for b in range(m):
        f = skel.zero((), wb)
        f.blocks[onebar][b, 0] = 1.0
        cand.append(f)
    G = np.array([[_pairing(skel, lower[a], cand[b], dual) for a in range(n)] for b in range(m)],
                 dtype=complex).reshape(m, n)
    C = np.linalg.inv(G).T if n else np.zeros((0, 0))
    upper = [sum((C[b, a] * cand[b] for b in range(m)), skel.zero((), wb)) for a in range(n)]
    scale = float(np.sqrt(skel.d[x] * skel.d[y] * skel.d[z]))
    return NodePairElement(x, y, z, scale, lower, upper, G)


# ---------------------------------------------------------------------- evaluation

@dataclass
class ExternalTensor:
    """Formal tensor product of morphisms, stored as the kron of coordinate vectors."""
    signatures: tuple
    data: np.ndarray

    @classmethod
    def of(cls, f) -> 'ExternalTensor':
        if isinstance(f, ExternalTensor):
            return f
        return cls(((f.source, f.target),), f.vector())

    def __add__(self, other):
        other = ExternalTensor.of(other)
        if other.signatures != self.signatures:
            raise InputError('cannot add external tensors of different types')
        return ExternalTensor(self.signatures, self.data + other.data)

    def __mul__(self, c):
        return ExternalTensor(self.signatures, c * self.data)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1.0) * ExternalTensor.of(other)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def dist(self, other) -> float:
        return (self - other).max_abs()


@dataclass
class OpenFamily:
    """Result with uncontracted node halves: maps the open ``alpha`` tuple to a value."""
    keys: tuple
    values: dict


class _Evaluator:
    def __init__(self, skel, env, dual, node_bases):
        self.skel = skel
        self.env = env or {}
        self.dual = dual
        self.node_bases = node_bases or {}
        self.memo = {}
        self.alpha = {}
        self.nodes = {}

    def type_error(self, d, msg):
        a, b = d.span
        raise InputError(f'type error in span [{a}:{b}]: {msg}')

    def ev(self, d):
        has_nodes = bool(node_occurrences(d))
        if not has_nodes and id(d) in self.memo:
            return self.memo[id(d)]
        val = self._ev(d)
        if not has_nodes:
            self.memo[id(d)] = val
        return val

    def _ev(self, d):
        skel = self.skel
        try:
            if isinstance(d, Id):
                return skel.identity(skel.word(list(d.word)))
            if isinstance(d, Ev):
                return skel.ev(skel.word(list(d.word)), self.dual)
            if isinstance(d, EvStar):
                return skel.ev(skel.word(list(d.word)), self.dual).dag()
            if isinstance(d, Coev):
                return skel.coev(skel.word(list(d.word)), self.dual)
            if isinstance(d, CoevStar):
                return skel.coev(skel.word(list(d.word)), self.dual).dag()
            if isinstance(d, Piv):
                phi = skel.pivotal(skel.word(list(d.word)), self.dual)
                return phi.dag() if d.star else phi
        except InputError as err:
            self.type_error(d, str(err))
        if isinstance(d, Named):
            if d.name not in self.env:
                self.type_error(d, f'unbound name {d.name!r}')
            return self.env[d.name]
        if isinstance(d, NodePair):
            elem = self.nodes[d.key]
            a = self.alpha[d.key]
            if a is None:
                w = (skel.word([d.x, d.y, d.z]) if d.side == 'L'
                     else skel.dual_word(skel.word([d.x, d.y, d.z])))
                return skel.zero((), w)
            return elem.L(a) if d.side == 'L' else elem.R(a)
        if isinstance(d, Compose):
            g, f = self.ev(d.left), self.ev(d.right)
            if not isinstance(f, Morphism) or not isinstance(g, Morphism):
                self.type_error(d, 'cannot compose external tensors')
            if f.target != g.source:
                self.type_error(d, f'composing {g.signature()} after {f.signature()}')
            return g @ f
        if isinstance(d, Tensor):
            f, g = self.ev(d.left), self.ev(d.right)
            if not isinstance(f, Morphism) or not isinstance(g, Morphism):
                self.type_error(d, 'cannot tensor external tensors')
            try:
                return tensor(f, g)
            except InputError as err:
                self.type_error(d, str(err))
        if isinstance(d, Sum):
            f, g = self.ev(d.left), self.ev(d.right)
            try:
                if isinstance(f, ExternalTensor) or isinstance(g, ExternalTensor):
                    return ExternalTensor.of(f) + d.sign * ExternalTensor.of(g)
                return f + g if d.sign > 0 else f - g
            except InputError as err:
                self.type_error(d, str(err))
        if isinstance(d, Scale):
            return d.factor * self.ev(d.body)
        if isinstance(d, External):
            f, g = ExternalTensor.of(self.ev(d.left)), ExternalTensor.of(self.ev(d.right))
            return ExternalTensor(f.signatures + g.signatures, np.kron(f.data, g.data))
        raise InputError(f'cannot evaluate {d!r}')  # pragma: no cover


def evaluate(diagram, skel: Skeleton, env: Mapping | None = None,
             dual: DualFunctorData | None = None, node_bases: Mapping | None = None):
    """Evaluate a diagram (or expression text) to a :class:`Morphism`.

    Results of expressions using ``&`` are :class:`ExternalTensor`; if some node half has
    no partner, an :class:`OpenFamily` indexed by the open ``alpha`` values is returned.
    ``node_bases`` may map ``(x, y, z)`` to a basis-change matrix for that node pair.
    """
    if isinstance(diagram, str):
        diagram = parse(diagram, skel)
    occ = node_occurrences(diagram)
    sides = {}
    for n in occ:
        sides.setdefault(n.key, []).append(n.side)
    for key, s in sides.items():
        if sorted(s) not in (['L'], ['R'], ['L', 'R']):
            raise InputError(f'node pair {key} used with sides {s}; each half may occur once')
    ev = _Evaluator(skel, env, dual, node_bases)
    ranges = []
    for key in sides:
        x, y, z, tag = key
        U = (node_bases or {}).get((x, y, z))
        elem = node_pair_element(skel, x, y, z, dual, basis_change=U)
        ev.nodes[key] = elem
        ranges.append(list(range(len(elem))) or [None])
    keys = list(sides)
    open_keys = tuple(k for k in keys if len(sides[k]) == 1)
    results = {}
    for assignment in itertools.product(*ranges):
        ev.alpha = dict(zip(keys, assignment))
        val = ev.ev(diagram)
        okey = tuple(ev.alpha[k] for k in open_keys)
        if okey in results:
            results[okey] = results[okey] + val
        else:
            results[okey] = val
    if open_keys:
        return OpenFamily(open_keys, results)
    return results[()]


# ---------------------------------------------------------------------- relations

RELATIONS = ('Bigon1', 'Bigon2', 'Fusion', 'I=H', 'TwoBigons')


def _w(*labels) -> str:
    return ','.join(labels)


def _bigon_pieces(ring, x, y, z, tag):
    """``B : z -> x y`` (L half) and ``T : x y -> z`` (R half) of the pair ``(x, y, zbar)``."""
    zb = ring.dual[z]
    B = f'(id({_w(x, y)}) ⊗ coev*({zb})) ∘ (node({x},{y},{zb};L;{tag}) ⊗ id({z}))'
    T = f'(id({z}) ⊗ ev({_w(x, y)})) ∘ (node({x},{y},{zb};R;{tag}) ⊗ id({_w(x, y)}))'
    return B, T


def _sum_expressions(skel, exprs, zero=None):
    total = zero
    for e in exprs:
        v = evaluate(e, skel, dual=skel.dual)
        total = v if total is None else total + v
    return total


def verify_relation(name: str, labels, skel: Skeleton) -> float:
    """Max entry-wise deviation between the two sides of a graphical-calculus relation.

    ``labels``: ``(x, y, z)`` for Bigon1/Bigon2, ``(x, y)`` for Fusion, ``(w, x, y, z)``
    for I=H and ``(x, y, j)`` for TwoBigons (``j`` the corner summed over).
    """
    ring = skel.ring
    d = skel.d
    if name == 'Bigon1':
        x, y, z = (ring.label(t) for t in labels)
        _check_bigon(ring, x, y, z)
        B, T = _bigon_pieces(ring, x, y, z, 'o')
        lhs = evaluate(f'{T} ∘ {B}', skel)
        rhs = np.sqrt(d[x] * d[y] / d[z]) * ring.Nabc(x, y, z) * skel.identity([z])
        return lhs.dist(rhs)
    if name == 'Bigon2':
        x, y, z = (ring.label(t) for t in labels)
        _check_bigon(ring, x, y, z)
        Bo, To = _bigon_pieces(ring, x, y, z, 'o')
        Bb, Tb = _bigon_pieces(ring, x, y, z, 'b')
        lhs = evaluate(f'({Tb} ∘ {Bo}) & ({Bb}) & ({To})', skel)
        rhs = np.sqrt(d[x] * d[y] / d[z]) * evaluate(f'id({z}) & ({Bo}) & ({To})', skel)
        return lhs.dist(rhs)
    if name == 'Fusion':
        x, y = (ring.label(t) for t in labels)
        if ring.right(x) != ring.left(y):
            raise InputError(f'Fusion needs composable labels, got ({x}, {y})')
        i, k = ring.left(x), ring.right(y)
        total = skel.zero([x, y], [x, y])
        for z in ring.corner_labels(i, k):
            B, T = _bigon_pieces(ring, x, y, z, 'o')
            total = total + np.sqrt(d[z]) * evaluate(f'{B} ∘ {T}', skel)
        return total.dist(np.sqrt(d[x] * d[y]) * skel.identity([x, y]))
    if name == 'I=H':
        w, x, y, z = (ring.label(t) for t in labels)
        i, j = ring.grade[w]
        j2, l = ring.grade[x]
        i2, k = ring.grade[y]
        k2, l2 = ring.grade[z]
        if not (j == j2 and i == i2 and k == k2 and l == l2):
            raise InputError(f'I=H labels {labels} are not grade compatible')
        lhs = None
        for v in ring.corner_labels(i, l):
            vb = ring.dual[v]
            TA = f'(id({v}) ⊗ ev({_w(w, x)})) ∘ (node({w},{x},{vb};R;o) ⊗ id({_w(w, x)}))'
            SA = f'(id({_w(y, z)}) ⊗ coev*({vb})) ∘ (node({y},{z},{vb};L;b) ⊗ id({v}))'
            wb_, xb_, yb_, zb_ = (ring.dual[t] for t in (w, x, y, z))
            TB = f'(ev({_w(w, x)}) ⊗ id({vb})) ∘ (id({_w(xb_, wb_)}) ⊗ node({w},{x},{vb};L;o))'
            SB = f'(coev*({vb}) ⊗ id({_w(zb_, yb_)})) ∘ (id({vb}) ⊗ node({y},{z},{vb};R;b))'
            val = evaluate(f'({SA} ∘ {TA}) & ({SB} ∘ {TB})', skel)
            lhs = val if lhs is None else lhs + val
        rhs = None
        for u in ring.corner_labels(j, k):
            ub = ring.dual[u]
            wb_, xb_, yb_, zb_ = (ring.dual[t] for t in (w, x, y, z))
            R = (f'(coev*({ub}) ⊗ id({z}) ⊗ ev({x})) ∘ '
                 f'(id({ub}) ⊗ node({x},{zb_},{ub};R;o) ⊗ id({x}))')
            Lp = f'(id({_w(y, ub)}) ⊗ ev({w})) ∘ (node({w},{u},{yb_};R;b) ⊗ id({w}))'
            # the y and z legs leave as double duals; bring them back with the pivotal
            A = f'piv*({_w(y, z)}) ∘ (id({y}) ⊗ ({R})) ∘ (({Lp}) ⊗ id({x}))'
            LB = f'(ev({x}) ⊗ id({_w(zb_, ub)})) ∘ (id({xb_}) ⊗ node({x},{zb_},{ub};L;o))'
            RB = f'(ev({_w(w, u)}) ⊗ id({yb_})) ∘ (id({_w(ub, wb_)}) ⊗ node({w},{u},{yb_};L;b))'
            Bp = f'(id({zb_}) ⊗ ({RB})) ∘ (({LB}) ⊗ id({wb_}))'
            val = evaluate(f'({A}) & ({Bp})', skel)
            rhs = val if rhs is None else rhs + val
        if lhs is None or rhs is None:
            # an empty corner: both sides vanish identically
            return 0.0 if (lhs is None and rhs is None) else (lhs or rhs).max_abs()
        return lhs.dist(rhs)
    if name == 'TwoBigons':
        x, y = (ring.label(t) for t in labels[:2])
        j = int(labels[2])
        if ring.grade[x] != ring.grade[y]:
            raise InputError(f'TwoBigons needs x, y in the same corner, got ({x}, {y})')
        i, k = ring.grade[x]
        xb, yb = ring.dual[x], ring.dual[y]
        total = None
        for a in ring.corner_labels(i, j):
            for b in ring.corner_labels(j, k):
                ab, bb = ring.dual[a], ring.dual[b]
                B = f'(id({_w(a, b)}) ⊗ coev*({xb})) ∘ (node({a},{b},{xb};L;o) ⊗ id({x}))'
                T = f'(id({y}) ⊗ ev({_w(a, b)})) ∘ (node({a},{b},{yb};R;b) ⊗ id({_w(a, b)}))'
                S2 = f'(coev*({xb}) ⊗ id({_w(bb, ab)})) ∘ (id({xb}) ⊗ node({a},{b},{xb};R;o))'
                M2 = f'(ev({_w(a, b)}) ⊗ id({yb})) ∘ (id({_w(bb, ab)}) ⊗ node({a},{b},{yb};L;b))'
                val = evaluate(f'({T} ∘ {B}) & ({M2} ∘ {S2})', skel)
                total = val if total is None else total + val
        D = skel.D if skel.D is not None else sum(skel.d[c] ** 2 for c in ring.corner_labels(i, j))
        target = evaluate(f'id({x}) & id({xb})', skel)
        if total is None:
            return 0.0
        if x != y:
            return total.max_abs()
        return total.dist(D * target)
    raise InputError(f'unknown relation {name!r}; known: {", ".join(RELATIONS)}')


def _check_bigon(ring, x, y, z):
    if not (ring.right(x) == ring.left(y) and ring.grade[z] == (ring.left(x), ring.right(y))):
        raise InputError(f'labels ({x}, {y}, {z}) are not grade admissible')


def relation_tuples(name: str, skel: Skeleton) -> list:
    """All admissible label tuples of a relation."""
    ring = skel.ring
    L = ring.labels
    if name in ('Bigon1', 'Bigon2'):
        return [(x, y, z) for x in L for y in L for z in L
                if ring.right(x) == ring.left(y) and ring.grade[z] == (ring.left(x), ring.right(y))]
    if name == 'Fusion':
        return [(x, y) for x in L for y in L if ring.right(x) == ring.left(y)]
    if name == 'I=H':
        return [(w, x, y, z) for w in L for x in L for y in L for z in L
                if ring.right(w) == ring.left(x) and ring.left(y) == ring.left(w)
                and ring.right(y) == ring.left(z) and ring.right(z) == ring.right(x)]
    if name == 'TwoBigons':
        return [(x, y, j) for x in L for y in L for j in ring.corner_ids
                if ring.grade[x] == ring.grade[y]]
    raise InputError(f'unknown relation {name!r}')


def relation_sweep(skel: Skeleton, names=RELATIONS) -> dict:
    """Max residual and worst tuple of every relation over all admissible tuples."""
    out = {}
    for name in names:
        worst, wit = 0.0, None
        for t in relation_tuples(name, skel):
            r = verify_relation(name, t, skel)
            if r >= worst:
                worst, wit = r, t
        out[name] = {'residual': worst, 'witness': list(wit) if wit else None,
                     'count': len(relation_tuples(name, skel))}
    return out
