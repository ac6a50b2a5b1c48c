"""The dual resolution, the tensor bicomplex P (x) Q-bar and the chain maps j_0, j_1, j_2.

For a normalized aspherical presentation <X | R> the free resolution is

    P_2 = <p_r>  ->  P_1 = <p_x>  ->  P_0 = <p0>,   d p_x = (x - 1) p0,
                                                    d p_r = sum_x r_x p_x,

and its conjugate dual is

    Q_2 = <1*>  ->  Q_1 = <q_x>  ->  Q_0 = <q_r>,   d 1* = sum_x (x^-1 - 1) q_x,
                                                    d q_x = sum_r conj(r_x) q_r.

The involution here is always the untwisted one, g -> g^-1 (the chain-level
identities only involve w = 1).  Tensor products carry the diagonal action
g (a (x) b) = g a (x) g b and the Koszul sign d(a (x) b) = da (x) b + (-1)^|a| a (x) db.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError, NotAsphericalError, NotNormalizedError
from .fox import Presentation, fox_derivative
from .groupring import RingElement, RingMatrix, involute, mat_mul
from .words import GroupClass, _engine, mul_norms, norm_key, word_of

# key: ((p, q), (i, j), (u, v)) with u, v canonical norms
TensorKey = tuple[tuple[int, int], tuple[int, int], tuple[object, object]]


class TensorElement:
    """A Z-combination of u.a_i (x) v.b_j with a_i in P_p and b_j in Q_q."""

    __slots__ = ("group", "terms")

    def __init__(self, group: GroupClass, terms=()):
        self.group = group
        acc: dict = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        self.terms = {k: c for k, c in acc.items() if c}

    @classmethod
    def basis(cls, group: GroupClass, p: int, i: int, q: int, j: int, u=None, v=None, c: int = 1) -> TensorElement:
        one = _engine(group).identity
        return cls(group, {((p, q), (i, j), (one if u is None else u, one if v is None else v)): c})

    @classmethod
    def from_left(cls, coef: RingElement, p: int, i: int, q: int, j: int) -> TensorElement:
        """coef.a_i (x) b_j: the ring element acts on the left factor only."""
        one = _engine(coef.group).identity
        return cls(coef.group, [(((p, q), (i, j), (n, one)), c) for n, c in coef.terms.items()])

    @classmethod
    def from_right(cls, coef: RingElement, p: int, i: int, q: int, j: int) -> TensorElement:
        """a_i (x) coef.b_j: the ring element acts on the right factor only."""
        one = _engine(coef.group).identity
        return cls(coef.group, [(((p, q), (i, j), (one, n)), c) for n, c in coef.terms.items()])

    def __add__(self, other: TensorElement) -> TensorElement:
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return TensorElement(self.group, acc)

    def __neg__(self):
        return TensorElement(self.group, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def act(self, x: RingElement) -> TensorElement:
        """Diagonal action of a ring element."""
        g = self.group
        acc: dict = {}
        for n, a in x.terms.items():
            for (deg, idx, (u, v)), c in self.terms.items():
                k = (deg, idx, (mul_norms(g, n, u), mul_norms(g, n, v)))
                acc[k] = acc.get(k, 0) + a * c
        return TensorElement(g, acc)

    def component(self, p: int, q: int) -> TensorElement:
        return TensorElement(self.group, {k: c for k, c in self.terms.items() if k[0] == (p, q)})

    def sorted_terms(self):
        g = self.group
        return sorted(
            self.terms.items(),
            key=lambda kc: (kc[0][0], kc[0][1], norm_key(g, kc[0][2][0]), norm_key(g, kc[0][2][1])),
        )


# ----------------------------------------------------------------------------
# complexes


def _r_x_free(p: Presentation) -> list[list[RingElement]]:
    """dr/dx in Z[F(X)], indexed [relator][generator]."""
    F = p.free_group
    return [[fox_derivative(r, x, F) for x in range(p.ngens)] for r in p.relators]


@dataclass(frozen=True)
class DualComplex:
    """Q-bar: ``d_top`` is 1 x g (coefficients of q_x in d 1*), ``d_mid`` is g x r."""

    presentation: Presentation
    d_top: RingMatrix
    d_mid: RingMatrix

    def composite(self) -> RingMatrix:
        return mat_mul(self.d_top, self.d_mid)


def _check_input(p: Presentation) -> None:
    p.group.require_decidable()
    if not p.aspherical:
        raise NotAsphericalError()
    if not p.is_normalized():
        raise NotNormalizedError("presentation not normalized: relators must be products of distinct generators")


def dual_complex(p: Presentation) -> DualComplex:
    _check_input(p)
    g = p.group
    top = [RingElement.of(~p.generator(x)) - 1 for x in range(p.ngens)]
    free = _r_x_free(p)
    mid = [[involute(p.phi(free[r][x])) for r in range(len(p.relators))] for x in range(p.ngens)]
    return DualComplex(p, RingMatrix(g, [top], p.ngens), RingMatrix(g, mid, len(p.relators)))


@dataclass(frozen=True)
class Bicomplex:
    """Differentials of P and Q-bar as row-indexed matrices: d(b_i) = sum_k D[i][k] b'_k."""

    presentation: Presentation
    p_diff: dict
    q_diff: dict

    @classmethod
    def build(cls, p: Presentation, dual: DualComplex | None = None) -> Bicomplex:
        dual = dual or dual_complex(p)
        g = p.group
        d1 = RingMatrix(g, [[RingElement.of(p.generator(x)) - 1] for x in range(p.ngens)], 1)
        free = _r_x_free(p)
        d2 = RingMatrix(g, [[p.phi(free[r][x]) for x in range(p.ngens)] for r in range(len(p.relators))], p.ngens)
        return cls(p, {1: d1, 2: d2}, {2: dual.d_top, 1: dual.d_mid})

    def differential(self, t: TensorElement) -> TensorElement:
        g = t.group
        acc: dict = {}
        for ((p, q), (i, j), (u, v)), c in t.terms.items():
            if p > 0:
                for k, coef in enumerate(self.p_diff[p].rows[i]):
                    for n, a in coef.terms.items():
                        key = ((p - 1, q), (k, j), (mul_norms(g, u, n), v))
                        acc[key] = acc.get(key, 0) + c * a
            if q > 0:
                sign = -1 if p % 2 else 1
                for l, coef in enumerate(self.q_diff[q].rows[j]):
                    for n, a in coef.terms.items():
                        key = ((p, q - 1), (i, l), (u, mul_norms(g, v, n)))
                        acc[key] = acc.get(key, 0) + sign * c * a
        return TensorElement(g, acc)


# ----------------------------------------------------------------------------
# the chain maps


@dataclass(frozen=True)
class JMaps:
    presentation: Presentation
    j0: tuple[TensorElement, ...]
    j1: tuple[TensorElement, ...]
    j2: TensorElement
    second_derivatives: dict = field(default_factory=dict, compare=False, repr=False)

    def apply(self, degree: int, row) -> TensorElement:
        """Extend j_degree Z[pi]-linearly to sum_k row[k] b_k."""
        images = {0: self.j0, 1: self.j1, 2: (self.j2,)}[degree]
        acc = TensorElement(self.presentation.group)
        for k, coef in enumerate(row):
            if coef:
                acc = acc + images[k].act(coef)
        return acc


def _monomial_derivative(p: Presentation, rx: RingElement, r: int, x: int) -> RingElement | None:
    if rx.is_zero():
        return None
    mono = rx.monomial()
    if mono is None or mono[0] != 1:
        raise NotNormalizedError(
            f"presentation not normalized: d({p.format_relator(p.relators[r])})/d{p.generators[x]} is not a single word"
        )
    return rx


def build_j(p: Presentation) -> JMaps:
    """j_0(q_r) = 1 (x) q_r,
    j_1(q_x) = 1 (x) q_x - sum_{r,y} conj(r_x) (d r_x/d y . p_y (x) q_r),
    j_2(1*) = 1 (x) 1* - sum_x x^-1 (p_x (x) q_x) - sum_r p_r (x) q_r.

    Second derivatives d r_x / d y are taken in Z[F(X)] before mapping to pi.
    """
    _check_input(p)
    g = p.group
    F = p.free_group
    free = _r_x_free(p)
    nrel = len(p.relators)
    j0 = tuple(TensorElement.basis(g, 0, 0, 0, r) for r in range(nrel))
    j1 = []
    second: dict = {}
    for x in range(p.ngens):
        acc = TensorElement.basis(g, 0, 0, 1, x)
        for r in range(nrel):
            rx = _monomial_derivative(p, free[r][x], r, x)
            if rx is None:
                continue
            conj_rx = involute(p.phi(rx))
            for y in range(p.ngens):
                d2 = fox_derivative(rx, y, F)
                second[(r, x, y)] = d2
                if d2:
                    acc = acc - TensorElement.from_left(p.phi(d2), 1, y, 0, r).act(conj_rx)
        j1.append(acc)
    j2 = TensorElement.basis(g, 0, 0, 2, 0)
    for x in range(p.ngens):
        xinv = RingElement.of(~p.generator(x))
        j2 = j2 - TensorElement.basis(g, 1, x, 1, x).act(xinv)
    for r in range(nrel):
        j2 = j2 - TensorElement.basis(g, 2, r, 0, r)
    return JMaps(p, j0, tuple(j1), j2, second)


@dataclass(frozen=True)
class ChainMapReport:
    presentation: Presentation
    degree1: tuple[TensorElement, ...]  # per generator x: d j1(q_x) - j0(d q_x)
    degree2: TensorElement  # d j2(1*) - j1(d 1*)
    relator_summands: tuple[TensorElement, ...]

    @property
    def degree1_ok(self) -> bool:
        return all(t.is_zero() for t in self.degree1)

    @property
    def degree2_ok(self) -> bool:
        return self.degree2.is_zero()

    @property
    def summands_ok(self) -> bool:
        return all(t.is_zero() for t in self.relator_summands)

    @property
    def ok(self) -> bool:
        return self.degree1_ok and self.degree2_ok and self.summands_ok


def relator_summand(p: Presentation, j: JMaps, r: int) -> TensorElement:
    """The part of d j2(1*) - j1(d 1*) belonging to relator r, from its closed form

        sum_x [ x^-1 (p_x (x) conj(r_x) q_r) - r_x p_x (x) q_r
                + sum_y (x^-1 - 1) conj(r_x) (d r_x/d y . p_y (x) q_r) ].
    """
    g = p.group
    free = _r_x_free(p)
    acc = TensorElement(g)
    for x in range(p.ngens):
        rx_free = free[r][x]
        if rx_free.is_zero():
            continue
        rx = p.phi(rx_free)
        conj_rx = involute(rx)
        xinv = RingElement.of(~p.generator(x))
        acc = acc + TensorElement.from_right(conj_rx, 1, x, 0, r).act(xinv)
        acc = acc - TensorElement.from_left(rx, 1, x, 0, r)
        for y in range(p.ngens):
            d2 = j.second_derivatives.get((r, x, y))
            if d2 is None:
                d2 = fox_derivative(rx_free, y, p.free_group)
            if d2:
                acc = acc + TensorElement.from_left(p.phi(d2), 1, y, 0, r).act((xinv - 1) * conj_rx)
    return acc


def verify_chain_map(j: JMaps, p: Presentation | None = None, bicomplex: Bicomplex | None = None) -> ChainMapReport:
    p = p or j.presentation
    bc = bicomplex or Bicomplex.build(p)
    deg1 = tuple(
        bc.differential(j.j1[x]) - j.apply(0, bc.q_diff[1].rows[x]) for x in range(p.ngens)
    )
    deg2 = bc.differential(j.j2) - j.apply(1, bc.q_diff[2].rows[0])
    summands = tuple(relator_summand(p, j, r) for r in range(len(p.relators)))
    return ChainMapReport(p, deg1, deg2, summands)


def evaluate_cocycle_pair(j: JMaps, xi: dict[int, RingElement]) -> dict[int, RingElement]:
    """(xi (x) eta)(j_2(1*)) restricted to the P_2 (x) Q_0 part.

    ``xi`` gives xi(p_r) for each relator r; the result maps r to the
    coefficient c_r in sum_r c_r (x) eta(q_r).
    """
    g = j.presentation.group
    nrel = len(j.presentation.relators)
    bad = [k for k in xi if not 0 <= k < nrel]
    if bad:
        raise InputError(f"relator indices {bad} out of range for {nrel} relators")
    one = _engine(g).identity
    out: dict[int, RingElement] = {}
    for ((p, q), (i, k), (u, v)), c in j.j2.component(2, 0).terms.items():
        if v != one:
            raise ValueError("unexpected group coefficient on the Q_0 factor")
        val = xi.get(i)
        if val is None or val.is_zero():
            continue
        term = RingElement(g, {u: c}) * val
        out[k] = out.get(k, RingElement.zero(g)) + term
    return {k: v for k, v in sorted(out.items()) if v}



# ----------------------------------------------------------------------------
# rendering


def basis_name(p: Presentation, deg: int, idx: int, side: str) -> str:
    if side == "P":
        if deg == 0:
            return "p0"
        if deg == 1:
            return f"p1[{p.generators[idx]}]"
        return f"p2[r{idx + 1}]"
    if deg == 2:
        return "1*"
    if deg == 1:
        return f"q1[{p.generators[idx]}]"
    return f"q0[r{idx + 1}]"


def render_term(p: Presentation, key: TensorKey, c: int) -> str:
    (dp, dq), (i, j), (u, v) = key
    g = p.group
    us = word_of(g, u).format(g.names, sep=".")
    vs = word_of(g, v).format(g.names, sep=".")
    return f"({us}·{basis_name(p, dp, i, 'P')} ⊗ {vs}·{basis_name(p, dq, j, 'Q')}) × {c}"


def render(p: Presentation, t: TensorElement) -> list[str]:
    return [render_term(p, k, c) for k, c in t.sorted_terms()]
