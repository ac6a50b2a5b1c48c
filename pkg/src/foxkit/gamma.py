"""Coinvariants of the Whitehead quadratic functor on a free Z[pi]-module.

Elements of Z^w (x)_{Z[pi]} Gamma_W(M), M = Z[pi]^r, are kept as formal sums
of eta(m) terms (images of gamma(m)) and [m, m'] terms (images of m (.) m').
The canonical form is

    sum_i delta_i eta(e_i) + sum_{i <= j} [r_ij e_i, e_j],   delta_i in {0, 1},

with each diagonal r_ii reduced modulo the span of {g - conj(g)}.  The
relations used are

    eta(m + m') = eta(m) + eta(m') + [m, m'],   eta(c g m) = c^2 w(g) eta(m),
    [g m, g m'] = w(g) [m, m'],   [m, m'] = [m', m],   2 eta(m) = [m, m].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError, ShapeError, UnsupportedGroupError
from .groupring import OrientationCharacter, RingElement, RingMatrix, augment, ring_mul
from .words import GroupClass, _engine, inv_norm, norm_key

Vector = tuple[RingElement, ...]


def unit_vector(group: GroupClass, rank: int, i: int, coef: RingElement | None = None) -> Vector:
    z = RingElement.zero(group)
    return tuple((coef if coef is not None else RingElement.one(group)) if k == i else z for k in range(rank))


def _vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


class GammaElement:
    """A formal Z-combination of eta(m) and [m, m'] terms over Z[pi]^rank."""

    __slots__ = ("group", "w", "rank", "gamma_terms", "odot_terms")

    def __init__(
        self,
        group: GroupClass,
        rank: int,
        gamma_terms: Iterable[tuple[int, Vector]] = (),
        odot_terms: Iterable[tuple[int, Vector, Vector]] = (),
        w: OrientationCharacter | None = None,
    ):
        self.group = group
        self.rank = rank
        self.w = w if w is not None else OrientationCharacter.trivial(group)
        if self.w.group != group:
            raise InputError("orientation character is for a different class")
        self.gamma_terms = tuple((int(c), tuple(v)) for c, v in gamma_terms if c)
        self.odot_terms = tuple((int(c), tuple(m), tuple(n)) for c, m, n in odot_terms if c)
        for _, v in self.gamma_terms:
            self._check_vec(v)
        for _, m, n in self.odot_terms:
            self._check_vec(m)
            self._check_vec(n)

    def _check_vec(self, v):
        if len(v) != self.rank:
            raise ShapeError(f"vector of extent {len(v)} in a rank {self.rank} element")
        for e in v:
            if e.group != self.group:
                raise InputError("vector coordinate over a different class")

    @classmethod
    def zero(cls, group, rank, w=None) -> GammaElement:
        return cls(group, rank, w=w)

    @classmethod
    def eta(cls, v: Sequence[RingElement], coef: int = 1, w=None) -> GammaElement:
        v = tuple(v)
        return cls(v[0].group, len(v), [(coef, v)], w=w)

    @classmethod
    def odot(cls, m: Sequence[RingElement], n: Sequence[RingElement], coef: int = 1, w=None) -> GammaElement:
        m, n = tuple(m), tuple(n)
        return cls(m[0].group, len(m), (), [(coef, m, n)], w=w)

    def _like(self, gamma_terms, odot_terms) -> GammaElement:
        return GammaElement(self.group, self.rank, gamma_terms, odot_terms, self.w)

    def __add__(self, other: GammaElement) -> GammaElement:
        if (self.group, self.rank, self.w) != (other.group, other.rank, other.w):
            raise ShapeError("adding Gamma elements over different modules")
        return self._like(self.gamma_terms + other.gamma_terms, self.odot_terms + other.odot_terms)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c: int) -> GammaElement:
        return self._like([(a * c, v) for a, v in self.gamma_terms], [(a * c, m, n) for a, m, n in self.odot_terms])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, GammaElement)
            and self.group == other.group
            and self.rank == other.rank
            and self.gamma_terms == other.gamma_terms
            and self.odot_terms == other.odot_terms
        )

    def __hash__(self):
        return hash((self.rank, self.gamma_terms, self.odot_terms))

    def is_empty(self) -> bool:
        return not self.gamma_terms and not self.odot_terms

    def __repr__(self):
        return f"GammaElement({to_json(self)!r})"


@dataclass(frozen=True)
class Mod2Vector:
    """A vector in F_2 (x)_{Z[pi]} M = F_2^rank."""

    bits: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.bits)

    def __add__(self, other):
        return Mod2Vector(tuple((a + b) % 2 for a, b in zip(self.bits, other.bits)))


# ----------------------------------------------------------------------------
# canonical reduction


def _monomials(v: Vector):
    for i, x in enumerate(v):
        for n, c in x.terms.items():
            yield i, n, c


class _Collector:
    """Accumulates delta counts and the upper-triangular odot coefficients."""

    def __init__(self, group: GroupClass, w: OrientationCharacter, rank: int):
        self.group, self.w, self.rank = group, w, rank
        self.delta = [0] * rank
        self.upper: dict[tuple[int, int], dict] = {}
        self.one = _engine(group).identity

    def odot_monomial(self, c: int, i: int, g, j: int, h) -> None:
        """Add c [g e_i, h e_j]."""
        grp, w = self.group, self.w
        if i <= j:
            # [g e_i, h e_j] = w(h) [h^-1 g e_i, e_j]
            k = _engine(grp).mul(inv_norm(grp, h), g)
            sign = w.of_norm(h)
        else:
            # [g e_i, h e_j] = [h e_j, g e_i] = w(g) [g^-1 h e_j, e_i]
            i, j = j, i
            k = _engine(grp).mul(inv_norm(grp, g), h)
            sign = w.of_norm(g)
        if i == j:
            kinv = inv_norm(grp, k)
            if norm_key(grp, kinv) < norm_key(grp, k):
                # [k e, e] = w(k) [k^-1 e, e]
                sign *= w.of_norm(k)
                k = kinv
        slot = self.upper.setdefault((i, j), {})
        slot[k] = slot.get(k, 0) + sign * c

    def eta(self, c: int, v: Vector) -> None:
        mons = list(_monomials(v))
        for i, g, a in mons:
            self.delta[i] += c * a * a * self.w.of_norm(g)
        for p in range(len(mons)):
            i, g, a = mons[p]
            for q in range(p + 1, len(mons)):
                j, h, b = mons[q]
                self.odot_monomial(c * a * b, i, g, j, h)

    def odot(self, c: int, m: Vector, n: Vector) -> None:
        for i, g, a in _monomials(m):
            for j, h, b in _monomials(n):
                self.odot_monomial(c * a * b, i, g, j, h)

    def finish(self) -> tuple[tuple[int, ...], dict[tuple[int, int], RingElement]]:
        delta = []
        for i, d in enumerate(self.delta):
            r = d % 2
            delta.append(r)
            q = (d - r) // 2
            if q:
                slot = self.upper.setdefault((i, i), {})
                slot[self.one] = slot.get(self.one, 0) + q
        upper = {}
        for key in sorted(self.upper):
            x = RingElement(self.group, self.upper[key])
            if x:
                upper[key] = x
        return tuple(delta), upper


def gamma_coordinates(x: GammaElement) -> tuple[tuple[int, ...], dict[tuple[int, int], RingElement]]:
    """(delta, {(i, j): r_ij}) of the canonical form."""
    x.group.require_decidable()
    if not x.group.torsion_free:
        raise UnsupportedGroupError("canonical forms need a torsion-free class")
    col = _Collector(x.group, x.w, x.rank)
    for c, v in x.gamma_terms:
        col.eta(c, v)
    for c, m, n in x.odot_terms:
        col.odot(c, m, n)
    return col.finish()


def gamma_normal_form(x: GammaElement) -> GammaElement:
    delta, upper = gamma_coordinates(x)
    g, r = x.group, x.rank
    gamma_terms = [(1, unit_vector(g, r, i)) for i, d in enumerate(delta) if d]
    odot_terms = [(1, unit_vector(g, r, i, coef), unit_vector(g, r, j)) for (i, j), coef in upper.items()]
    return GammaElement(g, r, gamma_terms, odot_terms, x.w)


def is_zero(x: GammaElement) -> bool:
    delta, upper = gamma_coordinates(x)
    return not any(delta) and not upper


def gamma_equal(x: GammaElement, y: GammaElement) -> bool:
    return is_zero(x - y)


def reduce_mod2(x: GammaElement) -> Mod2Vector:
    """Image in F_2^rank: [m, m'] terms vanish, eta(m) maps to eps(m) mod 2."""
    bits = [0] * x.rank
    for c, v in x.gamma_terms:
        for i, xi in enumerate(v):
            bits[i] += c * augment(xi)
    return Mod2Vector(tuple(b % 2 for b in bits))


# ----------------------------------------------------------------------------
# the automorphism alpha_theta(m, e) = (m, e + theta(m)) of M + E


def apply_module_map(m: Vector, theta: RingMatrix) -> Vector:
    """theta(m) for a row vector m, i.e. m . Theta."""
    if len(m) != theta.nrows:
        raise ShapeError(f"vector of extent {len(m)} against a {theta.shape} matrix")
    out = []
    for j in range(theta.ncols):
        acc = RingElement.zero(theta.group)
        for i in range(theta.nrows):
            if m[i] and theta[i, j]:
                acc = acc + ring_mul(m[i], theta[i, j])
        out.append(acc)
    return tuple(out)


def apply_alpha_theta(x: GammaElement, theta: RingMatrix, m_rank: int | None = None) -> GammaElement:
    """Gamma_W(alpha_theta) on an element over M + E (M the first ``m_rank`` coordinates).

    A gamma term on (m, e) expands as
    eta(m) + eta(e + theta(m)) + [m, e + theta(m)], which for e = 0 is
    gamma(m) + gamma(theta(m)) + m (x) theta(m).
    """
    rm = theta.nrows if m_rank is None else m_rank
    re_ = x.rank - rm
    if theta.shape != (rm, re_):
        raise ShapeError(f"theta has shape {theta.shape}, splitting needs ({rm}, {re_})")
    zm = (RingElement.zero(x.group),) * rm
    ze = (RingElement.zero(x.group),) * re_

    def alpha(v: Vector) -> Vector:
        return v[:rm] + _vec_add(v[rm:], apply_module_map(v[:rm], theta))

    gamma_terms, odot_terms = [], []
    for c, v in x.gamma_terms:
        m_part = v[:rm] + ze
        e_part = zm + alpha(v)[rm:]
        gamma_terms.append((c, m_part))
        gamma_terms.append((c, e_part))
        odot_terms.append((c, m_part, e_part))
    for c, m, n in x.odot_terms:
        odot_terms.append((c, alpha(m), alpha(n)))
    return GammaElement(x.group, x.rank, gamma_terms, odot_terms, x.w)


def gamma_free_rank(r: int, group: GroupClass | None = None) -> int:
    """Rank of Gamma_W(Z^r) = r(r+1)/2 (trivial group only)."""
    if group is not None and not group.is_trivial:
        raise UnsupportedGroupError("gamma_free_rank is defined for the trivial group only")
    if r < 0:
        raise InputError("rank must be nonnegative")
    return r * (r + 1) // 2


# ----------------------------------------------------------------------------
# JSON


def _vec_json(v: Vector) -> list[str]:
    return [e.to_text() for e in v]


def to_json(x: GammaElement) -> dict:
    def gam(c, v):
        return _vec_json(v) if c == 1 else {"coef": c, "vector": _vec_json(v)}

    def od(c, m, n):
        return [_vec_json(m), _vec_json(n)] if c == 1 else {"coef": c, "pair": [_vec_json(m), _vec_json(n)]}

    return {
        "rank": x.rank,
        "gamma": [gam(c, v) for c, v in x.gamma_terms],
        "odot": [od(c, m, n) for c, m, n in x.odot_terms],
    }


def from_json(group: GroupClass, data: dict, w: OrientationCharacter | None = None) -> GammaElement:
    rank = int(data["rank"])

    def vec(raw) -> Vector:
        v = tuple(RingElement.parse(group, str(s)) for s in raw)
        if len(v) != rank:
            raise ShapeError(f"vector {raw!r} does not have extent {rank}")
        return v

    gamma_terms, odot_terms = [], []
    for item in data.get("gamma", []):
        if isinstance(item, dict):
            gamma_terms.append((int(item.get("coef", 1)), vec(item["vector"])))
        else:
            gamma_terms.append((1, vec(item)))
    for item in data.get("odot", []):
        if isinstance(item, dict):
            m, n = item["pair"]
            odot_terms.append((int(item.get("coef", 1)), vec(m), vec(n)))
        else:
            m, n = item
            odot_terms.append((1, vec(m), vec(n)))
    return GammaElement(group, rank, gamma_terms, odot_terms, w)
