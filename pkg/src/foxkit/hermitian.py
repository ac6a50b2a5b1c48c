"""w-hermitean pairings on free modules and the map B_M out of Gamma coinvariants."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotHermitianError, ShapeError, UnsupportedGroupError
from .gamma import GammaElement, unit_vector
from .groupring import OrientationCharacter, RingElement, RingMatrix, augment, conjugate_transpose, involute, mat_mul
from .words import _engine, inv_norm, norm_key


@dataclass(frozen=True)
class HermitianForm:
    """H[i][j] = b(e_i*, e_j*) for a w-hermitean pairing b on the dual of Z[pi]^rank."""

    matrix: RingMatrix
    w: OrientationCharacter

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise ShapeError("a hermitean form needs a square matrix")
        if self.w.group != self.matrix.group:
            raise ShapeError("orientation character is for a different class")
        if conjugate_transpose(self.matrix, self.w) != self.matrix:
            raise NotHermitianError("matrix is not w-hermitean: H* != H")

    @property
    def rank(self) -> int:
        return self.matrix.nrows

    @property
    def group(self):
        return self.matrix.group

    def __getitem__(self, ij):
        return self.matrix[ij]

    def to_json(self) -> dict:
        return {"rank": self.rank, "entries": self.matrix.to_text()}

    @classmethod
    def from_json(cls, group, data: dict, w: OrientationCharacter | None = None) -> HermitianForm:
        w = w or OrientationCharacter.trivial(group)
        m = RingMatrix.parse(group, data["entries"])
        if "rank" in data and int(data["rank"]) != m.nrows:
            raise ShapeError("declared rank disagrees with the entries")
        return cls(m, w)


def bm_evaluate(x: GammaElement) -> HermitianForm:
    """B_M(x) evaluated on the dual basis.

    eta(m) contributes conj(m_k) m_l and [m, m'] contributes
    conj(m_k) m'_l + conj(m'_k) m_l to entry (k, l).
    """
    g, r, w = x.group, x.rank, x.w
    acc = [[RingElement.zero(g) for _ in range(r)] for _ in range(r)]
    for c, v in x.gamma_terms:
        cv = [involute(e, w) for e in v]
        for k in range(r):
            if not cv[k]:
                continue
            for l in range(r):
                if v[l]:
                    acc[k][l] = acc[k][l] + cv[k] * v[l] * c
    for c, m, n in x.odot_terms:
        cm = [involute(e, w) for e in m]
        cn = [involute(e, w) for e in n]
        for k in range(r):
            for l in range(r):
                if cm[k] and n[l]:
                    acc[k][l] = acc[k][l] + cm[k] * n[l] * c
                if cn[k] and m[l]:
                    acc[k][l] = acc[k][l] + cn[k] * m[l] * c
    return HermitianForm(RingMatrix(g, acc, r), w)


def decompose_diagonal(h: RingElement, w: OrientationCharacter) -> tuple[int, int, RingElement]:
    """Write a self-conjugate h as 2b + delta + sum_g c_g (g + conj g).

    Returns (b, delta, s) with s = sum_g c_g g over one kept element of each
    pair {g, g^-1} (the shortlex-smaller one), so h = 2b + delta + s + conj(s).
    """
    grp = h.group
    one = _engine(grp).identity
    c1 = h.terms.get(one, 0)
    b, delta = divmod(c1, 2)
    kept = {}
    for n, c in h.terms.items():
        if n == one:
            continue
        ninv = inv_norm(grp, n)
        if ninv == n:
            raise UnsupportedGroupError("element of order 2 in a diagonal entry")
        if norm_key(grp, n) < norm_key(grp, ninv):
            if h.terms.get(ninv, 0) != w.of_norm(n) * c:
                raise NotHermitianError("diagonal entry is not self-conjugate")
            kept[n] = c
    return b, delta, RingElement(grp, kept)


def bm_preimage(form: HermitianForm) -> GammaElement:
    """A Gamma element x with bm_evaluate(x) == form.

    Diagonal h_ii = 2b + delta + sum c_g (g + conj g) gives
    [(b + sum c_g g) e_i, e_i] + delta eta(e_i); an off-diagonal h_ij (i < j)
    gives [e_i, h_ij e_j], written as [conj(h_ij) e_i, e_j].
    """
    g, r, w = form.group, form.rank, form.w
    g.require_decidable()
    if not g.torsion_free:
        raise UnsupportedGroupError("preimages need a class without orientation-preserving 2-torsion")
    gamma_terms, odot_terms = [], []
    for i in range(r):
        b, delta, s = decompose_diagonal(form[i, i], w)
        coef = s + b
        if coef:
            odot_terms.append((1, unit_vector(g, r, i, coef), unit_vector(g, r, i)))
        if delta:
            gamma_terms.append((1, unit_vector(g, r, i)))
        for j in range(i + 1, r):
            if form[i, j]:
                odot_terms.append((1, unit_vector(g, r, i, involute(form[i, j], w)), unit_vector(g, r, j)))
    return GammaElement(g, r, gamma_terms, odot_terms, w)


def is_even(form: HermitianForm) -> bool:
    """True iff every diagonal entry has even augmentation."""
    return all(augment(form[i, i]) % 2 == 0 for i in range(form.rank))


def transform(form: HermitianForm, u: RingMatrix) -> HermitianForm:
    """U H U*."""
    if u.shape != (form.rank, form.rank):
        raise ShapeError(f"base change {u.shape} does not match rank {form.rank}")
    return HermitianForm(mat_mul(mat_mul(u, form.matrix), conjugate_transpose(u, form.w)), form.w)
