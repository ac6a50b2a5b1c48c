"""Exact arithmetic in the integral group ring Z[pi] and matrices over it."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ClassMismatchError, InputError, ShapeError
from .words import (
    FreeWord,
    GroupClass,
    GroupElement,
    _engine,
    inv_norm,
    mul_norms,
    norm_key,
    normalize_word,
    word_of,
)


@dataclass(frozen=True)
class OrientationCharacter:
    """A homomorphism w: pi -> {+1, -1}, given on the class generators."""

    group: GroupClass
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != self.group.ngens:
            raise InputError(f"orientation character needs {self.group.ngens} signs")
        if any(s not in (1, -1) for s in self.signs):
            raise InputError("orientation character values must be +1 or -1")
        for r in self.group.defining_relators():
            if self.of_word(r) != 1:
                raise InputError(
                    f"w is not a homomorphism: relator {r.format(self.group.names)} evaluates to -1"
                )

    @classmethod
    def trivial(cls, group: GroupClass) -> OrientationCharacter:
        return cls(group, (1,) * group.ngens)

    @classmethod
    def from_mapping(cls, group: GroupClass, values: Mapping[str, int]) -> OrientationCharacter:
        index = {n: i for i, n in enumerate(group.names)}
        signs = [1] * group.ngens
        for name, v in values.items():
            if name not in index:
                raise InputError(f"w assigns a value to unknown generator {name!r}")
            signs[index[name]] = v
        return cls(group, tuple(signs))

    @property
    def is_trivial(self) -> bool:
        return all(s == 1 for s in self.signs)

    def of_word(self, word: FreeWord) -> int:
        neg = sum(1 for g, _ in word if self.signs[g] == -1)
        return -1 if neg % 2 else 1

    def __call__(self, g: GroupElement) -> int:
        return self.of_norm(g.norm)

    def of_norm(self, norm) -> int:
        return self.of_word(word_of(self.group, norm))


class RingElement:
    """A finite integer combination of group elements, keyed by canonical norm."""

    __slots__ = ("group", "terms")

    def __init__(self, group: GroupClass, terms: Mapping | Iterable = ()):
        self.group = group
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for norm, c in items:
            acc[norm] = acc.get(norm, 0) + c
        self.terms = {n: c for n, c in acc.items() if c}

    # constructors

    @classmethod
    def zero(cls, group: GroupClass) -> RingElement:
        return cls(group)

    @classmethod
    def one(cls, group: GroupClass) -> RingElement:
        return cls(group, {_engine(group).identity: 1})

    @classmethod
    def constant(cls, group: GroupClass, c: int) -> RingElement:
        return cls(group, {_engine(group).identity: c})

    @classmethod
    def of(cls, g: GroupElement, c: int = 1) -> RingElement:
        return cls(g.group, {g.norm: c})

    @classmethod
    def from_word(cls, group: GroupClass, word: FreeWord, c: int = 1) -> RingElement:
        return cls.of(normalize_word(group, word), c)

    @classmethod
    def parse(cls, group: GroupClass, text: str) -> RingElement:
        """Parse a signed sum such as ``1 - t.a^-2 + 3*a``."""
        s = text.strip()
        if not s:
            raise InputError("empty ring element")
        pieces = re.split(r"\s*(?<!\^)([+-])\s*", s)
        if pieces[0] == "":
            pieces = pieces[1:]
        else:
            pieces = ["+"] + pieces
        terms: dict = {}
        for sign, body in zip(pieces[0::2], pieces[1::2]):
            m = re.match(r"^(\d+)\s*\*?\s*(.*)$", body.strip())
            if m:
                coef, rest = int(m.group(1)), m.group(2)
            else:
                coef, rest = 1, body
            if rest.strip().startswith("*"):
                raise InputError(f"cannot parse ring term {body!r}")
            norm = normalize_word(group, FreeWord.parse(rest, group.names)).norm
            terms[norm] = terms.get(norm, 0) + (coef if sign == "+" else -coef)
        return cls(group, terms)

    # structure

    def _check(self, other: RingElement) -> None:
        if self.group != other.group:
            raise ClassMismatchError(
                f"ring elements over different classes: {self.group.label()} vs {other.group.label()}"
            )

    def __eq__(self, other):
        if isinstance(other, int):
            return self == RingElement.constant(self.group, other)
        return isinstance(other, RingElement) and self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        """(GroupElement, coefficient) pairs in the deterministic order."""
        for norm in self.sorted_norms():
            yield GroupElement(self.group, norm), self.terms[norm]

    def sorted_norms(self) -> list:
        g = self.group
        return sorted(self.terms, key=lambda n: norm_key(g, n))

    def monomial(self) -> tuple[int, GroupElement] | None:
        """Return (c, g) if this is c*g, else None."""
        if len(self.terms) != 1:
            return None
        (norm, c), = self.terms.items()
        return c, GroupElement(self.group, norm)

    # arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = RingElement.constant(self.group, other)
        self._check(other)
        acc = dict(self.terms)
        for n, c in other.terms.items():
            acc[n] = acc.get(n, 0) + c
        return RingElement(self.group, acc)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.group, {n: -c for n, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = RingElement.constant(self.group, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return RingElement(self.group, {n: c * other for n, c in self.terms.items()})
        if isinstance(other, GroupElement):
            other = RingElement.of(other)
        return ring_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        if isinstance(other, GroupElement):
            return ring_mul(RingElement.of(other), self)
        return NotImplemented

    def __pow__(self, n: int):
        out = RingElement.one(self.group)
        for _ in range(n):
            out = out * self
        return out

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, norm in enumerate(self.sorted_norms()):
            c = self.terms[norm]
            w = word_of(self.group, norm)
            body = w.format(self.group.names, sep=".")
            if w:
                body = body if abs(c) == 1 else f"{abs(c)}*{body}"
            else:
                body = str(abs(c))
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"RingElement({self.to_text()!r})"


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    x._check(y)
    g = x.group
    acc: dict = {}
    for n1, c1 in x.terms.items():
        for n2, c2 in y.terms.items():
            n = mul_norms(g, n1, n2)
            acc[n] = acc.get(n, 0) + c1 * c2
    return RingElement(g, acc)


def involute(x: RingElement, w: OrientationCharacter | None = None) -> RingElement:
    """The w-twisted involution g -> w(g) g^-1, extended linearly."""
    g = x.group
    acc = {}
    for n, c in x.terms.items():
        s = 1 if w is None else w.of_norm(n)
        acc[inv_norm(g, n)] = c * s
    return RingElement(g, acc)


def augment(x: RingElement, twisted: bool = False, w: OrientationCharacter | None = None) -> int:
    """epsilon(x) (g -> 1) or, when ``twisted``, epsilon_w(x) (g -> w(g))."""
    if not twisted or w is None:
        return sum(x.terms.values())
    return sum(c * w.of_norm(n) for n, c in x.terms.items())


class RingMatrix:
    """A rectangular matrix over Z[pi]."""

    __slots__ = ("group", "rows", "nrows", "ncols")

    def __init__(self, group: GroupClass, rows: Sequence[Sequence[RingElement]], ncols: int | None = None):
        self.group = group
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        if self.rows:
            widths = {len(r) for r in self.rows}
            if len(widths) != 1:
                raise ShapeError("ragged matrix")
            self.ncols = widths.pop()
            if ncols is not None and ncols != self.ncols:
                raise ShapeError("declared column count disagrees with rows")
        else:
            self.ncols = ncols or 0
        for r in self.rows:
            for e in r:
                if e.group != group:
                    raise ClassMismatchError("matrix entry over a different class")

    @classmethod
    def zeros(cls, group: GroupClass, nrows: int, ncols: int) -> RingMatrix:
        z = RingElement.zero(group)
        return cls(group, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, group: GroupClass, n: int) -> RingMatrix:
        one, z = RingElement.one(group), RingElement.zero(group)
        return cls(group, [[one if i == j else z for j in range(n)] for i in range(n)], n)

    @classmethod
    def parse(cls, group: GroupClass, entries: Sequence[Sequence[str]]) -> RingMatrix:
        return cls(group, [[RingElement.parse(group, e) for e in row] for row in entries])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, RingMatrix)
            and self.group == other.group
            and self.shape == other.shape
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.shape, self.rows))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __add__(self, other: RingMatrix) -> RingMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return RingMatrix(self.group, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return RingMatrix(self.group, [[-a for a in r] for r in self.rows], self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def replace(self, i: int, j: int, value: RingElement) -> RingMatrix:
        rows = [list(r) for r in self.rows]
        rows[i][j] = value
        return RingMatrix(self.group, rows, self.ncols)

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.group, [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def to_text(self) -> list[list[str]]:
        return [[e.to_text() for e in r] for r in self.rows]

    def __repr__(self):
        return f"RingMatrix({self.to_text()!r})"


def mat_mul(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    if a.group != b.group:
        raise ClassMismatchError("matrices over different classes")
    if a.ncols != b.nrows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    zero = RingElement.zero(a.group)
    rows = []
    for i in range(a.nrows):
        row = []
        for j in range(b.ncols):
            acc = zero
            for k in range(a.ncols):
                if a.rows[i][k] and b.rows[k][j]:
                    acc = acc + ring_mul(a.rows[i][k], b.rows[k][j])
            row.append(acc)
        rows.append(row)
    return RingMatrix(a.group, rows, b.ncols)


def conjugate_transpose(a: RingMatrix, w: OrientationCharacter | None = None) -> RingMatrix:
    """(A*)_ij = involute(A_ji)."""
    return RingMatrix(
        a.group,
        [[involute(a.rows[i][j], w) for i in range(a.nrows)] for j in range(a.ncols)],
        a.nrows,
    )
