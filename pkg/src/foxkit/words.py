"""Free-group words and exact word problems for a handful of group classes.

Every supported class gets its own normal form so that two words are equal
in the group exactly when their normal forms agree:

    free          reduced word
    abelian       exponent vector
    klein         (i, j) meaning a^i b^j, with b a b^-1 = a^-1
    bs            (p, k, q) meaning t^-p a^k t^q, with t a t^-1 = a^m
    freebycyclic  (n, u) meaning t^n u, with t u t^-1 = alpha(u)
    surface       amalgamated free product normal form (k, syllables)
    formal        reduced word; no group equality beyond free reduction
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Sequence

from .errors import ClassMismatchError, InputError, UndecidableError

Letter = tuple[int, int]

_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


class FreeWord:
    """A freely reduced word: a tuple of ``(generator, +-1)`` letters."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        out: list[Letter] = []
        for g, e in letters:
            if e not in (1, -1):
                raise InputError(f"letter exponent must be +-1, got {e}")
            if g < 0:
                raise InputError(f"negative generator index {g}")
            if out and out[-1][0] == g and out[-1][1] == -e:
                out.pop()
            else:
                out.append((g, e))
        self.letters = tuple(out)

    @classmethod
    def from_powers(cls, powers: Iterable[tuple[int, int]]) -> FreeWord:
        letters = []
        for g, k in powers:
            e = 1 if k > 0 else -1
            letters.extend([(g, e)] * abs(k))
        return cls(letters)

    @classmethod
    def gen(cls, g: int, k: int = 1) -> FreeWord:
        return cls.from_powers([(g, k)])

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return FreeWord(self.letters[item])
        return self.letters[item]

    def __eq__(self, other):
        return isinstance(other, FreeWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __lt__(self, other):
        return (len(self), self.letters) < (len(other), other.letters)

    def __mul__(self, other: FreeWord) -> FreeWord:
        return FreeWord(self.letters + other.letters)

    def __invert__(self) -> FreeWord:
        return FreeWord((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, n: int) -> FreeWord:
        base = self if n >= 0 else ~self
        return FreeWord(base.letters * abs(n))

    def __bool__(self):
        return bool(self.letters)

    def __repr__(self):
        return f"FreeWord({list(self.letters)!r})"

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def syllables(self) -> list[tuple[int, int]]:
        out: list[list[int]] = []
        for g, e in self.letters:
            if out and out[-1][0] == g:
                out[-1][1] += e
            else:
                out.append([g, e])
        return [(g, k) for g, k in out]

    def substitute(self, images: Sequence[FreeWord]) -> FreeWord:
        """Apply the endomorphism sending generator ``i`` to ``images[i]``."""
        out: list[Letter] = []
        for g, e in self.letters:
            out.extend((images[g] if e > 0 else ~images[g]).letters)
        return FreeWord(out)

    def format(self, names: Sequence[str], sep: str = " ") -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, k in self.syllables():
            parts.append(names[g] if k == 1 else f"{names[g]}^{k}")
        return sep.join(parts)

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> FreeWord:
        """Parse tokens like ``t a t^-1 a^-2`` (space or ``.`` separated)."""
        index = {n: i for i, n in enumerate(names)}
        powers = []
        for tok in re.split(r"[\s.]+", text.strip()):
            if not tok or tok == "1":
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise InputError(f"cannot parse word token {tok!r}")
            name, exp = m.group(1), m.group(2)
            if name not in index:
                raise InputError(f"undeclared generator {name!r} in word {text.strip()!r}")
            powers.append((index[name], int(exp) if exp is not None else 1))
        return cls.from_powers(powers)


def _check_letters(word: FreeWord, ngens: int) -> None:
    for g, _ in word:
        if g >= ngens:
            raise InputError(f"generator index {g} out of range for {ngens} generators")


# ----------------------------------------------------------------------------
# group classes


_KINDS = ("free", "abelian", "klein", "surface", "bs", "freebycyclic", "formal")


def _default_names(kind: str, n: int, orientable: bool) -> tuple[str, ...]:
    if kind in ("free", "abelian", "formal"):
        if n <= 4:
            return tuple("xyzw"[:n])
        return tuple(f"x{i + 1}" for i in range(n))
    if kind == "klein":
        return ("a", "b")
    if kind == "bs":
        return ("a", "t")
    if kind == "surface":
        if orientable:
            return tuple(f"{c}{i + 1}" for i in range(n) for c in "ab")
        return tuple(f"a{i + 1}" for i in range(n))
    if kind == "freebycyclic":
        base = ("x", "y", "z", "w") if n <= 4 else tuple(f"x{i + 1}" for i in range(n))
        return tuple(base[:n]) + ("t",)
    raise InputError(f"unknown group class {kind!r}")


@dataclass(frozen=True)
class GroupClass:
    """A group with a solved word problem (or ``formal`` when unsolved).

    ``n`` is the rank for free/abelian/formal, the genus for surface, ``m``
    for BS(1, m) and the free rank ``s`` for F(s) x| Z.
    """

    kind: str
    n: int = 0
    orientable: bool = True
    images: tuple[FreeWord, ...] = ()
    names: tuple[str, ...] = field(default=(), compare=True)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown group class {self.kind!r}")
        if self.kind == "bs" and self.n == 0:
            raise InputError("BS(1, m) requires m != 0")
        if self.kind == "surface":
            if self.orientable and self.n < 2:
                raise InputError("orientable surface class requires genus >= 2")
            if not self.orientable and self.n < 2:
                raise InputError("non-orientable surface class requires genus >= 2")
        if self.kind in ("free", "abelian", "formal") and self.n < 0:
            raise InputError("rank must be nonnegative")
        if self.kind == "freebycyclic":
            if len(self.images) != self.n or self.n < 1:
                raise InputError("freebycyclic needs one image word per free generator")
            for w in self.images:
                _check_letters(w, self.n)
        if not self.names:
            object.__setattr__(self, "names", _default_names(self.kind, self.n, self.orientable))
        if len(self.names) != self.ngens:
            raise InputError(f"{self.kind} class expects {self.ngens} generator names, got {len(self.names)}")

    @property
    def ngens(self) -> int:
        if self.kind in ("free", "abelian", "formal"):
            return self.n
        if self.kind in ("klein", "bs"):
            return 2
        if self.kind == "surface":
            return 2 * self.n if self.orientable else self.n
        return self.n + 1

    @property
    def decidable(self) -> bool:
        return self.kind != "formal"

    @property
    def torsion_free(self) -> bool:
        return self.kind != "formal"

    @property
    def is_trivial(self) -> bool:
        return self.kind in ("free", "abelian") and self.n == 0

    def require_decidable(self) -> None:
        if not self.decidable:
            raise UndecidableError()

    def with_names(self, names: Sequence[str]) -> GroupClass:
        return GroupClass(self.kind, self.n, self.orientable, self.images, tuple(names))

    def defining_relators(self) -> list[FreeWord]:
        n = self.n
        if self.kind in ("free", "formal"):
            return []
        if self.kind == "abelian":
            return [FreeWord([(i, 1), (j, 1), (i, -1), (j, -1)]) for i in range(n) for j in range(i + 1, n)]
        if self.kind == "klein":
            return [FreeWord([(1, 1), (0, 1), (1, -1), (0, 1)])]
        if self.kind == "bs":
            return [FreeWord([(1, 1), (0, 1), (1, -1)]) * FreeWord.gen(0, -n)]
        if self.kind == "surface":
            if self.orientable:
                w = FreeWord()
                for i in range(n):
                    a, b = 2 * i, 2 * i + 1
                    w = w * FreeWord([(a, 1), (b, 1), (a, -1), (b, -1)])
                return [w]
            return [FreeWord.from_powers([(i, 2) for i in range(n)])]
        t = self.n
        return [FreeWord([(t, 1), (i, 1), (t, -1)]) * ~self.images[i] for i in range(n)]

    def label(self) -> str:
        if self.kind in ("free", "abelian", "formal"):
            return f"{self.kind} {self.n}"
        if self.kind == "klein":
            return "klein"
        if self.kind == "bs":
            return f"bs 1 {self.n}"
        if self.kind == "surface":
            return f"surface {self.n} {'orientable' if self.orientable else 'nonorientable'}"
        imgs = ", ".join(w.format(self.names) for w in self.images)
        return f"freebycyclic {self.n} {imgs}"

    # convenience constructors

    @classmethod
    def free(cls, n: int, names=()) -> GroupClass:
        return cls("free", n, names=tuple(names))

    @classmethod
    def abelian(cls, n: int, names=()) -> GroupClass:
        return cls("abelian", n, names=tuple(names))

    @classmethod
    def klein(cls, names=()) -> GroupClass:
        return cls("klein", names=tuple(names))

    @classmethod
    def bs(cls, m: int, names=()) -> GroupClass:
        return cls("bs", m, names=tuple(names))

    @classmethod
    def surface(cls, genus: int, orientable: bool = True, names=()) -> GroupClass:
        return cls("surface", genus, orientable, names=tuple(names))

    @classmethod
    def free_by_cyclic(cls, images: Sequence[FreeWord], names=()) -> GroupClass:
        return cls("freebycyclic", len(images), images=tuple(images), names=tuple(names))

    @classmethod
    def formal(cls, n: int, names=()) -> GroupClass:
        return cls("formal", n, names=tuple(names))


# ----------------------------------------------------------------------------
# per-class solvers; norms are hashable and totally ordered within a class


class _Engine:
    identity: object = None

    def letter(self, g: int, e: int):
        return self.mul_letter(self.identity, g, e)

    def mul_letter(self, norm, g: int, e: int):
        raise NotImplementedError

    def from_word(self, word: FreeWord):
        norm = self.identity
        for g, e in word:
            norm = self.mul_letter(norm, g, e)
        return norm

    def mul(self, a, b):
        for g, e in self.word(b):
            a = self.mul_letter(a, g, e)
        return a

    def inv(self, norm):
        return self.from_word(~self.word(norm))

    def word(self, norm) -> FreeWord:
        raise NotImplementedError


class _FreeEngine(_Engine):
    identity = ()

    def mul_letter(self, norm, g, e):
        if norm and norm[-1] == (g, -e):
            return norm[:-1]
        return norm + ((g, e),)

    def from_word(self, word):
        return word.letters

    def mul(self, a, b):
        return (FreeWord(a) * FreeWord(b)).letters

    def inv(self, norm):
        return (~FreeWord(norm)).letters

    def word(self, norm):
        return FreeWord(norm)


class _AbelianEngine(_Engine):
    def __init__(self, n):
        self.n = n
        self.identity = (0,) * n

    def mul_letter(self, norm, g, e):
        v = list(norm)
        v[g] += e
        return tuple(v)

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, norm):
        return tuple(-x for x in norm)

    def word(self, norm):
        return FreeWord.from_powers([(i, k) for i, k in enumerate(norm) if k])


class _KleinEngine(_Engine):
    # (i, j) = a^i b^j;  b a = a^-1 b
    identity = (0, 0)

    def mul(self, x, y):
        i, j = x
        k, l = y
        return (i + (k if j % 2 == 0 else -k), j + l)

    def mul_letter(self, norm, g, e):
        return self.mul(norm, (e, 0) if g == 0 else (0, e))

    def inv(self, norm):
        i, j = norm
        return (-i if j % 2 == 0 else i, -j)

    def word(self, norm):
        i, j = norm
        return FreeWord.from_powers([(0, i), (1, j)])


class _BSEngine(_Engine):
    """BS(1, m) as Z[1/m] x| Z; norm (p, k, q) is t^-p a^k t^q."""

    identity = (0, 0, 0)

    def __init__(self, m):
        self.m = m

    def _to_pair(self, norm):
        p, k, q = norm
        return Fraction(k) / Fraction(self.m) ** p, q - p

    def _from_pair(self, x: Fraction, n: int):
        m = self.m
        p = 0
        if abs(m) > 1:
            while (x * Fraction(m) ** p).denominator != 1:
                p += 1
        p = max(p, -n)
        k = x * Fraction(m) ** p
        assert k.denominator == 1
        return (p, int(k), n + p)

    def mul(self, a, b):
        x, n = self._to_pair(a)
        y, k = self._to_pair(b)
        return self._from_pair(x + Fraction(self.m) ** n * y, n + k)

    def mul_letter(self, norm, g, e):
        return self.mul(norm, (0, e, 0) if g == 0 else ((0, 0, 1) if e > 0 else (1, 0, 0)))

    def inv(self, norm):
        x, n = self._to_pair(norm)
        return self._from_pair(-x / Fraction(self.m) ** n, -n)

    def word(self, norm):
        p, k, q = norm
        return FreeWord.from_powers([(1, -p), (0, k), (1, q)])


def _shortening_move(cur, expr):
    s = len(cur)
    for i, j in permutations(range(s), 2):
        for e in (1, -1):
            uj, ej = cur[j] ** e, expr[j] ** e
            for cand, cexpr in ((cur[i] * uj, expr[i] * ej), (uj * cur[i], ej * expr[i])):
                if len(cand) < len(cur[i]):
                    return i, cand, cexpr
    return None


def _nielsen_inverse(images: Sequence[FreeWord], s: int) -> tuple[FreeWord, ...]:
    """Invert a free-group automorphism by greedy Nielsen reduction.

    ``expr[i]`` tracks ``cur[i]`` as a word in the images, so once the images
    are reduced to a signed permutation of the basis the expressions spell
    out the inverse.
    """
    cur = list(images)
    expr = [FreeWord.gen(i) for i in range(s)]
    while (move := _shortening_move(cur, expr)) is not None:
        i, cur[i], expr[i] = move
    inverse: list[FreeWord | None] = [None] * s
    for k, w in enumerate(cur):
        if len(w) != 1 or inverse[w[0][0]] is not None:
            raise InputError("automorphism images are not a free basis (Nielsen reduction stalled)")
        g, e = w[0]
        inverse[g] = expr[k] ** e
    out = tuple(inverse)
    for i in range(s):
        if FreeWord.gen(i).substitute(images).substitute(out) != FreeWord.gen(i):
            raise InputError("automorphism inversion failed verification")
    return out


class _FreeByCyclicEngine(_Engine):
    """F(s) x|_alpha Z; norm (n, u) is t^n u, and t u t^-1 = alpha(u)."""

    identity = (0, ())

    def __init__(self, images):
        self.s = len(images)
        self.alpha = tuple(images)
        self.beta = _nielsen_inverse(images, self.s)

    def _power(self, u: FreeWord, k: int) -> FreeWord:
        # alpha^k(u)
        maps = self.alpha if k > 0 else self.beta
        for _ in range(abs(k)):
            u = u.substitute(maps)
        return u

    def mul_letter(self, norm, g, e):
        n, u = norm
        if g == self.s:
            # t^n u t^e = t^(n+e) alpha^-e(u)
            return (n + e, self._power(FreeWord(u), -e).letters)
        return (n, (FreeWord(u) * FreeWord([(g, e)])).letters)

    def mul(self, a, b):
        n1, u1 = a
        n2, u2 = b
        return (n1 + n2, (self._power(FreeWord(u1), -n2) * FreeWord(u2)).letters)

    def inv(self, norm):
        n, u = norm
        # (t^n u)^-1 = u^-1 t^-n = t^-n alpha^n(u^-1)
        return (-n, self._power(~FreeWord(u), n).letters)

    def word(self, norm):
        n, u = norm
        return FreeWord.gen(self.s, n) * FreeWord(u)


class _AmalgamEngine(_Engine):
    """Normal forms in A *_C B with A, B free and C infinite cyclic.

    ``c_a`` (a word on the A side) is identified with ``c_b`` (B side).  A
    norm ``(k, ((side, letters), ...))`` means c^k t_1 ... t_n where each t_i
    is the chosen representative of its right coset C t_i: the shortest, then
    lexicographically least, element of that coset.
    """

    identity = (0, ())

    def __init__(self, side_of: Sequence[int], c_a: FreeWord, c_b: FreeWord):
        self.side_of = tuple(side_of)
        self.c = (c_a, c_b)

    def _rep(self, side: int, u: FreeWord) -> tuple[int, FreeWord]:
        """Return (k, t) with u = c^k t and t the coset representative."""
        c = self.c[side]
        bound = 2 * len(u) // max(len(c), 1) + 2
        best = None
        for j in range(-bound, bound + 1):
            cand = (c ** j) * u
            key = (len(cand), cand.letters)
            if best is None or key < best[0]:
                best = (key, j, cand)
        _, j, t = best
        return -j, t

    def mul_letter(self, norm, g, e):
        k, syl = norm
        side = self.side_of[g]
        syl = list(syl)
        if syl and syl[-1][0] == side:
            u = FreeWord(syl.pop()[1]) * FreeWord([(g, e)])
        else:
            u = FreeWord([(g, e)])
        carry, t = self._rep(side, u)
        if t:
            tail = [(side, t.letters)]
        else:
            tail = []
        # push c^carry leftwards through the remaining syllables
        i = len(syl) - 1
        while carry and i >= 0:
            s_side, letters = syl[i]
            carry, t2 = self._rep(s_side, FreeWord(letters) * self.c[s_side] ** carry)
            syl[i] = (s_side, t2.letters)
            i -= 1
        return (k + carry, tuple(syl + tail))

    def word(self, norm):
        k, syl = norm
        w = self.c[0] ** k
        for _, letters in syl:
            w = w * FreeWord(letters)
        return w


def _surface_engine(cls: GroupClass) -> _AmalgamEngine:
    n = cls.n
    if cls.orientable:
        side_of = [0, 0] + [1] * (2 * n - 2)
        c_a = FreeWord([(0, 1), (1, 1), (0, -1), (1, -1)])
        rest = FreeWord()
        for i in range(1, n):
            a, b = 2 * i, 2 * i + 1
            rest = rest * FreeWord([(a, 1), (b, 1), (a, -1), (b, -1)])
    else:
        side_of = [0] + [1] * (n - 1)
        c_a = FreeWord.gen(0, 2)
        rest = FreeWord.from_powers([(i, 2) for i in range(1, n)])
    return _AmalgamEngine(side_of, c_a, ~rest)


@lru_cache(maxsize=None)
def _engine(cls: GroupClass) -> _Engine:
    if cls.kind in ("free", "formal"):
        return _FreeEngine()
    if cls.kind == "abelian":
        return _AbelianEngine(cls.n)
    if cls.kind == "klein":
        return _KleinEngine()
    if cls.kind == "bs":
        return _BSEngine(cls.n)
    if cls.kind == "freebycyclic":
        return _FreeByCyclicEngine(cls.images)
    return _surface_engine(cls)


# ----------------------------------------------------------------------------
# group elements


@dataclass(frozen=True)
class GroupElement:
    group: GroupClass
    norm: object

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __invert__(self) -> GroupElement:
        return invert(self)

    def is_identity(self) -> bool:
        return self.norm == _engine(self.group).identity

    def word(self) -> FreeWord:
        return word_of(self.group, self.norm)

    def sort_key(self):
        return norm_key(self.group, self.norm)

    def __str__(self):
        return self.word().format(self.group.names, sep=".")


@lru_cache(maxsize=1 << 16)
def word_of(group: GroupClass, norm) -> FreeWord:
    return _engine(group).word(norm)


@lru_cache(maxsize=1 << 16)
def norm_key(group: GroupClass, norm):
    """Deterministic total order on norms: shortlex on representative words."""
    w = word_of(group, norm)
    return (len(w), w.letters)


def identity(group: GroupClass) -> GroupElement:
    return GroupElement(group, _engine(group).identity)


def normalize_word(group: GroupClass, word: FreeWord, *, require_equality: bool = False) -> GroupElement:
    """Canonical form of ``word`` in ``group``.

    In formal mode only free reduction is applied; pass
    ``require_equality=True`` to refuse instead.
    """
    if require_equality:
        group.require_decidable()
    _check_letters(word, group.ngens)
    return GroupElement(group, _engine(group).from_word(word))


def element(group: GroupClass, text: str) -> GroupElement:
    """Parse ``text`` (a word in the class generator names) and normalize it."""
    return normalize_word(group, FreeWord.parse(text, group.names))


def mul_norms(group: GroupClass, a, b):
    return _engine(group).mul(a, b)


def inv_norm(group: GroupClass, a):
    return _engine(group).inv(a)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    if g.group != h.group:
        raise ClassMismatchError(f"cannot multiply elements of {g.group.label()} and {h.group.label()}")
    return GroupElement(g.group, _engine(g.group).mul(g.norm, h.norm))


def invert(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, _engine(g.group).inv(g.norm))


def symmetrized(relators: Sequence[FreeWord]) -> list[tuple[Letter, ...]]:
    """All cyclic permutations of the relators and their inverses."""
    out = set()
    for r in relators:
        for w in (r, ~r):
            ls = w.letters
            for i in range(len(ls)):
                out.add(ls[i:] + ls[:i])
    return sorted(out)


def dehn_reduce(relators: Sequence[FreeWord], word: FreeWord, max_steps: int = 100_000) -> FreeWord:
    """Dehn's algorithm: replace more than half a relator by the shorter rest.

    Under C'(1/6) small cancellation the result is empty iff ``word`` is
    trivial.  Each step shortens the word, so this always terminates.
    """
    rstar = symmetrized(relators)
    w = word
    for _ in range(max_steps):
        ls = w.letters
        hit = None
        for rho in rstar:
            half = len(rho) // 2 + 1
            for i in range(len(ls) - half + 1):
                j = 0
                while j < len(rho) and i + j < len(ls) and ls[i + j] == rho[j]:
                    j += 1
                if j >= half:
                    hit = (i, j, rho)
                    break
            if hit:
                break
        if hit is None:
            return w
        i, j, rho = hit
        replacement = ~FreeWord(rho[j:])
        w = FreeWord(ls[:i]) * replacement * FreeWord(ls[i + j:])
    raise RuntimeError("Dehn reduction did not terminate")
