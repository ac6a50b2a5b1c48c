"""Fox free differential calculus and the equivariant chain complex of a presentation."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InputError, NotAsphericalError
from .groupring import (
    OrientationCharacter,
    RingElement,
    RingMatrix,
    conjugate_transpose,
    mat_mul,
)
from .words import FreeWord, GroupClass, GroupElement, _engine, normalize_word


@dataclass(frozen=True)
class Presentation:
    """A finite presentation of a group in one of the supported classes.

    The first ``group.ngens`` generators are the class generators; any extra
    generator (introduced by normalization) carries an ``image``, a word in
    the class generators giving its forced value.
    """

    name: str
    generators: tuple[str, ...]
    relators: tuple[FreeWord, ...]
    group: GroupClass
    w: OrientationCharacter = None
    aspherical: bool | None = None
    images: tuple[FreeWord, ...] = ()

    def __post_init__(self):
        g = len(self.generators)
        if len(set(self.generators)) != g:
            raise InputError("duplicate generator names")
        if g < self.group.ngens:
            raise InputError(f"class {self.group.label()} needs at least {self.group.ngens} generators")
        if tuple(self.generators[: self.group.ngens]) != tuple(self.group.names):
            object.__setattr__(self, "group", self.group.with_names(self.generators[: self.group.ngens]))
        if self.w is None:
            object.__setattr__(self, "w", OrientationCharacter.trivial(self.group))
        elif self.w.group != self.group:
            object.__setattr__(self, "w", OrientationCharacter(self.group, self.w.signs))
        images = list(self.images)
        if not images:
            if g != self.group.ngens:
                raise InputError("extra generators need images in the class generators")
            images = [FreeWord.gen(i) for i in range(g)]
        if len(images) != g:
            raise InputError("one image per generator is required")
        object.__setattr__(self, "images", tuple(images))
        for r in self.relators:
            if not r:
                raise InputError("relators must be nonempty words")
            for i, _ in r:
                if i >= g:
                    raise InputError(f"relator uses generator index {i} beyond {g} generators")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    @property
    def free_group(self) -> GroupClass:
        return GroupClass.free(len(self.generators), names=self.generators)

    def phi_word(self, word: FreeWord) -> GroupElement:
        """Image of a word in F(X) under the defining epimorphism."""
        return normalize_word(self.group, word.substitute(self.images))

    def phi(self, x: RingElement) -> RingElement:
        acc: dict = {}
        for g, c in x.items():
            n = self.phi_word(g.word()).norm
            acc[n] = acc.get(n, 0) + c
        return RingElement(self.group, acc)

    def generator(self, i: int) -> GroupElement:
        return self.phi_word(FreeWord.gen(i))

    def relator_is_trivial(self, r: FreeWord) -> bool:
        self.group.require_decidable()
        return self.phi_word(r).is_identity()

    def is_normalized(self) -> bool:
        for r in self.relators:
            gens = [g for g, _ in r]
            if any(e < 0 for _, e in r) or len(set(gens)) != len(gens):
                return False
        return True

    def format_relator(self, r: FreeWord) -> str:
        return r.format(self.generators)


# ----------------------------------------------------------------------------
# Fox derivatives


def fox_derivative(x: FreeWord | RingElement, generator: int, group: GroupClass | None = None) -> RingElement:
    """The Fox derivative d x / d x_generator in Z[F(X)].

    ``x`` is a free word or a ring element over a free class; for a word the
    free class must be passed (or is taken as the smallest one containing it).
    """
    if isinstance(x, RingElement):
        if x.group.kind != "free":
            raise InputError("Fox derivatives are taken in the free group ring")
        acc = RingElement.zero(x.group)
        for g, c in x.items():
            acc = acc + fox_derivative(g.word(), generator, x.group) * c
        return acc
    if group is None:
        group = GroupClass.free(max([generator] + [g for g, _ in x]) + 1)
    if group.kind != "free":
        raise InputError("Fox derivatives are taken in the free group ring")
    if not 0 <= generator < group.ngens:
        raise InputError(f"invalid generator index {generator}")
    for g, _ in x:
        if g >= group.ngens:
            raise InputError(f"invalid generator index {g}")
    eng = _engine(group)
    prefix = eng.identity
    acc: dict = {}
    for g, e in x:
        if g == generator:
            if e > 0:
                acc[prefix] = acc.get(prefix, 0) + 1
            else:
                n = eng.mul_letter(prefix, g, -1)
                acc[n] = acc.get(n, 0) - 1
        prefix = eng.mul_letter(prefix, g, e)
    return RingElement(group, acc)


# ----------------------------------------------------------------------------
# normalization


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def normalize_presentation(p: Presentation) -> Presentation:
    """Rewrite every relator as a product of distinct generators with exponent +1.

    The k-th negative occurrence of x in a relator becomes x' (k = 1) or
    x_k' (k >= 2) with auxiliary relator x'x resp. x_k'x; the k-th positive
    occurrence (k >= 2) becomes x_k with relator x_k x'.  Every new generator
    comes with exactly one relator, so the deficiency is unchanged.
    """
    if p.is_normalized():
        return p
    names = list(p.generators)
    images = list(p.images)
    taken = set(names)
    aux: list[FreeWord] = []
    neg: dict[tuple[int, int], int] = {}
    pos: dict[tuple[int, int], int] = {}

    def negative(x: int, k: int) -> int:
        if (x, k) not in neg:
            base = names[x] + "'" if k == 1 else f"{names[x]}_{k}'"
            neg[(x, k)] = len(names)
            names.append(_fresh(base, taken))
            images.append(~images[x])
            aux.append(FreeWord([(neg[(x, k)], 1), (x, 1)]))
        return neg[(x, k)]

    def positive(x: int, k: int) -> int:
        if (x, k) not in pos:
            inv = negative(x, 1)
            pos[(x, k)] = len(names)
            names.append(_fresh(f"{names[x]}_{k}", taken))
            images.append(images[x])
            aux.append(FreeWord([(pos[(x, k)], 1), (inv, 1)]))
        return pos[(x, k)]

    main = []
    for r in p.relators:
        seen_pos: Counter = Counter()
        seen_neg: Counter = Counter()
        letters = []
        for g, e in r:
            if e > 0:
                seen_pos[g] += 1
                k = seen_pos[g]
                letters.append((g if k == 1 else positive(g, k), 1))
            else:
                seen_neg[g] += 1
                letters.append((negative(g, seen_neg[g]), 1))
        main.append(FreeWord(letters))
    return Presentation(
        name=p.name,
        generators=tuple(names),
        relators=tuple(main + aux),
        group=p.group,
        w=p.w,
        aspherical=p.aspherical,
        images=tuple(images),
    )


# ----------------------------------------------------------------------------
# the Fox-Lyndon complex


@dataclass(frozen=True)
class FoxComplex:
    """d1 is g x 1 with entries phi(x_i) - 1; d2 is g x r with phi(dw_j/dx_i)."""

    presentation: Presentation
    d1: RingMatrix
    d2: RingMatrix
    verified: bool = True
    free_derivatives: tuple = field(default=(), repr=False, compare=False)


def fox_lyndon_complex(p: Presentation) -> FoxComplex:
    F = p.free_group
    free = [[fox_derivative(r, i, F) for r in p.relators] for i in range(p.ngens)]
    d1 = RingMatrix(p.group, [[RingElement.of(p.generator(i)) - 1] for i in range(p.ngens)], 1)
    d2 = RingMatrix(p.group, [[p.phi(x) for x in row] for row in free], len(p.relators))
    return FoxComplex(p, d1, d2, verified=p.group.decidable, free_derivatives=tuple(map(tuple, free)))


@dataclass(frozen=True)
class BoundaryReport:
    composite: RingMatrix
    ok: bool


def verify_boundary_squared(c: FoxComplex) -> BoundaryReport:
    """Compute the composite d1 o d2 (one entry per relator) and test it for zero."""
    c.presentation.group.require_decidable()
    composite = mat_mul(c.d2.transpose(), c.d1)
    return BoundaryReport(composite, composite.is_zero())


def dualizing_presentation(c: FoxComplex) -> RingMatrix:
    """Presentation matrix (rows: relators, columns: generators) of E^2 Z."""
    p = c.presentation
    if not p.aspherical:
        raise NotAsphericalError()
    return conjugate_transpose(c.d2, p.w)


def mu(group: GroupClass, m: int, a: int = 0) -> RingElement:
    """1 + a + ... + a^(m-1) for the generator with index ``a``."""
    return RingElement(group, [(normalize_word(group, FreeWord.gen(a, i)).norm, 1) for i in range(m)])
