"""Line-oriented presentation files.

    name: bs12
    class: bs 1 2
    gens: a t
    rels:
      t a t^-1 a^-2
    w: t 1
    aspherical: true

Optional ``images:`` lines (``a' = a^-1``) give the forced values of generators
beyond the class generators, as written by ``normalize``.
"""
from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .errors import InputError
from .fox import Presentation
from .groupring import OrientationCharacter
from .words import FreeWord, GroupClass

_KEYS = ("name", "class", "gens", "rels", "w", "aspherical", "images")


def _parse_class(line: str, gens: list[str]) -> GroupClass:
    parts = line.split()
    if not parts:
        raise InputError("empty class line")
    tag, args = parts[0].lower(), parts[1:]

    def count(k: int = 0) -> int:
        try:
            return int(args[k])
        except (IndexError, ValueError):
            raise InputError(f"class {tag!r} needs an integer argument") from None

    if tag in ("free", "abelian"):
        return GroupClass.free(count()) if tag == "free" else GroupClass.abelian(count())
    if tag == "formal":
        return GroupClass.formal(count() if args else len(gens))
    if tag == "klein":
        return GroupClass.klein()
    if tag == "bs":
        if len(args) != 2 or count(0) != 1:
            raise InputError("class bs expects 'bs 1 m'")
        m = count(1)
        if m == 0:
            raise InputError("bs 1 m needs m != 0")
        return GroupClass.bs(m)
    if tag == "surface":
        kind = args[1].lower() if len(args) > 1 else "orientable"
        if kind not in ("orientable", "nonorientable"):
            raise InputError(f"surface orientation must be orientable or nonorientable, not {kind!r}")
        return GroupClass.surface(count(), kind == "orientable")
    if tag == "freebycyclic":
        n = count()
        rest = line.split(None, 2)[2] if len(args) > 1 else ""
        texts = [s.strip() for s in rest.split(",")] if rest else []
        if len(texts) != n:
            raise InputError(f"freebycyclic {n} needs {n} comma-separated image words")
        if len(gens) < n + 1:
            raise InputError(f"freebycyclic {n} needs {n + 1} generators")
        names = gens[: n + 1]
        return GroupClass.free_by_cyclic([FreeWord.parse(t, names[:n]) for t in texts], names=names)
    raise InputError(f"unknown class tag {tag!r}")


def parse_presentation(text: str) -> Presentation:
    fields: dict[str, str] = {}
    rels: list[str] = []
    images: list[str] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"^\s*([A-Za-z]+)\s*:(.*)$", line)
        if m and m.group(1).lower() in _KEYS:
            key, value = m.group(1).lower(), m.group(2).strip()
            if key in fields:
                raise InputError(f"line {lineno}: duplicate field {key!r}")
            fields[key] = value
            section = key if key in ("rels", "images") else None
            if section == "rels" and value:
                rels.append(value)
            elif section == "images" and value:
                images.append(value)
            continue
        if section == "rels":
            rels.append(line.strip())
        elif section == "images":
            images.append(line.strip())
        else:
            raise InputError(f"line {lineno}: unexpected content {line.strip()!r}")
    for key in ("class", "gens"):
        if key not in fields:
            raise InputError(f"missing {key!r} line")
    gens = fields["gens"].split()
    if len(set(gens)) != len(gens):
        raise InputError("duplicate generator names")
    for gname in gens:
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_']*", gname):
            raise InputError(f"invalid generator name {gname!r}")
    group = _parse_class(fields["class"], gens)
    if len(gens) < group.ngens:
        raise InputError(f"class {group.label()} needs {group.ngens} generators, got {len(gens)}")
    group = group.with_names(gens[: group.ngens])
    relators = []
    for r in rels:
        word = FreeWord.parse(r, gens)
        if not word:
            raise InputError(f"relator {r!r} is freely trivial")
        relators.append(word)

    w = OrientationCharacter.trivial(group)
    if fields.get("w"):
        toks = fields["w"].split()
        if len(toks) % 2:
            raise InputError("w line must be pairs 'generator sign'")
        values = {}
        for name, sign in zip(toks[0::2], toks[1::2]):
            if name not in gens[: group.ngens]:
                raise InputError(f"w assigns undeclared class generator {name!r}")
            try:
                values[name] = int(sign)
            except ValueError:
                raise InputError(f"w sign {sign!r} is not an integer") from None
        w = OrientationCharacter.from_mapping(group, values)

    image_words = []
    if images:
        given = {}
        for line in images:
            lhs, eq, rhs = line.partition("=")
            if not eq:
                raise InputError(f"image line {line!r} needs 'name = word'")
            given[lhs.strip()] = FreeWord.parse(rhs, gens[: group.ngens])
        for i, gname in enumerate(gens):
            if i < group.ngens:
                image_words.append(given.pop(gname, FreeWord.gen(i)))
            elif gname in given:
                image_words.append(given.pop(gname))
            else:
                raise InputError(f"no image given for extra generator {gname!r}")
        if given:
            raise InputError(f"images for unknown generators: {sorted(given)}")

    asph = fields.get("aspherical", "").lower()
    if asph not in ("", "true", "false"):
        raise InputError("aspherical must be true or false")
    p = Presentation(
        name=fields.get("name", ""),
        generators=tuple(gens),
        relators=tuple(relators),
        group=group,
        w=w,
        aspherical=True if asph == "true" else (False if asph == "false" else None),
        images=tuple(image_words),
    )
    for i, r in enumerate(relators):
        if p.w.of_word(r.substitute(p.images)) != 1:
            raise InputError(f"w is not a homomorphism: relator {rels[i]!r} evaluates to -1")
        if group.decidable and not p.relator_is_trivial(r):
            raise InputError(f"relator {rels[i]!r} is not trivial in {group.label()}")
    return p


def format_presentation(p: Presentation) -> str:
    g = p.group
    lines = []
    if p.name:
        lines.append(f"name: {p.name}")
    lines.append(f"class: {_class_line(g)}")
    lines.append(f"gens: {' '.join(p.generators)}")
    lines.append("rels:")
    lines.extend(f"  {p.format_relator(r)}" for r in p.relators)
    if not p.w.is_trivial:
        pairs = [f"{n} {s}" for n, s in zip(g.names, p.w.signs) if s != 1]
        lines.append(f"w: {' '.join(pairs)}")
    if p.aspherical is not None:
        lines.append(f"aspherical: {'true' if p.aspherical else 'false'}")
    if p.ngens > g.ngens:
        lines.append("images:")
        for i in range(g.ngens, p.ngens):
            lines.append(f"  {p.generators[i]} = {p.images[i].format(g.names)}")
    return "\n".join(lines) + "\n"


def _class_line(g: GroupClass) -> str:
    if g.kind == "formal":
        return f"formal {g.n}"
    return g.label()


def read_presentation(path: str | Path) -> Presentation:
    return parse_presentation(resolve_path(path).read_text(encoding="utf-8"))


# ----------------------------------------------------------------------------
# corpus

CORPUS = ("z2", "klein", "bs12", "bs13", "surface2", "fbc2")


def corpus_dir():
    return resources.files("foxkit") / "corpus"


def corpus_text(name: str) -> str:
    return (corpus_dir() / f"{name}.pres").read_text(encoding="utf-8")


def load_corpus(name: str) -> Presentation:
    return parse_presentation(corpus_text(name))


def resolve_path(path: str | Path) -> Path:
    """Use the file if it exists, else fall back to the bundled corpus (``corpus/z2.pres``)."""
    p = Path(path)
    if p.exists():
        return p
    if p.parent.name in ("corpus", "") and p.suffix == ".pres":
        bundled = corpus_dir() / p.name
        if bundled.is_file():
            return Path(str(bundled))
    raise InputError(f"no such presentation file: {path}")
