"""Alphabets: generator plants, footpaths, composites and relations.

An alphabet is usually read from a ``.alpha`` file::

    GENERATORS
    id: 1 -> 1 identity
    and: 2 -> 1
    FOOTPATHS
    m: dup ; and => id lax
    COMPOSITES
    sq := Delta ; m
    PLANT-RELATIONS
    adj ; adj ~ id
    CELL-RELATIONS
    inv: Delta ; m ~ id2(id)

``#`` starts a comment.  Iso footpaths get a generated inverse ``<name>_inv``
together with the two inverse relations.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import plant as pl
from .errors import ArityMismatch, FormatError, GrafterError, UnknownFootpath, UnknownGenerator
from .plant import Arity, Plant
from . import syntax

SECTIONS = ("GENERATORS", "FOOTPATHS", "COMPOSITES", "PLANT-RELATIONS", "CELL-RELATIONS")


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    arity: Arity
    identity: bool = False


@dataclass(frozen=True)
class FootpathDecl:
    name: str
    source: Plant
    target: Plant
    kind: str = "lax"
    inverse_of: str | None = None


@dataclass(frozen=True)
class CompositeDef:
    name: str
    body: syntax.Term
    text: str = ""


@dataclass(frozen=True)
class PlantRelation:
    lhs: Plant
    rhs: Plant
    name: str = ""


@dataclass(frozen=True)
class CellRelation:
    """``lhs ~ rhs`` between integer sums of 2-cell terms, kept as parsed terms."""
    lhs: tuple
    rhs: tuple
    name: str = ""
    text: str = ""


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_GEN_LINE = re.compile(rf"^({_NAME})\s*:\s*(\d+)\s*->\s*(\d+)\s*(identity)?$")
_LABEL = re.compile(rf"^({_NAME})\s*:(?!=)\s*(.*)$")


@dataclass
class Alphabet:
    generators: dict = field(default_factory=dict)
    footpaths: dict = field(default_factory=dict)
    composites: dict = field(default_factory=dict)
    plant_relations: list = field(default_factory=list)
    cell_relations: list = field(default_factory=list)
    source: str = ""

    # -- lookups ------------------------------------------------------------
    def has_generator(self, name: str) -> bool:
        return name in self.generators

    def has_cell(self, name: str) -> bool:
        return name in self.footpaths or name in self.composites

    def generator_plant(self, name: str) -> Plant:
        decl = self.generators.get(name)
        if decl is None:
            raise UnknownGenerator(f"unknown generator {name!r}")
        if decl.identity:
            return pl.identity(decl.arity.inputs)
        return pl.generator(name, decl.arity.inputs, decl.arity.outputs)

    def generator_plants(self) -> list[Plant]:
        return [self.generator_plant(n) for n in self.generators]

    def footpath(self, name: str) -> FootpathDecl:
        decl = self.footpaths.get(name)
        if decl is None:
            raise UnknownFootpath(f"unknown footpath {name!r}")
        return decl

    def plant(self, text: str) -> Plant:
        return syntax.parse_plant_term(text, self)

    def cell(self, text: str):
        return syntax.parse_cell_term(text, self)

    def sum(self, text: str):
        return syntax.parse_sum(text, self)

    @property
    def hash(self) -> str:
        """Digest of the generator declarations (what garden files depend on)."""
        text = "\n".join(f"{d.name}:{d.arity.inputs}:{d.arity.outputs}:{int(d.identity)}"
                         for d in self.generators.values())
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]

    # -- declarations -------------------------------------------------------
    def declare_generator(self, name: str, inputs: int, outputs: int, identity: bool = False):
        if name in self.generators:
            raise FormatError(f"generator {name!r} declared twice")
        if identity and inputs != outputs:
            raise ArityMismatch(f"identity generator {name!r} must have equal arity")
        self.generators[name] = GeneratorDecl(name, Arity(inputs, outputs), identity)

    def declare_footpath(self, name: str, source: Plant, target: Plant, kind: str = "lax"):
        if name in self.footpaths or name in self.composites:
            raise FormatError(f"footpath {name!r} declared twice")
        if kind not in ("lax", "iso"):
            raise FormatError(f"footpath kind must be lax or iso, got {kind!r}")
        if source.arity != target.arity:
            raise ArityMismatch(f"footpath {name!r} changes arity {source.arity} to {target.arity}")
        pl.require_valid(source)
        pl.require_valid(target)
        self.footpaths[name] = FootpathDecl(name, source, target, kind)
        if kind == "iso":
            inv = f"{name}_inv"
            self.footpaths[inv] = FootpathDecl(inv, target, source, "iso", inverse_of=name)
            src = syntax.Id2(source)
            tgt = syntax.Id2(target)
            g, h = syntax.Gen(name), syntax.Gen(inv)
            self.cell_relations.append(CellRelation(((1, syntax.Vert(g, h)),), ((1, src),), f"{name}_left_inverse"))
            self.cell_relations.append(CellRelation(((1, syntax.Vert(h, g)),), ((1, tgt),), f"{name}_right_inverse"))

    def declare_composite(self, name: str, text: str):
        if self.has_cell(name):
            raise FormatError(f"composite {name!r} clashes with an existing name")
        body = self.cell(text)
        self.composites[name] = CompositeDef(name, body, text)

    def declare_plant_relation(self, lhs: str | Plant, rhs: str | Plant, name: str = ""):
        lhs = self.plant(lhs) if isinstance(lhs, str) else lhs
        rhs = self.plant(rhs) if isinstance(rhs, str) else rhs
        if lhs.arity != rhs.arity:
            raise ArityMismatch(f"plant relation across arities {lhs.arity} and {rhs.arity}")
        name = name or f"p{len(self.plant_relations) + 1}"
        self.plant_relations.append(PlantRelation(lhs, rhs, name))

    def declare_cell_relation(self, lhs: str, rhs: str, name: str = ""):
        name = name or f"r{len(self.cell_relations) + 1}"
        self.cell_relations.append(
            CellRelation(tuple(self.sum(lhs)), tuple(self.sum(rhs)), name, f"{lhs} ~ {rhs}"))

    # -- files ----------------------------------------------------------------
    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> Alphabet:
        return cls(source=source).extend(text, source)

    def extend(self, text: str, source: str = "<string>") -> Alphabet:
        """Read further declarations (same file format) into this alphabet."""
        sections: dict[str, list[tuple[int, str]]] = {s: [] for s in SECTIONS}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.upper() in SECTIONS:
                current = line.upper()
                continue
            if current is None:
                raise FormatError(f"{source}:{lineno}: content before the first section header")
            sections[current].append((lineno, line))
        alpha = self
        lineno = 0
        try:
            for lineno, line in sections["GENERATORS"]:
                m = _GEN_LINE.match(line)
                if not m:
                    raise FormatError(f"expected 'name: m -> n [identity]', got {line!r}")
                alpha.declare_generator(m.group(1), int(m.group(2)), int(m.group(3)), bool(m.group(4)))
            for lineno, line in sections["FOOTPATHS"]:
                m = _LABEL.match(line)
                if not m or "=>" not in m.group(2):
                    raise FormatError(f"expected 'name: src => tgt [lax|iso]', got {line!r}")
                body = m.group(2)
                kind = "lax"
                km = re.search(r"\s(lax|iso)\s*$", body)
                if km:
                    kind = km.group(1)
                    body = body[:km.start()]
                src, tgt = body.split("=>", 1)
                alpha.declare_footpath(m.group(1), alpha.plant(src), alpha.plant(tgt), kind)
            for lineno, line in sections["COMPOSITES"]:
                if ":=" not in line:
                    raise FormatError(f"expected 'name := term', got {line!r}")
                name, body = (s.strip() for s in line.split(":=", 1))
                alpha.declare_composite(name, body)
            for lineno, line in sections["PLANT-RELATIONS"]:
                name, body = _split_label(line)
                lhs, rhs = _split_relation(body)
                alpha.declare_plant_relation(lhs, rhs, name)
            for lineno, line in sections["CELL-RELATIONS"]:
                name, body = _split_label(line)
                lhs, rhs = _split_relation(body)
                alpha.declare_cell_relation(lhs, rhs, name)
        except GrafterError as exc:
            raise type(exc)(f"{source}:{lineno}: {exc}") from exc
        self.__dict__.pop("_cell_caches", None)
        return alpha

    @classmethod
    def load(cls, path: str | Path) -> Alphabet:
        path = Path(path)
        if not path.exists():
            name = path.name if path.suffix == ".alpha" else f"{path.name}.alpha"
            if shipped_path(name) is not None:
                path = shipped_path(name)
        return cls.parse(Path(path).read_text(encoding="utf-8"), str(path))

    @classmethod
    def shipped(cls, name: str) -> Alphabet:
        """One of the alphabets bundled with the package (``leibniz``, ``cartan``)."""
        path = shipped_path(name if name.endswith(".alpha") else f"{name}.alpha")
        if path is None:
            raise FileNotFoundError(f"no shipped alphabet named {name!r}")
        return cls.parse(path.read_text(encoding="utf-8"), path.name)


def shipped_path(filename: str) -> Path | None:
    path = Path(str(resources.files("grafter") / "data" / filename))
    return path if path.exists() else None


def _split_label(line: str) -> tuple[str, str]:
    m = _LABEL.match(line)
    if m and "~" in m.group(2):
        return m.group(1), m.group(2)
    return "", line


def _split_relation(body: str) -> tuple[str, str]:
    if body.count("~") != 1:
        raise FormatError(f"expected exactly one '~' in relation {body!r}")
    lhs, rhs = body.split("~")
    return lhs.strip(), rhs.strip()
