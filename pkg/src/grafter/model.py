"""Finite functorial models: plants as set-valued functors, footpaths as tables.

Each generator plant gets a role: ``product`` (pairs its two inputs),
``diagonal`` (copies its input to both outputs), ``drop`` (forgets its
input), ``identity``, or ``carrier:<name>`` (a constant object).  Objects
are symbolic (``base``, ``prod``, ``unit``) and enumerate their elements on
demand.  Footpath components are looked up per test object; whiskering
pushes a component through the functors downstream of the hole.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import plant as pl
from . import twocell as tc
from .alphabet import Alphabet, CellRelation, shipped_path
from .errors import (FormatError, IllTyped, MissingAddition, UnassignedComponent,
                     UnassignedGenerator)
from .plant import Plant


# -- objects -----------------------------------------------------------------------

@dataclass(frozen=True)
class Obj:
    kind: str                 # "base", "prod" or "unit"
    name: str = ""
    parts: tuple = ()

    def __str__(self) -> str:
        if self.kind == "base":
            return self.name
        if self.kind == "unit":
            return "1"
        return "(" + " x ".join(str(p) for p in self.parts) + ")"


UNIT = Obj("unit")


def base(name: str) -> Obj:
    return Obj("base", name)


def prod(*parts: Obj) -> Obj:
    return Obj("prod", parts=tuple(parts))


def roots_object(objs: list[Obj]) -> Obj:
    """The realized set of a plant whose roots carry ``objs``."""
    if not objs:
        return UNIT
    if len(objs) == 1:
        return objs[0]
    return prod(*objs)


def elem_repr(e) -> str:
    if isinstance(e, tuple):
        return "(" + ",".join(elem_repr(x) for x in e) + ")"
    return str(e)


@dataclass
class Carrier:
    name: str
    elements: list
    add: dict | None = None
    mul: dict | None = None

    @property
    def zero(self):
        if self.add is None:
            raise MissingAddition(f"carrier {self.name} has no addition")
        for z in self.elements:
            if all(self.add[(z, x)] == x for x in self.elements):
                return z
        raise MissingAddition(f"carrier {self.name} has no additive identity")

    def neg(self, x):
        z = self.zero
        for y in self.elements:
            if self.add[(x, y)] == z:
                return y
        raise MissingAddition(f"{x} has no additive inverse in {self.name}")

    def ring_violations(self) -> list[str]:
        """Commutative-ring axioms, checked exhaustively."""
        if self.add is None or self.mul is None:
            return []
        E, a, m = self.elements, self.add, self.mul
        out = []
        try:
            for x in E:
                self.neg(x)
        except MissingAddition as exc:
            return [str(exc)]
        for x, y in itertools.product(E, E):
            if a[(x, y)] != a[(y, x)]:
                out.append(f"addition not commutative at {x},{y}")
            if m[(x, y)] != m[(y, x)]:
                out.append(f"multiplication not commutative at {x},{y}")
        for x, y, w in itertools.product(E, E, E):
            if a[(a[(x, y)], w)] != a[(x, a[(y, w)])]:
                out.append(f"addition not associative at {x},{y},{w}")
            if m[(m[(x, y)], w)] != m[(x, m[(y, w)])]:
                out.append(f"multiplication not associative at {x},{y},{w}")
            if m[(x, a[(y, w)])] != a[(m[(x, y)], m[(x, w)])]:
                out.append(f"distributivity fails at {x},{y},{w}")
            if len(out) > 10:
                break
        return out


@dataclass(frozen=True)
class Morphism:
    source: str
    target: str
    mapping: tuple        # pairs (x, h(x))

    def __call__(self, x):
        return dict(self.mapping)[x]

    def __str__(self) -> str:
        body = ", ".join(f"{a}->{b}" for a, b in self.mapping)
        return f"{self.source}->{self.target} {{{body}}}"


# -- results -----------------------------------------------------------------------

@dataclass
class Holds:
    checked: int = 0

    def __bool__(self):
        return True


@dataclass
class Counterexample:
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return False


Natural = Holds


# -- the model ---------------------------------------------------------------------

Component = Callable[[object], object]


class FiniteModel:
    def __init__(self, alphabet: Alphabet, roles: dict[str, str], carriers: dict[str, Carrier],
                 objects: list[str], components: dict | None = None, relations: list | None = None):
        self.alphabet = alphabet
        self.roles = dict(roles)
        self.carriers = dict(carriers)
        self.objects = list(objects)
        # components[footpath][object name] -> callable on elements
        self.components: dict[str, dict[str, Component]] = {k: dict(v) for k, v in (components or {}).items()}
        self.relations = list(relations or [])
        for name in self.objects:
            if name not in self.carriers:
                raise FormatError(f"test object {name!r} is not a declared carrier")
        self._ring_checked: dict[str, list] = {}

    # objects and elements
    def elements(self, obj: Obj) -> list:
        if obj.kind == "base":
            return list(self.carriers[obj.name].elements)
        if obj.kind == "unit":
            return [()]
        return list(itertools.product(*(self.elements(p) for p in obj.parts)))

    def _role(self, label: str) -> str:
        role = self.roles.get(label)
        if role is None:
            raise UnassignedGenerator(f"generator {label!r} has no role in this model")
        return role

    def wire_objects(self, p: Plant, inputs: list[Obj], hole_objects=None) -> dict:
        """Object carried by every upstream port when the leaves carry ``inputs``."""
        order = pl._topological_order(p)
        if order is None:
            raise IllTyped("plant has a cycle")
        objs = {("L", i): o for i, o in enumerate(inputs)}
        for v in order:
            nin, nout = p.sigs[v]
            ins = [objs[p.up[("i", v, j)]] for j in range(nin)]
            label = p.labels[v]
            if label.startswith("?"):
                outs = hole_objects(ins)
            else:
                outs = self._apply_role(self._role(label), ins)
            if len(outs) != nout:
                raise IllTyped(f"role of {label!r} yields {len(outs)} outputs, expected {nout}")
            for j, o in enumerate(outs):
                objs[("o", v, j)] = o
        return objs

    @staticmethod
    def _apply_role(role: str, ins: list[Obj]) -> list[Obj]:
        if role == "product":
            return [prod(*ins)] if len(ins) != 1 else list(ins)
        if role == "diagonal":
            return [ins[0], ins[0]]
        if role == "drop":
            return []
        if role == "identity":
            return list(ins)
        if role.startswith("carrier:"):
            return [base(role.split(":", 1)[1])]
        raise FormatError(f"unknown role {role!r}")

    def root_objects(self, p: Plant, inputs: list[Obj]) -> list[Obj]:
        objs = self.wire_objects(p, inputs)
        return [objs[p.up[("R", r)]] for r in range(p.outputs)]

    def realize_object(self, p: Plant, S: str) -> Obj:
        return roots_object(self.root_objects(p, [base(S)] * p.inputs))

    def realize_plant(self, p: Plant, S: str) -> list:
        """Elements of the set ``p(S)``."""
        return self.elements(self.realize_object(p, S))

    # functor action on maps
    def _push(self, p: Plant, inputs: list[tuple], hole=None) -> list[tuple]:
        """Propagate ``(src_obj, tgt_obj, map)`` triples from the leaves to the roots.

        ``hole`` handles a hole vertex: given input triples it returns output triples.
        """
        order = pl._topological_order(p)
        wires = {("L", i): t for i, t in enumerate(inputs)}
        for v in order:
            nin, nout = p.sigs[v]
            ins = [wires[p.up[("i", v, j)]] for j in range(nin)]
            label = p.labels[v]
            if label.startswith("?"):
                outs = hole(ins)
            else:
                outs = self._act(self._role(label), ins)
            for j, o in enumerate(outs):
                wires[("o", v, j)] = o
        return [wires[p.up[("R", r)]] for r in range(p.outputs)]

    @staticmethod
    def _act(role: str, ins: list[tuple]) -> list[tuple]:
        if role == "product":
            if len(ins) == 1:
                return list(ins)
            fs = [t[2] for t in ins]
            return [(prod(*(t[0] for t in ins)), prod(*(t[1] for t in ins)),
                     lambda x, fs=fs: tuple(f(y) for f, y in zip(fs, x)))]
        if role == "diagonal":
            return [ins[0], ins[0]]
        if role == "drop":
            return []
        if role == "identity":
            return list(ins)
        if role.startswith("carrier:"):
            o = base(role.split(":", 1)[1])
            return [(o, o, _ident)]
        raise FormatError(f"unknown role {role!r}")

    @staticmethod
    def _combine(triples: list[tuple]) -> Callable:
        if not triples:
            return lambda x: ()
        if len(triples) == 1:
            return triples[0][2]
        fs = [t[2] for t in triples]
        return lambda x: tuple(f(y) for f, y in zip(fs, x))

    def plant_action(self, p: Plant, h: Morphism) -> Callable:
        """``p(h): p(S) -> p(T)`` for a morphism ``h: S -> T``."""
        S, T = base(h.source), base(h.target)
        table = dict(h.mapping)
        roots = self._push(p, [(S, T, table.__getitem__)] * p.inputs)
        return self._combine(roots)

    # components
    def component(self, name: str, S: str) -> Component:
        table = self.components.get(name, {})
        if S in table:
            return table[S]
        decl = self.alphabet.footpath(name)
        if decl.inverse_of is not None:
            raise UnassignedComponent(f"no component for {name!r} on {S}")
        raise UnassignedComponent(f"no component for footpath {name!r} on object {S}")

    def _hole_object(self, ins: list[Obj]) -> str:
        names = {o.name for o in ins if o.kind == "base"}
        if any(o.kind != "base" for o in ins) or len(names) > 1:
            raise UnassignedComponent(
                "components are tabulated on single test objects; hole inputs are "
                + ", ".join(str(o) for o in ins))
        if names:
            return names.pop()
        # creator-only sources: use the carrier the source plant produces
        return ""

    def step_map(self, step: tc.Step, S: str) -> Callable:
        decl = self.alphabet.footpath(step.name)
        ctx = step.context
        S_obj = base(S)

        def hole(ins):
            srcs = [t[0] for t in ins]
            if any(t[0] != t[1] for t in ins):
                raise IllTyped("a footpath acts below another footpath")
            outs_src = self.root_objects(decl.source, srcs)
            outs_tgt = self.root_objects(decl.target, srcs)
            if len(outs_src) > 1:
                raise IllTyped(f"cannot whisker {step.name!r}: its plants have several roots")
            key = self._hole_object(srcs)
            if not key:
                found = {o.name for o in outs_src if o.kind == "base"}
                key = found.pop() if len(found) == 1 else S
            f = self.component(step.name, key)
            return [(a, b, f) for a, b in zip(outs_src, outs_tgt)]

        roots = self._push(ctx, [(S_obj, S_obj, _ident)] * ctx.inputs, hole)
        return self._combine(roots)

    def realize_pasting(self, p: tc.Pasting, S: str) -> dict:
        """Function table of a pasting on ``S``: element of source set -> element of target set."""
        run = self._pasting_map(p, S)
        return {x: run(x) for x in self.realize_plant(p.source, S)}

    def realize_2cell(self, term, S: str) -> dict:
        return self.realize_pasting(tc.flatten(term, self.alphabet), S)

    # sums
    def _ensure_ring(self, name: str):
        if name not in self._ring_checked:
            self._ring_checked[name] = self.carriers[name].ring_violations()
        if self._ring_checked[name]:
            raise MissingAddition(f"carrier {name} is not a commutative ring: {self._ring_checked[name][0]}")

    def _add(self, obj: Obj, x, y):
        if obj.kind == "base":
            c = self.carriers[obj.name]
            if c.add is None:
                raise MissingAddition(f"carrier {obj.name} has no addition")
            self._ensure_ring(obj.name)
            return c.add[(x, y)]
        if obj.kind == "unit":
            return ()
        return tuple(self._add(o, a, b) for o, a, b in zip(obj.parts, x, y))

    def _zero(self, obj: Obj):
        if obj.kind == "base":
            c = self.carriers[obj.name]
            if c.add is None:
                raise MissingAddition(f"carrier {obj.name} has no addition")
            return c.zero
        if obj.kind == "unit":
            return ()
        return tuple(self._zero(o) for o in obj.parts)

    def _scale(self, obj: Obj, k: int, x):
        if obj.kind == "base":
            c = self.carriers[obj.name]
            if k < 0:
                x, k = c.neg(x), -k
        elif obj.kind == "prod":
            return tuple(self._scale(o, k, y) for o, y in zip(obj.parts, x))
        acc = self._zero(obj)
        for _ in range(k):
            acc = self._add(obj, acc, x)
        return acc

    def realize_sum(self, terms: list[tuple[int, tc.Pasting]], S: str, source: Plant, target: Plant) -> dict:
        tobj = self.realize_object(target, S)
        tables = [(c, self.realize_pasting(p, S)) for c, p in terms]
        out = {}
        for x in self.realize_plant(source, S):
            acc = self._zero(tobj)
            for c, t in tables:
                acc = self._add(tobj, acc, self._scale(tobj, c, t[x]))
            out[x] = acc
        return out

    def check_relation(self, rel: CellRelation | str, S: str):
        """Evaluate both sides of ``rel`` on every element of the realized source."""
        if isinstance(rel, str):
            rel = self.relation(rel)
        sides = []
        for side in (rel.lhs, rel.rhs):
            sides.append([(c, tc.flatten(t, self.alphabet)) for c, t in side])
        every = sides[0] + sides[1]
        source, target = every[0][1].source, every[0][1].target
        for _, p in every:
            if p.source != source or p.target != target:
                raise IllTyped(f"relation {rel.name!r} is not parallel in this model")
        plain = all(c == 1 for c, _ in sides[0]) and all(c == 1 for c, _ in sides[1]) \
            and len(sides[0]) == 1 and len(sides[1]) == 1
        if plain:
            left = self.realize_pasting(sides[0][0][1], S)
            right = self.realize_pasting(sides[1][0][1], S)
        else:
            left = self.realize_sum(sides[0], S, source, target)
            right = self.realize_sum(sides[1], S, source, target)
        for x in left:
            if left[x] != right[x]:
                return Counterexample({"object": S, "input": elem_repr(x),
                                       "lhs": elem_repr(left[x]), "rhs": elem_repr(right[x])})
        return Holds(len(left))

    def relation(self, name: str) -> CellRelation:
        for r in self.relations + self.alphabet.cell_relations:
            if r.name == name:
                return r
        raise KeyError(f"no relation named {name!r}")

    # naturality
    def check_naturality(self, cell, morphisms: list[Morphism]):
        """Check the naturality square of ``cell`` (a footpath name or 2-cell term) for each morphism."""
        if isinstance(cell, str) and cell in self.alphabet.footpaths:
            decl = self.alphabet.footpath(cell)
            pasting = tc.Pasting(decl.source, decl.target,
                                 (tc.Step(pl.hole(decl.source.inputs, decl.source.outputs), cell),))
        elif isinstance(cell, tc.Pasting):
            pasting = cell
        else:
            term = self.alphabet.cell(cell) if isinstance(cell, str) else cell
            pasting = tc.flatten(term, self.alphabet)
        checked = 0
        for h in morphisms:
            f_S = self._pasting_map(pasting, h.source)
            f_T = self._pasting_map(pasting, h.target)
            P_h = self.plant_action(pasting.source, h)
            Q_h = self.plant_action(pasting.target, h)
            for x in self.realize_plant(pasting.source, h.source):
                checked += 1
                if Q_h(f_S(x)) != f_T(P_h(x)):
                    return Counterexample({"source": h.source, "target": h.target, "morphism": str(h),
                                           "element": elem_repr(x)})
        return Natural(checked)

    def _pasting_map(self, p: tc.Pasting, S: str) -> Callable:
        maps = [self.step_map(s, S) for s in p.steps]

        def run(x):
            for f in maps:
                x = f(x)
            return x
        return run

    def all_functions(self, S: str, T: str) -> list[Morphism]:
        A, B = self.carriers[S].elements, self.carriers[T].elements
        return [Morphism(S, T, tuple(zip(A, img))) for img in itertools.product(B, repeat=len(A))]

    def homomorphisms(self, S: str, T: str) -> list[Morphism]:
        cs, ct = self.carriers[S], self.carriers[T]
        out = []
        for h in self.all_functions(S, T):
            hm = dict(h.mapping)
            ok = True
            for op in ("mul", "add"):
                ts, tt = getattr(cs, op), getattr(ct, op)
                if ts is None or tt is None:
                    continue
                if any(hm[ts[(x, y)]] != tt[(hm[x], hm[y])] for x in cs.elements for y in cs.elements):
                    ok = False
                    break
            if ok:
                out.append(h)
        return out

    def morphisms(self, kind: str) -> list[Morphism]:
        out = []
        for S in self.objects:
            for T in self.objects:
                if kind == "homomorphisms":
                    out.extend(self.homomorphisms(S, T))
                elif kind == "functions":
                    out.extend(self.all_functions(S, T))
                else:
                    raise ValueError(f"unknown morphism set {kind!r}")
        return out

    # files
    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> FiniteModel:
        try:
            alpha_ref = data["alphabet"]
            apath = Path(alpha_ref)
            if base_dir is not None and not apath.is_absolute() and (base_dir / apath).exists():
                apath = base_dir / apath
            if apath.exists():
                alphabet = Alphabet.load(apath)
            elif shipped_path(alpha_ref if alpha_ref.endswith(".alpha") else alpha_ref + ".alpha"):
                alphabet = Alphabet.shipped(alpha_ref)
            else:
                raise FormatError(f"alphabet {alpha_ref!r} not found")
            carriers = {}
            for name, spec in data["carriers"].items():
                elems = list(spec["elements"])
                tables = {}
                for op in ("add", "mul"):
                    if op in spec:
                        rows = spec[op]
                        if len(rows) != len(elems) or any(len(r) != len(elems) for r in rows):
                            raise FormatError(f"{op} table of {name} is not {len(elems)}x{len(elems)}")
                        tables[op] = {(x, y): rows[i][j] for i, x in enumerate(elems) for j, y in enumerate(elems)}
                carriers[name] = Carrier(name, elems, tables.get("add"), tables.get("mul"))
            model = cls(alphabet, data["roles"], carriers, data.get("objects", list(carriers)))
            for fp, per_obj in data.get("components", {}).items():
                alphabet.footpath(fp)
                for obj, spec in per_obj.items():
                    model.components.setdefault(fp, {})[obj] = model._component_from_spec(obj, spec)
            for name, text in data.get("relations", {}).items():
                lhs, rhs = text.split("~")
                model.relations.append(CellRelation(tuple(alphabet.sum(lhs.strip())),
                                                    tuple(alphabet.sum(rhs.strip())), name, text))
        except KeyError as exc:
            raise FormatError(f"model description lacks {exc}") from exc
        return model

    def _component_from_spec(self, obj: str, spec) -> Component:
        c = self.carriers[obj]
        if isinstance(spec, str):
            spec = {"op": spec}
        if "table" in spec:
            table = spec["table"]
            lookup = {}
            for key, val in table.items():
                lookup[key] = val
            return lambda x, lookup=lookup: _parse_elem(lookup[elem_repr(x)])
        op = spec.get("op")
        if op in ("mul", "add"):
            t = c.mul if op == "mul" else c.add
            if t is None:
                raise FormatError(f"carrier {obj} has no {op} table")
            return lambda x, t=t: t[x]
        if op == "identity":
            return _ident
        if op == "zero":
            z = c.zero
            return lambda x, z=z: z
        if op == "first":
            return lambda x: x[0]
        if op == "second":
            return lambda x: x[1]
        if op == "pair":
            return lambda x: (x, x)
        raise FormatError(f"unknown component op {op!r}")

    @classmethod
    def load(cls, path: str | Path) -> FiniteModel:
        path = Path(path)
        if not path.exists():
            shipped = shipped_path(f"models/{path.name}")
            if shipped is None:
                raise FileNotFoundError(path)
            path = shipped
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: {exc}") from exc
        return cls.from_dict(data, path.parent)

    @classmethod
    def shipped(cls, name: str) -> FiniteModel:
        path = shipped_path(f"models/{name if name.endswith('.json') else name + '.json'}")
        if path is None:
            raise FileNotFoundError(f"no shipped model named {name!r}")
        return cls.load(path)


def _ident(x):
    return x


def _parse_elem(v):
    return tuple(_parse_elem(x) for x in v) if isinstance(v, list) else v


# -- module-level wrappers ---------------------------------------------------------

def realize_plant(m: FiniteModel, p: Plant, S: str) -> list:
    return m.realize_plant(p, S)


def realize_2cell(m: FiniteModel, t, S: str) -> dict:
    return m.realize_2cell(t, S)


def check_relation(m: FiniteModel, rel, S: str):
    return m.check_relation(rel, S)


def check_naturality(m: FiniteModel, footpath: str, morphisms: list[Morphism]):
    return m.check_naturality(footpath, morphisms)
