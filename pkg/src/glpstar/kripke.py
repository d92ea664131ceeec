"""Kripke frames and models, frame-class validators, model checking.

Frames are finite: a world tuple plus finitely many nonempty indexed
relations. The frame validator checks the three conditions that carve out
the target frame class (per-level transitive irreflexive relations and the
two inter-level conditions); the persistence validator checks the two
valuation clauses tying variable truth to sorts along edges.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .formulas import (
    OMEGA,
    And,
    Bot,
    Dia,
    Formula,
    Neg,
    Or,
    Sort,
    Top,
    Var,
    desugar,
    render_sort,
)

IRREFLEXIVITY = "irreflexivity"
TRANSITIVITY = "transitivity"
CONDITION_II = "condition-ii"
CONDITION_III = "condition-iii"
PERSISTENCE_I = "persistence-i"
PERSISTENCE_II = "persistence-ii"


class MissingVariableWarning(UserWarning):
    """A formula variable is absent from the model's valuation (treated false)."""


@dataclass(frozen=True)
class Violation:
    kind: str
    modalities: tuple[int, ...]
    worlds: tuple[str, ...]
    variable: Optional[str] = None

    def __str__(self):
        parts = [self.kind]
        if self.modalities:
            parts.append("levels " + ",".join(map(str, self.modalities)))
        if self.worlds:
            parts.append("worlds " + ",".join(self.worlds))
        if self.variable is not None:
            parts.append(f"variable {self.variable}")
        return ": ".join([parts[0], "; ".join(parts[1:])])


class KripkeFrame:
    """Finite frame: declared worlds and indexed relations over them."""

    def __init__(self, worlds: Iterable[str], relations: Mapping[int, Iterable[tuple[str, str]]]):
        self.worlds = tuple(worlds)
        if not self.worlds:
            raise ValueError("a frame needs at least one world")
        seen = set()
        for w in self.worlds:
            if w in seen:
                raise ValueError(f"duplicate world {w!r}")
            seen.add(w)
        self._world_set = seen
        rels: dict[int, frozenset[tuple[str, str]]] = {}
        for n, pairs in relations.items():
            pairset = frozenset(pairs)
            for x, y in pairset:
                if x not in seen or y not in seen:
                    raise ValueError(f"relation {n} references undeclared world")
            if pairset:
                rels[int(n)] = pairset
        self.relations = rels

    def has_world(self, w: str) -> bool:
        return w in self._world_set

    def successors(self, w: str, n: int) -> frozenset[str]:
        return frozenset(y for x, y in self.relations.get(n, frozenset()) if x == w)

    def __eq__(self, other):
        return (
            isinstance(other, KripkeFrame)
            and self._world_set == other._world_set
            and self.relations == other.relations
        )

    def __repr__(self):
        return f"KripkeFrame(worlds={self.worlds!r}, relations={self.relations!r})"


class KripkeModel:
    """Frame plus a valuation; each variable name carries one sort."""

    def __init__(
        self,
        worlds: Iterable[str] = (),
        relations: Optional[Mapping[int, Iterable[tuple[str, str]]]] = None,
        valuation: Optional[Mapping[str, Iterable[str]]] = None,
        sorts: Optional[Mapping[str, Sort]] = None,
        root: Optional[str] = None,
        frame: Optional[KripkeFrame] = None,
    ):
        self.frame = frame if frame is not None else KripkeFrame(worlds, relations or {})
        self.valuation = {name: frozenset(members) for name, members in (valuation or {}).items()}
        self.sorts = dict(sorts or {})
        for name, members in self.valuation.items():
            if name not in self.sorts:
                raise ValueError(f"variable {name!r} has no declared sort")
            for w in members:
                if not self.frame.has_world(w):
                    raise ValueError(f"valuation of {name!r} references undeclared world {w!r}")
        if root is not None and not self.frame.has_world(root):
            raise ValueError(f"undeclared root {root!r}")
        self.root = root

    @property
    def worlds(self) -> tuple[str, ...]:
        return self.frame.worlds

    @property
    def relations(self) -> dict[int, frozenset[tuple[str, str]]]:
        return self.frame.relations

    def __eq__(self, other):
        return (
            isinstance(other, KripkeModel)
            and self.frame == other.frame
            and self.valuation == other.valuation
            and self.sorts == other.sorts
            and self.root == other.root
        )

    def __repr__(self):
        val = {f"{n}:{render_sort(self.sorts[n])}": sorted(m) for n, m in self.valuation.items()}
        return (
            f"KripkeModel(worlds={self.worlds!r}, relations={self.relations!r}, "
            f"valuation={val!r}, root={self.root!r})"
        )


def _frame_of(obj) -> KripkeFrame:
    return obj.frame if isinstance(obj, KripkeModel) else obj


def check_jstar_frame(frame_or_model) -> list[Violation]:
    """All violations of the three frame conditions (empty list = valid frame)."""
    frame = _frame_of(frame_or_model)
    out: list[Violation] = []
    levels = sorted(frame.relations)
    for n in levels:
        rel = frame.relations[n]
        for x, y in sorted(rel):
            if x == y:
                out.append(Violation(IRREFLEXIVITY, (n,), (x,)))
        for x, y in sorted(rel):
            for y2, z in sorted(rel):
                if y2 == y and (x, z) not in rel:
                    out.append(Violation(TRANSITIVITY, (n,), (x, y, z)))
    for ni, n in enumerate(levels):
        rel_n = frame.relations[n]
        for m in levels[:ni]:
            rel_m = frame.relations[m]
            for x, y in sorted(rel_n):
                for z in frame.worlds:
                    if ((x, z) in rel_m) != ((y, z) in rel_m):
                        out.append(Violation(CONDITION_II, (m, n), (x, y, z)))
            for x, y in sorted(rel_m):
                for y2, z in sorted(rel_n):
                    if y2 == y and (x, z) not in rel_m:
                        out.append(Violation(CONDITION_III, (m, n), (x, y, z)))
    return out


def check_strong_persistence(model: KripkeModel) -> list[Violation]:
    """All violations of the two persistence clauses (omega variables are free)."""
    out: list[Violation] = []
    for n in sorted(model.relations):
        rel = model.relations[n]
        for name in sorted(model.valuation):
            sort = model.sorts[name]
            if sort is OMEGA:
                continue
            members = model.valuation[name]
            for x, y in sorted(rel):
                if sort <= n and y in members and x not in members:
                    out.append(Violation(PERSISTENCE_I, (n,), (x, y), name))
                if sort < n and y not in members and x in members:
                    out.append(Violation(PERSISTENCE_II, (n,), (x, y), name))
    return out


class Evaluator:
    """Bottom-up extension computation over a model, as world bitmasks."""

    def __init__(self, model: KripkeModel):
        self.model = model
        self.index = {w: i for i, w in enumerate(model.worlds)}
        self.full = (1 << len(model.worlds)) - 1
        self.succ: dict[int, list[int]] = {}
        for n, rel in model.relations.items():
            masks = [0] * len(model.worlds)
            for x, y in rel:
                masks[self.index[x]] |= 1 << self.index[y]
            self.succ[n] = masks
        self._cache: dict[Formula, int] = {}
        self._warned: set[str] = set()

    def extension(self, formula: Formula) -> int:
        cached = self._cache.get(formula)
        if cached is not None:
            return cached
        if isinstance(formula, Top):
            ext = self.full
        elif isinstance(formula, Bot):
            ext = 0
        elif isinstance(formula, Var):
            members = self.model.valuation.get(formula.name)
            if members is None:
                if formula.name not in self._warned:
                    self._warned.add(formula.name)
                    warnings.warn(
                        f"variable {formula.name!r} not in valuation; treated as false everywhere",
                        MissingVariableWarning,
                        stacklevel=4,
                    )
                ext = 0
            else:
                ext = 0
                for w in members:
                    ext |= 1 << self.index[w]
        elif isinstance(formula, Neg):
            ext = self.full & ~self.extension(formula.child)
        elif isinstance(formula, And):
            ext = self.extension(formula.left) & self.extension(formula.right)
        elif isinstance(formula, Or):
            ext = self.extension(formula.left) | self.extension(formula.right)
        elif isinstance(formula, Dia):
            child = self.extension(formula.child)
            masks = self.succ.get(formula.index)
            ext = 0
            if masks is not None:
                for i, mask in enumerate(masks):
                    if mask & child:
                        ext |= 1 << i
        else:
            raise TypeError(f"not a core formula: {formula!r}")
        self._cache[formula] = ext
        return ext

    def holds(self, world: str, formula: Formula) -> bool:
        if world not in self.index:
            raise KeyError(f"unknown world {world!r}")
        return bool(self.extension(formula) >> self.index[world] & 1)


def model_check(model: KripkeModel, world: str, formula: Formula) -> bool:
    """Truth of a formula at a world (sugar is desugared first)."""
    return Evaluator(model).holds(world, desugar(formula))


def valid_in_model(model: KripkeModel, formula: Formula) -> bool:
    """True when the formula holds at every world."""
    ev = Evaluator(model)
    return ev.extension(desugar(formula)) == ev.full


def find_roots(model_or_frame, transitive: bool = False) -> frozenset[str]:
    """Worlds seeing every other world.

    The default is the literal one-step reading: r is a root when every other
    world is an immediate successor under some relation. With transitive=True
    reachability along arbitrary relation paths counts instead.
    """
    frame = _frame_of(model_or_frame)
    index = {w: i for i, w in enumerate(frame.worlds)}
    full = (1 << len(frame.worlds)) - 1
    step = [0] * len(frame.worlds)
    for rel in frame.relations.values():
        for x, y in rel:
            step[index[x]] |= 1 << index[y]
    reach = list(step)
    if transitive:
        changed = True
        while changed:
            changed = False
            for i in range(len(reach)):
                acc = reach[i]
                scan = acc
                while scan:
                    j = (scan & -scan).bit_length() - 1
                    acc |= reach[j]
                    scan &= scan - 1
                if acc != reach[i]:
                    reach[i] = acc
                    changed = True
    return frozenset(
        w for w, i in index.items() if reach[i] | (1 << i) == full
    )


def adjoin_root(model: KripkeModel) -> KripkeModel:
    """Add a fresh world below everything at level 0, copying the root's valuation.

    The input needs a designated root; the new world becomes the root, sees
    every old world through the level-0 relation, and agrees with the old
    root on every variable.
    """
    if model.root is None:
        raise ValueError("adjoin_root needs a model with a designated root")
    fresh = "0"
    k = 0
    while model.frame.has_world(fresh):
        fresh = f"r{k}"
        k += 1
    relations = {n: set(rel) for n, rel in model.relations.items()}
    r0 = relations.setdefault(0, set())
    for w in model.worlds:
        r0.add((fresh, w))
    valuation = {}
    for name, members in model.valuation.items():
        if model.root in members:
            valuation[name] = frozenset(members | {fresh})
        else:
            valuation[name] = members
    return KripkeModel(
        worlds=(fresh,) + model.worlds,
        relations=relations,
        valuation=valuation,
        sorts=model.sorts,
        root=fresh,
    )


def generated_submodel(model: KripkeModel, world: str) -> KripkeModel:
    """Restriction to the worlds reachable from the given world (inclusive)."""
    if not model.frame.has_world(world):
        raise KeyError(f"unknown world {world!r}")
    reached = {world}
    frontier = [world]
    while frontier:
        w = frontier.pop()
        for rel in model.relations.values():
            for x, y in rel:
                if x == w and y not in reached:
                    reached.add(y)
                    frontier.append(y)
    worlds = tuple(w for w in model.worlds if w in reached)
    relations = {
        n: frozenset((x, y) for x, y in rel if x in reached and y in reached)
        for n, rel in model.relations.items()
    }
    valuation = {name: frozenset(m & reached) for name, m in model.valuation.items()}
    return KripkeModel(
        worlds=worlds,
        relations=relations,
        valuation=valuation,
        sorts=model.sorts,
        root=world,
    )
