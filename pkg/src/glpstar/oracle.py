"""Exhaustive finite-model search: refuter and cross-validator.

Models are enumerated by world count, then by the relation bitmaps in
ascending order (lowest modality outermost), then by valuation bitmaps.
Frames are built level by level from precomputed strict orders, checking the
two inter-level conditions incrementally, so every yielded frame passes the
frame validator by construction. Valuations are generated directly as
persistence-closed sets per variable (closed under predecessors at levels
from the sort up and successors strictly above it) instead of filtering the
full power set; that closure is what makes the search space tractable.

Absence of a countermodel within the budget proves nothing; this module
never claims theoremhood.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .formulas import OMEGA, Formula, Sort, desugar, variables_of
from .kripke import Evaluator, KripkeModel, check_jstar_frame, check_strong_persistence
from .reductions import occurring_modalities


@dataclass(frozen=True)
class SearchBudget:
    max_worlds: int = 4
    modalities: Optional[tuple[int, ...]] = None
    max_models: int = 10_000_000

    def __post_init__(self):
        if self.max_worlds < 1 or self.max_models < 1:
            raise ValueError("budget bounds must be positive")


_strict_orders_cache: dict[int, list[int]] = {}
_compat_cache: dict[tuple[int, int, int], bool] = {}


def _rows(mask: int, k: int) -> list[int]:
    return [(mask >> (i * k)) & ((1 << k) - 1) for i in range(k)]


def _strict_orders(k: int) -> list[int]:
    """All transitive irreflexive relations on k worlds, ascending bitmaps."""
    cached = _strict_orders_cache.get(k)
    if cached is not None:
        return cached
    diag = 0
    for i in range(k):
        diag |= 1 << (i * k + i)
    out = []
    for mask in range(1 << (k * k)):
        if mask & diag:
            continue
        rows = _rows(mask, k)
        ok = True
        for x in range(k):
            scan = rows[x]
            while scan:
                y = (scan & -scan).bit_length() - 1
                if rows[y] & ~rows[x]:
                    ok = False
                    break
                scan &= scan - 1
            if not ok:
                break
        if ok:
            out.append(mask)
    _strict_orders_cache[k] = out
    return out


def _compatible(lower: int, upper: int, k: int) -> bool:
    """Inter-level conditions between a lower and a higher relation."""
    key = (k, lower, upper)
    hit = _compat_cache.get(key)
    if hit is not None:
        return hit
    low_rows = _rows(lower, k)
    up_rows = _rows(upper, k)
    ok = True
    for x in range(k):
        scan = up_rows[x]
        while scan:
            y = (scan & -scan).bit_length() - 1
            if low_rows[x] != low_rows[y]:
                ok = False
                break
            scan &= scan - 1
        if not ok:
            break
    if ok:
        for x in range(k):
            scan = low_rows[x]
            while scan:
                y = (scan & -scan).bit_length() - 1
                if up_rows[y] & ~low_rows[x]:
                    ok = False
                    break
                scan &= scan - 1
            if not ok:
                break
    _compat_cache[key] = ok
    return ok


def _normalize_variables(variables) -> list[tuple[str, Sort]]:
    if isinstance(variables, Mapping):
        return sorted(variables.items())
    out = []
    for item in variables:
        if hasattr(item, "name"):
            out.append((item.name, item.sort))
        else:
            name, sort = item
            out.append((name, sort))
    return out


def _closed_valuations(rel_masks: Sequence[int], levels: Sequence[int], k: int, sort: Sort) -> list[int]:
    """Persistence-closed member sets for one variable, ascending bitmaps."""
    # requirement graph: including u drags creach(u) in
    edges = [0] * k
    for level, mask in zip(levels, rel_masks):
        if sort is OMEGA:
            continue
        rows = _rows(mask, k)
        for x in range(k):
            scan = rows[x]
            while scan:
                y = (scan & -scan).bit_length() - 1
                if sort <= level:
                    edges[y] |= 1 << x  # member successor forces the predecessor in
                if sort < level:
                    edges[x] |= 1 << y  # member predecessor forces the successor in
                scan &= scan - 1
    creach = list(edges)
    changed = True
    while changed:
        changed = False
        for u in range(k):
            acc = creach[u]
            scan = acc
            while scan:
                v = (scan & -scan).bit_length() - 1
                acc |= creach[v]
                scan &= scan - 1
            if acc != creach[u]:
                creach[u] = acc
                changed = True
    dragged_by = [0] * k  # v is in dragged_by[u] when u in creach(v)
    for v in range(k):
        scan = creach[v]
        while scan:
            u = (scan & -scan).bit_length() - 1
            dragged_by[u] |= 1 << v
            scan &= scan - 1

    out: list[int] = []

    def walk(u: int, included: int, excluded: int) -> None:
        if u == k:
            out.append(included)
            return
        if included >> u & 1:
            walk(u + 1, included, excluded)
            return
        if excluded >> u & 1:
            walk(u + 1, included, excluded)
            return
        walk(u + 1, included, excluded | dragged_by[u])
        if not creach[u] & excluded:
            walk(u + 1, included | creach[u] | (1 << u), excluded)

    walk(0, 0, 0)
    return sorted(set(out))


class ModelEnumeration:
    """Iterable over the valid models within a budget; exposes truncation."""

    def __init__(self, variables, modalities: Iterable[int], budget: Optional[SearchBudget] = None):
        self.variables = _normalize_variables(variables)
        self.levels = sorted(set(modalities))
        self.budget = budget or SearchBudget()
        self.truncated = False
        self.models_examined = 0

    def __iter__(self) -> Iterator[KripkeModel]:
        self.truncated = False
        self.models_examined = 0
        for k in range(1, self.budget.max_worlds + 1):
            names = tuple(f"w{i}" for i in range(k))
            orders = _strict_orders(k)
            for rel_masks in self._frames(orders, k):
                for val_masks in self._valuations(rel_masks, k):
                    if self.models_examined >= self.budget.max_models:
                        self.truncated = True
                        return
                    self.models_examined += 1
                    yield self._materialize(names, rel_masks, val_masks, k)

    def _frames(self, orders: list[int], k: int) -> Iterator[tuple[int, ...]]:
        levels = self.levels
        if not levels:
            yield ()
            return

        def extend(chosen: list[int]) -> Iterator[tuple[int, ...]]:
            if len(chosen) == len(levels):
                yield tuple(chosen)
                return
            for mask in orders:
                if all(_compatible(lower, mask, k) for lower in chosen):
                    chosen.append(mask)
                    yield from extend(chosen)
                    chosen.pop()

        yield from extend([])

    def _valuations(self, rel_masks: tuple[int, ...], k: int) -> Iterator[tuple[int, ...]]:
        per_var = [
            _closed_valuations(rel_masks, self.levels, k, sort)
            for _, sort in self.variables
        ]
        if not per_var:
            yield ()
            return

        def product(i: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
            if i == len(per_var):
                yield tuple(acc)
                return
            for mask in per_var[i]:
                acc.append(mask)
                yield from product(i + 1, acc)
                acc.pop()

        yield from product(0, [])

    def _materialize(self, names: tuple[str, ...], rel_masks: tuple[int, ...],
                     val_masks: tuple[int, ...], k: int) -> KripkeModel:
        relations = {}
        for level, mask in zip(self.levels, rel_masks):
            pairs = set()
            rows = _rows(mask, k)
            for x in range(k):
                scan = rows[x]
                while scan:
                    y = (scan & -scan).bit_length() - 1
                    pairs.add((names[x], names[y]))
                    scan &= scan - 1
            if pairs:
                relations[level] = frozenset(pairs)
        valuation = {}
        sorts = {}
        for (name, sort), mask in zip(self.variables, val_masks):
            valuation[name] = frozenset(names[i] for i in range(k) if mask >> i & 1)
            sorts[name] = sort
        return KripkeModel(worlds=names, relations=relations, valuation=valuation, sorts=sorts)


def enumerate_models(variables, modalities: Iterable[int],
                     budget: Optional[SearchBudget] = None) -> ModelEnumeration:
    """Every valid model within the budget (worlds named w0, w1, ...)."""
    return ModelEnumeration(variables, modalities, budget)


@dataclass
class SearchResult:
    model: Optional[KripkeModel]
    world: Optional[str]
    truncated: bool
    models_examined: int

    @property
    def found(self) -> bool:
        return self.model is not None

    def __bool__(self):
        return self.found


def brute_force_countermodel(formula: Formula, budget: Optional[SearchBudget] = None) -> SearchResult:
    """First enumerated model and world refuting the formula, if any."""
    budget = budget or SearchBudget()
    f = desugar(formula)
    modalities = budget.modalities if budget.modalities is not None else tuple(sorted(occurring_modalities(f)))
    variables = variables_of(f)
    enumeration = ModelEnumeration(variables, modalities, budget)
    for model in enumeration:
        ev = Evaluator(model)
        ext = ev.extension(f)
        if ext != ev.full:
            world = next(w for w in model.worlds if not ext >> ev.index[w] & 1)
            if check_jstar_frame(model) or check_strong_persistence(model):
                raise AssertionError("enumerator produced an invalid model")
            if ev.holds(world, f):
                raise AssertionError("refutation does not refute")
            witness = KripkeModel(
                worlds=model.worlds, relations=model.relations,
                valuation=model.valuation, sorts=model.sorts, root=world,
            )
            return SearchResult(witness, world, enumeration.truncated, enumeration.models_examined)
    return SearchResult(None, None, enumeration.truncated, enumeration.models_examined)


@dataclass
class CrossValidationReport:
    system: object
    formula: Formula
    target: Formula
    verdict: object
    search: SearchResult
    status: str  # agreement | disagreement | inconclusive

    @property
    def agreement(self) -> bool:
        return self.status == "agreement"


def cross_validate(formula: Formula, system, budget: Optional[SearchBudget] = None) -> CrossValidationReport:
    """Run the decision procedure against the brute-force refuter.

    A disagreement (validated refutation of a claimed theorem, or a small
    claimed countermodel the exhaustive search cannot reproduce) is always a
    bug in one of the two engines.
    """
    from .decide import SystemId, decide, reduction_target

    if isinstance(system, str):
        system = SystemId.parse(system)
    budget = budget or SearchBudget()
    target = reduction_target(system, desugar(formula))
    verdict = decide(system, formula)
    search = brute_force_countermodel(target, budget)
    searched_modalities = (
        set(budget.modalities) if budget.modalities is not None else set(occurring_modalities(target))
    )
    if verdict.theorem:
        if search.found:
            status = "disagreement"
        elif search.truncated:
            status = "inconclusive"
        else:
            status = "agreement"
    else:
        if search.found:
            status = "agreement"
        else:
            cm = verdict.countermodel
            fits = (
                len(cm.worlds) <= budget.max_worlds
                and set(cm.relations) <= searched_modalities
                and not search.truncated
            )
            status = "disagreement" if fits else "inconclusive"
    return CrossValidationReport(system, formula, target, verdict, search, status)
