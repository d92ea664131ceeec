"""Shared random generators: formulas, frames, models, perturbations.

Frames are generated by nested partitioning: the lowest modality orders a
random partition of the worlds, and each part is recursively partitioned
and ordered by the next modality. Lifting a strict partial order on parts
to their members makes the per-level relations transitive and irreflexive
and gives the two inter-level conditions by construction (validated in the
kripke tests). Valuations are random seeds closed under the persistence
clauses.
"""

from __future__ import annotations

import random

from glpstar.formulas import (
    BOT,
    OMEGA,
    TOP,
    And,
    Dia,
    Implies,
    Neg,
    Or,
    Var,
    desugar,
)
from glpstar.kripke import KripkeModel


def gen_formula(rng: random.Random, depth: int, pool, mods):
    """Random formula of height at most `depth` (leaves count one)."""
    if depth <= 1:
        r = rng.random()
        if r < 0.70 and pool:
            return rng.choice(pool)
        return TOP if r < 0.85 else BOT
    r = rng.random()
    if r < 0.18:
        return gen_formula(rng, 1, pool, mods)
    if r < 0.34:
        return Neg(gen_formula(rng, depth - 1, pool, mods))
    if r < 0.62 and mods:
        return Dia(rng.choice(mods), gen_formula(rng, depth - 1, pool, mods))
    left = gen_formula(rng, depth - 1, pool, mods)
    right = gen_formula(rng, depth - 1, pool, mods)
    return rng.choice([And(left, right), Or(left, right), Implies(left, right)])


def gen_sorted_formula(rng: random.Random, depth: int = 3, max_vars: int = 2,
                       mods=(0, 1, 2), sorts=(0, 1, 2, OMEGA)):
    """Desugared random formula over at most `max_vars` sorted variables."""
    pool = [Var("p", rng.choice(sorts))]
    for extra in "qr"[: max_vars - 1]:
        if rng.random() < 0.7:
            pool.append(Var(extra, rng.choice(sorts)))
    return desugar(gen_formula(rng, depth, pool, list(mods)))


def _random_partition(rng: random.Random, items: list) -> list[list]:
    if not items:
        return []
    shuffled = items[:]
    rng.shuffle(shuffled)
    parts: list[list] = []
    for item in shuffled:
        if parts and rng.random() < 0.55:
            rng.choice(parts).append(item)
        else:
            parts.append([item])
    return parts


def _random_strict_order(rng: random.Random, size: int) -> set[tuple[int, int]]:
    # random edges respecting a fixed index order, then transitive closure
    edges = {(i, j) for i in range(size) for j in range(i + 1, size) if rng.random() < 0.5}
    changed = True
    while changed:
        changed = False
        for a, b in list(edges):
            for c, d in list(edges):
                if b == c and (a, d) not in edges:
                    edges.add((a, d))
                    changed = True
    return edges


def gen_jstar_frame(rng: random.Random, worlds: list[str], levels: list[int],
                    relations: dict[int, set[tuple[str, str]]] | None = None,
                    level_idx: int = 0) -> dict[int, set[tuple[str, str]]]:
    """Nested-partition frame over the given worlds and modality levels."""
    if relations is None:
        relations = {n: set() for n in sorted(levels)}
        levels = sorted(levels)
    if level_idx >= len(levels) or len(worlds) <= 1:
        return relations
    n = levels[level_idx]
    parts = _random_partition(rng, worlds)
    order = _random_strict_order(rng, len(parts))
    for i, j in order:
        for x in parts[i]:
            for y in parts[j]:
                relations[n].add((x, y))
    for part in parts:
        gen_jstar_frame(rng, part, levels, relations, level_idx + 1)
    return relations


def close_valuation(members: set[str], sort, relations: dict, levels) -> frozenset[str]:
    """Close a seed set under the two persistence clauses."""
    out = set(members)
    changed = True
    while changed:
        changed = False
        for n in levels:
            for x, y in relations.get(n, ()):
                if sort is not OMEGA and sort <= n and y in out and x not in out:
                    out.add(x)
                    changed = True
                if sort is not OMEGA and sort < n and x in out and y not in out:
                    out.add(y)
                    changed = True
    return frozenset(out)


def gen_persistent_model(rng: random.Random, max_worlds: int = 5,
                         levels=(0, 1, 2), var_sorts=None) -> KripkeModel:
    """Random strongly persistent model on a nested-partition frame."""
    if var_sorts is None:
        var_sorts = {"p": 0, "q": 1, "r": OMEGA}
    k = rng.randint(1, max_worlds)
    worlds = [f"w{i}" for i in range(k)]
    active = sorted(rng.sample(list(levels), rng.randint(1, len(levels))))
    relations = gen_jstar_frame(rng, worlds, active)
    valuation = {}
    sorts = {}
    for name, sort in var_sorts.items():
        seed = {w for w in worlds if rng.random() < 0.4}
        valuation[name] = close_valuation(seed, sort, relations, active)
        sorts[name] = sort
    return KripkeModel(
        worlds=tuple(worlds),
        relations={n: frozenset(rel) for n, rel in relations.items() if rel},
        valuation=valuation,
        sorts=sorts,
    )


def perturb_model(rng: random.Random, model: KripkeModel) -> KripkeModel:
    """Flip one variable at one world, skipping the closure step."""
    name = rng.choice(sorted(model.valuation))
    world = rng.choice(model.worlds)
    members = set(model.valuation[name])
    if world in members:
        members.discard(world)
    else:
        members.add(world)
    valuation = dict(model.valuation)
    valuation[name] = frozenset(members)
    return KripkeModel(
        worlds=model.worlds,
        relations=model.relations,
        valuation=valuation,
        sorts=model.sorts,
        root=model.root,
    )
