"""Syntactic reduction premises between the four systems.

Each builder returns a desugared formula assembled in a fixed order, so the
output is byte-identical across runs. Nothing is simplified: empty
conjunctions become T and trivial conjuncts stay visible.

The pair builder for the language-preserving premise keeps the *same* body
on both sides of each implication, pairing every enumerated diamond body
with every higher-or-equal enumerated level. The displayed form that mixes
two bodies makes the premise unprovable (for <2>p and <0>q it would demand
<2>p -> <0>q), so the same-body reading is the one the reduction theorems
need; see the decision notes shipped next to the repository.
"""

from __future__ import annotations

from typing import Iterable

from .formulas import (
    OMEGA,
    TOP,
    Dia,
    Formula,
    Neg,
    Or,
    conjoin,
    diamond_subformulas,
    sort_of,
    variables_of,
    _require_core,
)

ModalitySet = frozenset


def _implies(a: Formula, b: Formula) -> Formula:
    return Or(Neg(a), b)


def _box(n: int, f: Formula) -> Formula:
    return Neg(Dia(n, Neg(f)))


def m_formula(formula: Formula) -> Formula:
    """For every diamond subformula <m>x and every level m < j <= max, add <j>x -> <m>x."""
    _require_core(formula)
    dias = diamond_subformulas(formula, "occurrence")
    if not dias:
        return TOP
    top_level = max(m for m, _ in dias)
    conjuncts = [
        _implies(Dia(j, body), Dia(m, body))
        for m, body in dias
        for j in range(m + 1, top_level + 1)
    ]
    return conjoin(conjuncts)


def m_plus(formula: Formula) -> Formula:
    """m_formula plus its boxed copies at every level up to the maximum."""
    _require_core(formula)
    dias = diamond_subformulas(formula, "occurrence")
    if not dias:
        return TOP
    top_level = max(m for m, _ in dias)
    core = m_formula(formula)
    return conjoin([core] + [_box(i, core) for i in range(top_level + 1)])


def n_formula(formula: Formula) -> Formula:
    """Like m_formula but only using levels that occur in the input.

    Diamond subformulas are enumerated in level order (stable in occurrence
    order on ties); each body at position i is paired with the level of every
    later position j, giving <m_j>x_i -> <m_i>x_i.
    """
    _require_core(formula)
    dias = diamond_subformulas(formula, "level")
    conjuncts = [
        _implies(Dia(dias[j][0], dias[i][1]), Dia(dias[i][0], dias[i][1]))
        for i in range(len(dias))
        for j in range(i + 1, len(dias))
    ]
    return conjoin(conjuncts)


def n_plus(formula: Formula, variant: str = "default") -> Formula:
    """n_formula plus boxed copies.

    The default puts n_formula under one box per distinct occurring level,
    ascending. The "literal" variant reproduces the displayed text instead,
    boxing the bare input once per enumeration entry.
    """
    _require_core(formula)
    dias = diamond_subformulas(formula, "level")
    core = n_formula(formula)
    if not dias:
        return core
    if variant == "default":
        levels = sorted({m for m, _ in dias})
        return conjoin([core] + [_box(m, core) for m in levels])
    if variant == "literal":
        return conjoin([core] + [_box(m, formula) for m, _ in dias])
    raise ValueError(f"unknown n_plus variant {variant!r}")


def h_formula(formula: Formula) -> Formula:
    """For every diamond subformula <n>x, add x -> <n>x (occurrence order)."""
    _require_core(formula)
    dias = diamond_subformulas(formula, "occurrence")
    return conjoin([_implies(body, Dia(n, body)) for n, body in dias])


def r_theta(formula: Formula, theta: Iterable[int]) -> Formula:
    """Sort axioms over a modality set: <j>p -> p for j >= sort(p), and
    <j>~p -> ~p for j > sort(p); omega variables contribute nothing."""
    _require_core(formula)
    levels = sorted(set(theta))
    conjuncts: list[Formula] = []
    for var in variables_of(formula):
        if var.sort is OMEGA:
            continue
        for j in levels:
            if j >= var.sort:
                conjuncts.append(_implies(Dia(j, var), var))
        for j in levels:
            if j > var.sort:
                conjuncts.append(_implies(Dia(j, Neg(var)), Neg(var)))
    return conjoin(conjuncts)


def r_theta_plus(formula: Formula, theta: Iterable[int]) -> Formula:
    """r_theta plus one boxed copy per modality in the set, ascending."""
    _require_core(formula)
    levels = sorted(set(theta))
    core = r_theta(formula, levels)
    return conjoin([core] + [_box(j, core) for j in levels]) if levels else core


def occurring_modalities(formula: Formula) -> frozenset[int]:
    """All diamond indices occurring anywhere in the formula."""
    return frozenset(m for m, _ in diamond_subformulas(formula, "occurrence"))
