import random

import pytest

from glpstar.formulas import (
    BOT,
    OMEGA,
    TOP,
    And,
    Dia,
    Neg,
    Var,
    adequate_closure,
    modified_negation,
    sort_of,
)
from glpstar.hintikka import (
    CanonicalEngine,
    ResourceLimitError,
    build_canonical,
    build_canonical_detailed,
    canonical_relation,
    hintikka_candidates,
)
from glpstar.kripke import check_jstar_frame, check_strong_persistence, model_check
from conftest import gen_sorted_formula

p0 = Var("p", 0)
pw = Var("p", OMEGA)


def closure_of(*formulas):
    return adequate_closure(set(formulas))


class TestHintikkaCandidates:
    def test_single_diamond_sorted_variable(self):
        delta = closure_of(Dia(1, p0))
        worlds = hintikka_candidates(delta)
        d, nd = Dia(1, p0), Neg(Dia(1, p0))
        dn, ndn = Dia(1, Neg(p0)), Neg(Dia(1, Neg(p0)))
        expected = {
            frozenset({TOP, p0, d, ndn}),
            frozenset({TOP, p0, nd, ndn}),
            frozenset({TOP, Neg(p0), nd, dn}),
            frozenset({TOP, Neg(p0), nd, ndn}),
        }
        assert worlds == expected

    def test_trivial_delta(self):
        assert hintikka_candidates({TOP, Neg(TOP)}) == {frozenset({TOP})}

    def test_variable_pair(self):
        delta = closure_of(p0)
        assert hintikka_candidates(delta) == {
            frozenset({TOP, p0}),
            frozenset({TOP, Neg(p0)}),
        }

    def test_invariants_hold(self):
        rng = random.Random(41)
        for _ in range(25):
            f = gen_sorted_formula(rng, depth=2, mods=(0, 1))
            delta = closure_of(f)
            if len(delta) > 20:
                continue
            for world in hintikka_candidates(delta):
                assert TOP in world
                for member in delta:
                    assert (member in world) != (modified_negation(member) in world)
                for member in delta:
                    if isinstance(member, Dia) and member in world:
                        s = sort_of(member.child)
                        if s is not OMEGA and s <= member.index:
                            assert member.child in world
                        inner = member.child
                        if isinstance(inner, Dia) and member.index < inner.index:
                            assert Dia(member.index, inner.child) in world

    def test_requires_adequate_input(self):
        with pytest.raises(ValueError):
            hintikka_candidates({Dia(0, p0)})

    def test_candidate_cap(self):
        delta = closure_of(And(Dia(0, pw), Dia(1, Var("q", OMEGA))))
        with pytest.raises(ResourceLimitError):
            hintikka_candidates(delta, candidate_cap=2)


class TestCanonicalRelation:
    def setup_method(self):
        self.delta = closure_of(Dia(1, p0))
        self.d = Dia(1, p0)
        self.dn = Dia(1, Neg(p0))

    def test_edge_exists(self):
        x = {TOP, p0, self.d, Neg(self.dn)}
        y = {TOP, p0, Neg(self.d), Neg(self.dn)}
        assert canonical_relation(self.delta, x, y, 1)

    def test_never_reflexive(self):
        for world in hintikka_candidates(self.delta):
            assert not canonical_relation(self.delta, world, world, 1)

    def test_level_without_diamonds_is_empty(self):
        x = {TOP, p0, self.d, Neg(self.dn)}
        y = {TOP, p0, Neg(self.d), Neg(self.dn)}
        assert not canonical_relation(self.delta, x, y, 0)

    def test_engine_matches_reference(self):
        rng = random.Random(42)
        checked = 0
        while checked < 15:
            f = gen_sorted_formula(rng, depth=2, mods=(0, 1))
            delta = closure_of(f)
            engine = CanonicalEngine(delta)
            if engine.count > 40:
                continue
            members = [engine.membership(i) for i in range(engine.count)]
            for i, x in enumerate(members):
                for j, y in enumerate(members):
                    for n in engine.levels:
                        assert engine.relation(i, j, n) == canonical_relation(delta, x, y, n)
            checked += 1


class TestBuildCanonical:
    def test_all_survive_on_simple_closure(self):
        delta = closure_of(Dia(1, p0))
        result = build_canonical_detailed(delta)
        assert len(result.model.worlds) == 4
        # every diamond world has an edge to a body world without the diamond
        for w, mem in result.membership.items():
            if Dia(1, p0) in mem:
                successors = [
                    y for x, y in result.model.relations.get(1, frozenset()) if x == w
                ]
                assert any(
                    p0 in result.membership[y] and Dia(1, p0) not in result.membership[y]
                    for y in successors
                )

    def test_trivial_delta(self):
        model = build_canonical({TOP, Neg(TOP)})
        assert len(model.worlds) == 1
        assert model.relations == {}

    def test_unwitnessable_diamond_dies(self):
        delta = closure_of(Dia(0, BOT))
        result = build_canonical_detailed(delta)
        assert all(Dia(0, BOT) not in mem for mem in result.membership.values())
        assert len(result.model.worlds) == 1

    def test_output_validates_and_truth_lemma(self):
        rng = random.Random(43)
        for _ in range(20):
            f = gen_sorted_formula(rng, depth=2, mods=(0, 1, 2))
            delta = closure_of(f)
            result = build_canonical_detailed(delta, verify_truth_lemma=True)
            assert check_jstar_frame(result.model) == []
            assert check_strong_persistence(result.model) == []

    def test_truth_lemma_via_model_check(self):
        delta = closure_of(Dia(1, p0))
        result = build_canonical_detailed(delta)
        for w, mem in result.membership.items():
            for member in delta:
                assert model_check(result.model, w, member) == (member in mem)
