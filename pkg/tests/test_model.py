import pytest

from corgal import (
    And,
    Atom,
    EnumerationCapExceeded,
    EpistemicModel,
    Know,
    Not,
    Or,
    TOP,
    agent_unions,
    characteristic_formulas,
    choice_sets,
    contract,
    definable_formula,
    evaluate,
    models_equal,
    parse_model,
    random_model,
    truth_set,
    update,
)


def two_state_twin():
    # both states satisfy exactly {p}; every agent relates them
    return EpistemicModel(
        states=["x", "y"],
        agents=["a", "b"],
        atoms=["p"],
        partitions={"a": [["x", "y"]], "b": [["x", "y"]]},
        valuation={"p": ["x", "y"]},
    )


class TestConstruction:
    def test_partition_invariants_enforced(self):
        with pytest.raises(ValueError, match="cover"):
            EpistemicModel(["x", "y"], ["a"], ["p"], {"a": [["x"]]}, {"p": []})
        with pytest.raises(ValueError, match="overlap"):
            EpistemicModel(
                ["x", "y"], ["a"], ["p"], {"a": [["x", "y"], ["y"]]}, {"p": []}
            )
        with pytest.raises(ValueError, match="empty"):
            EpistemicModel(["x"], ["a"], ["p"], {"a": [["x"], []]}, {"p": []})


class TestUpdate:
    def test_train_announcement_drops_a_state(self, train):
        restricted = update(train, train.state_mask(["w"]))
        assert restricted.states == ("w",)
        assert all(len(restricted.blocks(a)) == 1 for a in restricted.agents)

    def test_trivial_announcement_is_identity(self, train):
        assert models_equal(update(train, train.full), train)

    def test_learning_from_an_extension(self, counterexample):
        # announcing "a knows q" teaches b that q
        mask = counterexample.state_mask(["pqr", "qr", "pq"])
        restricted = update(counterexample, mask)
        assert len(restricted.states) == 3
        assert evaluate(restricted, "pqr", Know("b", Atom("q")))

    def test_empty_extension_is_an_error(self, train):
        with pytest.raises(ValueError, match="empty"):
            update(train, 0)

    def test_update_preserves_validity(self):
        for seed in range(15):
            m = random_model(seed, 4, 3, 2)
            for mask in (1, 3, m.full):
                sub = update(m, mask)
                assert models_equal(parse_model_render(sub), sub)


def parse_model_render(m):
    from corgal import render_model

    return parse_model(render_model(m))


class TestContract:
    def test_distinct_valuations_stay_apart(self, train):
        quotient, mapping = contract(train)
        assert models_equal(quotient, train)
        assert mapping == {"w": "w", "v": "v"}

    def test_symmetric_duplicates_merge(self):
        quotient, mapping = contract(two_state_twin())
        assert quotient.states == ("x",)
        assert mapping == {"x": "x", "y": "x"}

    def test_counterexample_is_already_contracted(self, counterexample):
        quotient, _ = contract(counterexample)
        assert models_equal(quotient, counterexample)

    def test_idempotent(self):
        for seed in range(20):
            m = random_model(seed, 5, 2, 1)
            once, _ = contract(m)
            twice, _ = contract(once)
            assert models_equal(once, twice)

    def test_separation_can_need_a_refinement_round(self):
        # y and z agree on valuation and differ only through a's view of x
        m = EpistemicModel(
            states=["x", "y", "z"],
            agents=["a"],
            atoms=["p"],
            partitions={"a": [["x", "y"], ["z"]]},
            valuation={"p": ["x"]},
        )
        quotient, _ = contract(m)
        assert len(quotient.states) == 3
        chars = characteristic_formulas(m)
        for state in m.states:
            assert truth_set(m, chars[state]) == m.state_mask([state])

    def test_isolated_twins_merge(self):
        m = EpistemicModel(
            states=["x", "y"],
            agents=["a"],
            atoms=["p"],
            partitions={"a": [["x"], ["y"]]},
            valuation={"p": []},
        )
        quotient, mapping = contract(m)
        assert quotient.states == ("x",)
        assert mapping["y"] == "x"


class TestCharacteristicFormulas:
    def test_train_states_are_pinned(self, train):
        chars = characteristic_formulas(train)
        assert truth_set(train, chars["w"]) == train.state_mask(["w"])
        assert truth_set(train, chars["v"]) == train.state_mask(["v"])

    def test_one_state_model(self):
        m = random_model(3, 1, 1, 1)
        chars = characteristic_formulas(m)
        only = m.states[0]
        assert truth_set(m, chars[only]) == m.full

    def test_counterexample_needs_no_modalities(self, counterexample):
        chars = characteristic_formulas(counterexample)
        for state, f in chars.items():
            assert truth_set(counterexample, f) == counterexample.state_mask([state])
            assert _has_no_knowledge(f)

    def test_rejects_uncontracted_models(self):
        with pytest.raises(ValueError, match="not bisimulation-contracted"):
            characteristic_formulas(two_state_twin())

    def test_pins_states_on_contracted_random_models(self):
        for seed in range(25):
            m, _ = contract(random_model(seed, 5, 2, 2))
            chars = characteristic_formulas(m)
            for state, f in chars.items():
                assert truth_set(m, f) == m.state_mask([state])


def _has_no_knowledge(f):
    if isinstance(f, Know):
        return False
    if isinstance(f, (Atom,)) or f == TOP:
        return True
    if isinstance(f, Not):
        return _has_no_knowledge(f.sub)
    if isinstance(f, (And, Or)):
        return _has_no_knowledge(f.left) and _has_no_knowledge(f.right)
    return True


class TestAgentUnions:
    def test_counts(self, counterexample):
        assert len(agent_unions(counterexample, "c")) == 3
        assert len(agent_unions(counterexample, "a")) == 7

    def test_silence_comes_first(self, counterexample):
        for agent in counterexample.agents:
            unions = agent_unions(counterexample, agent)
            assert unions[0] == counterexample.full

    def test_unions_are_distinct(self):
        for seed in range(10):
            m = random_model(seed, 5, 2, 2)
            for agent in m.agents:
                unions = agent_unions(m, agent)
                assert len(set(unions)) == len(unions)


class TestChoiceSets:
    def test_pair_count(self, counterexample):
        assert len(choice_sets(counterexample, {"a", "b"})) == 49

    def test_empty_group_is_trivial(self, counterexample):
        sets = choice_sets(counterexample, frozenset())
        assert len(sets) == 1
        assert sets[0].extension == counterexample.full

    def test_singleton_group_matches_agent_unions(self, counterexample):
        sets = choice_sets(counterexample, {"a"})
        assert [c.extension for c in sets] == agent_unions(counterexample, "a")

    def test_extension_is_the_intersection(self, counterexample):
        for c in choice_sets(counterexample, {"a", "c"}):
            expected = counterexample.full
            for _, mask in c.per_agent_union:
                expected &= mask
            assert c.extension == expected

    def test_components_are_unions_of_blocks(self, counterexample):
        for c in choice_sets(counterexample, {"a", "b"}):
            for agent, mask in c.per_agent_union:
                rebuilt = 0
                for block in counterexample.blocks(agent):
                    if block & mask:
                        assert block & ~mask == 0
                        rebuilt |= block
                assert rebuilt == mask

    def test_cap(self, counterexample):
        with pytest.raises(EnumerationCapExceeded):
            choice_sets(counterexample, {"a", "b"}, cap=10)

    def test_unknown_agent(self, counterexample):
        with pytest.raises(ValueError, match="unknown agent"):
            choice_sets(counterexample, {"zz"})


class TestDefinableFormula:
    def test_counterexample_component_is_knowing_q(self, counterexample):
        target = choice_sets(counterexample, {"a"})
        union = counterexample.state_mask(["pqr", "qr", "pq"])
        choice = next(c for c in target if c.extension == union)
        psi = definable_formula(counterexample, choice)
        assert truth_set(counterexample, psi.denotation()) == union
        assert truth_set(counterexample, Know("a", Atom("q"))) == union

    def test_empty_group(self, counterexample):
        trivial = choice_sets(counterexample, frozenset())[0]
        assert definable_formula(counterexample, trivial).denotation() == TOP

    def test_full_union_is_silence(self, counterexample):
        sets = choice_sets(counterexample, {"b"})
        psi = definable_formula(counterexample, sets[0])
        assert truth_set(counterexample, psi.denotation()) == counterexample.full

    def test_extension_always_matches(self):
        for seed in range(12):
            m, _ = contract(random_model(seed, 4, 2, 2))
            for group in (frozenset({"a0"}), frozenset({"a0", "a1"})):
                for c in choice_sets(m, group):
                    if c.extension == 0:
                        continue
                    psi = definable_formula(m, c)
                    assert truth_set(m, psi.denotation()) == c.extension


class TestRandomModel:
    def test_deterministic(self):
        assert models_equal(random_model(9, 5, 3, 3), random_model(9, 5, 3, 3))

    def test_minimal(self):
        m = random_model(0, 1, 1, 1)
        assert m.states == ("s0",)

    def test_counts_validated(self):
        with pytest.raises(ValueError):
            random_model(0, 0, 1, 1)

    def test_partition_sampling_hits_all_shapes(self):
        # 2 states have exactly 2 set partitions; both should appear
        shapes = set()
        for seed in range(40):
            m = random_model(seed, 2, 1, 1)
            shapes.add(len(m.blocks("a0")))
        assert shapes == {1, 2}
