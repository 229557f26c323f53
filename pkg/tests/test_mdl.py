import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cseg import ArgumentError, MdlParams, segment_mdl, train_mdl

from .oracles import best_decode, best_joint_segmentation, mdl_reference_cost

TOY_FREQS = {"doing": 3, "walking": 3, "do": 2, "walk": 2}
TOY_PARAMS = MdlParams(dampening="none", algorithm="recursive", seed=7)


def test_params_validation():
    with pytest.raises(ArgumentError):
        MdlParams(finish_threshold=0.0).validate()
    with pytest.raises(ArgumentError):
        MdlParams(dampening="sqrt").validate()
    with pytest.raises(ArgumentError):
        MdlParams(algorithm="genetic").validate()


def test_empty_input_rejected():
    with pytest.raises(ArgumentError):
        train_mdl({}, TOY_PARAMS)


class TestCostBookkeeping:
    def test_unsegmented_baseline_matches_reference(self):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        baseline = mdl_reference_cost(
            TOY_FREQS, {w: [w] for w in TOY_FREQS}, "none"
        )
        assert model.epoch_costs[0] == pytest.approx(baseline, abs=1e-9)

    def test_final_cost_matches_reference(self):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        recomputed = mdl_reference_cost(TOY_FREQS, model.analyses, "none")
        assert model.epoch_costs[-1] == pytest.approx(recomputed, abs=1e-6)

    @pytest.mark.parametrize("dampening", ["log", "ones", "none"])
    def test_reference_agreement_across_dampening(self, dampening):
        freqs = {"aaa": 1, "aab": 4, "ba": 2}
        model = train_mdl(freqs, MdlParams(dampening=dampening, seed=3))
        recomputed = mdl_reference_cost(freqs, model.analyses, dampening)
        assert model.epoch_costs[-1] == pytest.approx(recomputed, abs=1e-6)


class TestMonotonicity:
    def test_toy_non_increasing(self):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        costs = model.epoch_costs
        assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))

    def test_single_type_never_worsens_baseline(self):
        model = train_mdl({"aaa": 1}, MdlParams(dampening="ones", seed=0))
        assert model.epoch_costs[-1] <= model.epoch_costs[0] + 1e-9

    @given(
        st.dictionaries(
            st.text(alphabet=st.sampled_from("abcd"), min_size=1, max_size=7),
            st.integers(min_value=1, max_value=9),
            min_size=1,
            max_size=8,
        ),
        st.sampled_from(["log", "ones", "none"]),
        st.sampled_from(["recursive", "viterbi"]),
    )
    @settings(max_examples=40, deadline=None)
    def test_any_corpus_non_increasing(self, freqs, dampening, algorithm):
        model = train_mdl(
            freqs,
            MdlParams(dampening=dampening, algorithm=algorithm, seed=11, max_epochs=6),
        )
        costs = model.epoch_costs
        assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))
        assert costs[-1] <= costs[0] + 1e-9


class TestToyOracle:
    def test_training_reaches_exhaustive_minimum(self):
        oracle, oracle_cost = best_joint_segmentation(TOY_FREQS, "none")
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        assert model.epoch_costs[-1] == pytest.approx(oracle_cost, abs=1e-6)
        for word in TOY_FREQS:
            assert segment_mdl(model, word) == oracle[word]

    def test_doing_contains_ing_iff_oracle_agrees(self):
        oracle, _ = best_joint_segmentation(TOY_FREQS, "none")
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        assert ("ing" in segment_mdl(model, "doing")) == ("ing" in oracle["doing"])

    def test_decode_matches_bruteforce_on_unseen_token(self):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        decoded = segment_mdl(model, "doingwalk")
        oracle_seg, oracle_cost = best_decode(model, "doingwalk")
        found_cost = sum(model.morph_cost(m) for m in decoded)
        assert found_cost == pytest.approx(oracle_cost, abs=1e-9)
        assert decoded == oracle_seg


class TestDecode:
    def test_dominant_lexicon_morph_stays_whole(self):
        model = train_mdl({"hello": 50, "xy": 1}, MdlParams(seed=1))
        assert segment_mdl(model, "hello") == ["hello"]

    @given(st.text(alphabet=st.sampled_from("downalkig"), min_size=1, max_size=12))
    @settings(max_examples=200)
    def test_concatenation_identity(self, token):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        assert "".join(segment_mdl(model, token)) == token

    def test_total_on_unseen_characters(self):
        model = train_mdl(TOY_FREQS, TOY_PARAMS)
        assert "".join(segment_mdl(model, "qqzz")) == "qqzz"

    def test_deterministic(self):
        a = train_mdl(TOY_FREQS, TOY_PARAMS)
        b = train_mdl(TOY_FREQS, TOY_PARAMS)
        assert a.lexicon == b.lexicon
        assert a.epoch_costs == b.epoch_costs


class TestViterbiTraining:
    def test_viterbi_converges_and_decodes(self):
        params = MdlParams(dampening="none", algorithm="viterbi", seed=5)
        model = train_mdl(TOY_FREQS, params)
        costs = model.epoch_costs
        assert all(b <= a + 1e-9 for a, b in zip(costs, costs[1:]))
        for word in TOY_FREQS:
            assert "".join(segment_mdl(model, word)) == word


def test_lexicon_cap_prunes_types():
    freqs = {"walking": 3, "talking": 3, "stalking": 2, "walk": 1, "talk": 1}
    uncapped = train_mdl(freqs, MdlParams(seed=2))
    cap = max(2, len(uncapped.lexicon) - 2)
    capped = train_mdl(freqs, MdlParams(seed=2, lexicon_cap=cap))
    assert len(capped.lexicon) <= cap
    # decoding stays total
    assert "".join(capped.segment("walking")) == "walking"
