import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import HashScorer, TableScorer, UniformScorer
from invtag import (
    ControlTokens,
    DecodeConfig,
    EmptyAllowedSet,
    GenerationResult,
    ScorerFailure,
    Sentence,
    allowed_tokens,
    build_answered_prompt,
    build_inverse_prompt,
    decode_candidates,
    decode_constrained,
    parse_generation,
)


class TestAllowedTokens:
    def test_worked_example_sentence(self, fig_sentence):
        allowed = allowed_tokens(fig_sentence)
        assert len(allowed) == 13
        assert allowed == set(fig_sentence.tokens) | {"none", ";", "."}

    def test_none_collision_collapses(self):
        sentence = Sentence(tuple(f"w{i}" for i in range(9)) + ("none",))
        assert len(allowed_tokens(sentence)) == 12

    def test_single_token_sentence(self):
        assert len(allowed_tokens(Sentence(("hello",)))) == 4

    def test_candidate_order_is_sentence_first(self):
        sentence = Sentence(("b", "a", "b", "c"))
        assert decode_candidates(sentence) == ("b", "a", "c", "none", ";", ".")


class TestDecodeConstrained:
    def test_oracle_scorer_generates_gold_answer(self, fig_sentence):
        prompt = build_inverse_prompt(fig_sentence, "departure")
        table = {
            prompt.text: {"beijing": 1.0},
            f"{prompt.text} beijing": {".": 1.0},
        }
        result = decode_constrained(
            TableScorer(table), prompt, decode_candidates(fig_sentence)
        )
        assert result.generated_tokens == ("beijing", ".")
        assert result.terminated_by_end
        assert result.steps_used == 2

    def test_cap_enforced_when_end_never_wins(self, fig_sentence):
        prompt = build_inverse_prompt(fig_sentence, "departure")
        scorer = TableScorer({}, fallback=0.0)

        class NeverEnd:
            concurrent_calls_allowed = True

            def score_next(self, prefix, candidates):
                return [-1.0 if tok == "." else 0.0 for tok in candidates]

        result = decode_constrained(NeverEnd(), prompt, decode_candidates(fig_sentence))
        assert result.steps_used == 40
        assert not result.terminated_by_end

    def test_uniform_scores_resolve_by_candidate_order(self):
        # with all scores equal, every step picks the first candidate: the
        # sentence's first token, 40 times, never the end token
        sentence = Sentence(("red", "blue", "green"))
        prompt = build_inverse_prompt(sentence, "color")
        result = decode_constrained(UniformScorer(), prompt, decode_candidates(sentence))
        assert result.generated_tokens == ("red",) * 40
        assert not result.terminated_by_end

    def test_empty_allowed_set(self, fig_sentence):
        prompt = build_inverse_prompt(fig_sentence, "departure")
        with pytest.raises(EmptyAllowedSet):
            decode_constrained(UniformScorer(), prompt, [])

    def test_rejects_answered_prompt(self, fig_sentence):
        prompt = build_answered_prompt(fig_sentence, "departure", [["beijing"]])
        with pytest.raises(ValueError):
            decode_constrained(UniformScorer(), prompt, decode_candidates(fig_sentence))

    def test_scorer_failure_propagates(self, fig_sentence):
        class Broken:
            concurrent_calls_allowed = True

            def score_next(self, prefix, candidates):
                raise ScorerFailure("boom")

        prompt = build_inverse_prompt(fig_sentence, "departure")
        with pytest.raises(ScorerFailure):
            decode_constrained(Broken(), prompt, decode_candidates(fig_sentence))

    def test_wrong_score_count_is_a_scorer_failure(self, fig_sentence):
        class ShortScorer:
            concurrent_calls_allowed = True

            def score_next(self, prefix, candidates):
                return [0.0]

        prompt = build_inverse_prompt(fig_sentence, "departure")
        with pytest.raises(ScorerFailure):
            decode_constrained(ShortScorer(), prompt, decode_candidates(fig_sentence))

    def test_non_finite_score_is_a_scorer_failure(self, fig_sentence):
        class NanScorer:
            concurrent_calls_allowed = True

            def score_next(self, prefix, candidates):
                return [float("nan")] * len(candidates)

        prompt = build_inverse_prompt(fig_sentence, "departure")
        with pytest.raises(ScorerFailure):
            decode_constrained(NanScorer(), prompt, decode_candidates(fig_sentence))

    def test_custom_cap(self, fig_sentence):
        prompt = build_inverse_prompt(fig_sentence, "departure")
        result = decode_constrained(
            UniformScorer(), prompt, decode_candidates(fig_sentence), DecodeConfig(3)
        )
        assert result.steps_used == 3

    def test_determinism(self, fig_sentence):
        prompt = build_inverse_prompt(fig_sentence, "departure")
        scorer = HashScorer(99)
        candidates = decode_candidates(fig_sentence)
        assert decode_constrained(scorer, prompt, candidates) == decode_constrained(
            scorer, prompt, candidates
        )


class TestParseGeneration:
    def _result(self, tokens):
        return GenerationResult(tuple(tokens), True, len(tokens))

    def test_splits_on_separator(self):
        parsed = parse_generation(self._result(["new", "york", ";", "boston", "."]))
        assert parsed == [("new", "york"), ("boston",)]

    def test_none_answer_is_empty(self):
        assert parse_generation(self._result(["none", "."])) == []

    def test_empty_generation(self):
        assert parse_generation(GenerationResult((), False, 0)) == []

    def test_none_mixed_with_values_is_dropped(self):
        parsed = parse_generation(self._result(["beijing", ";", "none", "."]))
        assert parsed == [("beijing",)]

    def test_empty_segments_trimmed(self):
        parsed = parse_generation(self._result([";", "beijing", ";", ";", "."]))
        assert parsed == [("beijing",)]

    def test_unterminated_generation_parsed_as_is(self):
        parsed = parse_generation(GenerationResult(("new", "york"), False, 2))
        assert parsed == [("new", "york")]

    def test_strips_only_one_trailing_end(self):
        parsed = parse_generation(self._result(["a", ".", "."]))
        assert parsed == [("a", ".")]


# --- decoding properties ----------------------------------------------------

words = st.text(alphabet="abcdeno", min_size=1, max_size=4)


@given(
    tokens=st.lists(words, min_size=1, max_size=10),
    seed=st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=150, deadline=None)
def test_closure_generated_tokens_stay_allowed(tokens, seed):
    sentence = Sentence(tuple(tokens))
    prompt = build_inverse_prompt(sentence, "thing")
    allowed = allowed_tokens(sentence)
    result = decode_constrained(HashScorer(seed), prompt, decode_candidates(sentence))
    assert set(result.generated_tokens) <= allowed
    assert result.steps_used <= 40
    assert result.steps_used == len(result.generated_tokens)


@given(
    tokens=st.lists(words, min_size=1, max_size=8),
    seed=st.integers(min_value=0, max_value=2**31),
)
@settings(max_examples=80, deadline=None)
def test_parse_values_use_sentence_words_only(tokens, seed):
    control = ControlTokens()
    sentence = Sentence(tuple(tokens))
    prompt = build_inverse_prompt(sentence, "thing")
    result = decode_constrained(HashScorer(seed), prompt, decode_candidates(sentence))
    for value in parse_generation(result, control):
        assert value, "parsed values are nonempty"
        assert set(value) <= set(sentence.tokens) | {control.none_token}
