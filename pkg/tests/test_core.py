import pytest

from invtag import ControlTokens, LabelMapping, Prompt, Round, Sentence, UnknownLabel


class TestSentence:
    def test_from_text_reconstructs_raw(self):
        s = Sentence.from_text("book a flight")
        assert s.tokens == ("book", "a", "flight")
        assert s.raw_text == "book a flight"
        assert len(s) == 3

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Sentence(())

    @pytest.mark.parametrize("token", ["", "two words", "tab\tbed", "new\nline"])
    def test_rejects_bad_tokens(self, token):
        with pytest.raises(ValueError):
            Sentence(("ok", token))

    def test_rejects_inconsistent_raw_text(self):
        with pytest.raises(ValueError):
            Sentence(("a", "b"), raw_text="a  b")

    def test_accepts_list_tokens(self):
        assert Sentence(["a", "b"]).tokens == ("a", "b")


class TestControlTokens:
    def test_defaults(self):
        control = ControlTokens()
        assert control.as_tuple() == ("none", ";", ".")
        assert ";" in control
        assert "word" not in control

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            ControlTokens(none_token=".", sep_token=";", end_token=".")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            ControlTokens(none_token="")


class TestLabelMapping:
    def test_order_preserved(self):
        m = LabelMapping.from_dict({"b.lab": "beta", "a.lab": "alpha"})
        assert m.raw_labels() == ["b.lab", "a.lab"]
        assert m.label_words() == ["beta", "alpha"]

    def test_word_for_and_membership(self):
        m = LabelMapping.from_dict({"Time": "time"})
        assert m.word_for("Time") == "time"
        assert "Time" in m and "Loc" not in m
        with pytest.raises(UnknownLabel):
            m.word_for("Loc")

    def test_rejects_duplicate_raw(self):
        with pytest.raises(ValueError):
            LabelMapping((("a", "x"), ("a", "y")))

    def test_rejects_duplicate_word(self):
        with pytest.raises(ValueError):
            LabelMapping((("a", "x"), ("b", "x")))

    @pytest.mark.parametrize("word", ["", " ", "none", ";", ".", "the none"])
    def test_rejects_control_collisions(self, word):
        with pytest.raises(ValueError):
            LabelMapping((("a", word),))


class TestPrompt:
    def test_unanswered(self):
        p = Prompt(("a", "b", "refers", "to"), 4)
        assert not p.is_answered
        assert p.prefix_tokens == p.tokens
        assert p.answer_tokens == ()
        assert p.text == "a b refers to"

    def test_answered_regions(self):
        p = Prompt(("a", "refers", "to", "x", "."), 3, Round.SECOND, "a")
        assert p.is_answered
        assert p.answer_tokens == ("x", ".")

    @pytest.mark.parametrize("start", [0, 5, -1])
    def test_answer_start_bounds(self, start):
        with pytest.raises(ValueError):
            Prompt(("a", "b", "c", "d"), start)
