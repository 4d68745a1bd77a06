"""Scikit-learn-style estimator wrapping the tagging pipeline.

``fit`` builds a deterministic reference scorer from labeled support
examples (unless an explicit scorer is supplied); ``predict`` decodes slot
values per label and maps them back to BIO tags. The class follows the
sklearn estimator contract (``get_params``/``set_params``, ``fit`` returns
``self``, learned state in trailing-underscore attributes) without requiring
scikit-learn itself.
"""
from __future__ import annotations

from typing import Mapping, Sequence

from .core import ControlTokens, LabelMapping, Sentence, as_label_mapping
from .decoding import DecodeConfig
from .evaluation import chunk_f1
from .labeling import bio_to_annotation, is_valid_tag, reverse_label_pairs, split_tag
from .lm import LmScorer, reference_from_gold
from .pipeline import SlotPrediction, tag_sentence


class NotFittedError(ValueError, AttributeError):
    """Raised when predict/score is called before fit."""


def check_token_sequences(X: Sequence[Sequence[str]]) -> list[Sentence]:
    """Validate and coerce raw token sequences into sentences."""
    if isinstance(X, str):
        raise ValueError("X must be a sequence of token sequences, not a string")
    sentences = []
    for i, tokens in enumerate(X):
        if isinstance(tokens, str):
            raise ValueError(f"X[{i}] must be a token sequence, not a string")
        try:
            sentences.append(Sentence(tuple(tokens)))
        except ValueError as exc:
            raise ValueError(f"X[{i}]: {exc}") from exc
    return sentences


def check_tag_sequences(
    y: Sequence[Sequence[str]], sentences: Sequence[Sentence]
) -> list[tuple[str, ...]]:
    if len(y) != len(sentences):
        raise ValueError(f"X has {len(sentences)} sequences but y has {len(y)}")
    tag_seqs = []
    for i, (tags, sentence) in enumerate(zip(y, sentences)):
        tags = tuple(tags)
        if len(tags) != len(sentence.tokens):
            raise ValueError(
                f"y[{i}] has {len(tags)} tags for {len(sentence.tokens)} tokens"
            )
        for tag in tags:
            if not is_valid_tag(tag):
                raise ValueError(f"y[{i}] carries a malformed BIO tag {tag!r}")
        tag_seqs.append(tags)
    return tag_seqs


class InversePromptTagger:
    """Few-shot slot tagger driven by inverse prompts and constrained decoding.

    Parameters
    ----------
    scorer:
        Any object with ``score_next(prefix, candidates)``; when None, ``fit``
        builds a reference scorer that replays the training examples' gold
        answers (useful as an oracle and for pipeline smoke tests).
    mapping:
        Raw-label to label-word mapping (dict or LabelMapping). When None,
        ``fit`` uses an identity mapping over the labels seen in ``y``,
        sorted for determinism.
    iterative:
        Run the revision round for labels that first parse to no value.
    occurrences:
        "all" labels every non-conflicting occurrence of a generated value,
        "first" at most one.
    """

    _param_names = (
        "scorer",
        "mapping",
        "iterative",
        "max_generated_tokens",
        "none_token",
        "sep_token",
        "end_token",
        "occurrences",
        "strict",
    )

    def __init__(
        self,
        scorer: LmScorer | None = None,
        mapping: "LabelMapping | Mapping[str, str] | None" = None,
        iterative: bool = True,
        max_generated_tokens: int = 40,
        none_token: str = "none",
        sep_token: str = ";",
        end_token: str = ".",
        occurrences: str = "all",
        strict: bool = False,
    ):
        self.scorer = scorer
        self.mapping = mapping
        self.iterative = iterative
        self.max_generated_tokens = max_generated_tokens
        self.none_token = none_token
        self.sep_token = sep_token
        self.end_token = end_token
        self.occurrences = occurrences
        self.strict = strict

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names}

    def set_params(self, **params) -> "InversePromptTagger":
        for name, value in params.items():
            if name not in self._param_names:
                raise ValueError(f"invalid parameter {name!r} for InversePromptTagger")
            setattr(self, name, value)
        return self

    def fit(self, X: Sequence[Sequence[str]], y: Sequence[Sequence[str]]) -> "InversePromptTagger":
        """Learn the label mapping and, when no scorer was given, a reference
        scorer replaying the gold answers of (X, y)."""
        sentences = check_token_sequences(X)
        tag_seqs = check_tag_sequences(y, sentences)
        if not sentences:
            raise ValueError("fit needs at least one example")

        control = ControlTokens(self.none_token, self.sep_token, self.end_token)
        observed: set[str] = set()
        for tags in tag_seqs:
            for tag in tags:
                _, label = split_tag(tag)
                if label is not None:
                    observed.add(label)

        if self.mapping is not None:
            mapping = as_label_mapping(self.mapping)
            missing = observed - set(mapping.raw_labels())
            if missing:
                raise ValueError(f"labels {sorted(missing)} are missing from the mapping")
        else:
            if not observed:
                raise ValueError("y contains no labeled chunks and no mapping was given")
            mapping = LabelMapping(tuple((label, label) for label in sorted(observed)))

        examples = [
            (sentence, bio_to_annotation(sentence, tags))
            for sentence, tags in zip(sentences, tag_seqs)
        ]
        self.scorer_ = (
            self.scorer
            if self.scorer is not None
            else reference_from_gold(examples, mapping, control)
        )
        self.mapping_ = mapping
        self.control_ = control
        self.label_inventory_ = frozenset(observed)
        return self

    def _check_fitted(self) -> None:
        if not hasattr(self, "mapping_"):
            raise NotFittedError(
                "this InversePromptTagger is not fitted yet; call fit first"
            )

    def predict_slots(self, X: Sequence[Sequence[str]]) -> list[SlotPrediction]:
        """Per-label decoded slot values for each sentence."""
        self._check_fitted()
        config = DecodeConfig(self.max_generated_tokens)
        return [
            tag_sentence(
                self.scorer_,
                sentence,
                self.mapping_,
                self.control_,
                config,
                iterative=self.iterative,
                strict=self.strict,
            )
            for sentence in check_token_sequences(X)
        ]

    def predict(self, X: Sequence[Sequence[str]]) -> list[list[str]]:
        """BIO tag sequences for each token sequence in X."""
        self._check_fitted()
        sentences = check_token_sequences(X)
        config = DecodeConfig(self.max_generated_tokens)
        out = []
        for sentence in sentences:
            prediction = tag_sentence(
                self.scorer_,
                sentence,
                self.mapping_,
                self.control_,
                config,
                iterative=self.iterative,
                strict=self.strict,
            )
            out.append(
                reverse_label_pairs(sentence, prediction.as_pairs(), self.occurrences)
            )
        return out

    def score(self, X: Sequence[Sequence[str]], y: Sequence[Sequence[str]]) -> float:
        """Micro-averaged chunk F1 of ``predict(X)`` against ``y``."""
        return chunk_f1(list(y), self.predict(X)).f1

    def __repr__(self) -> str:
        args = ", ".join(f"{name}={getattr(self, name)!r}" for name in self._param_names)
        return f"InversePromptTagger({args})"
