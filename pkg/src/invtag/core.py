"""Shared domain types: sentences, label mappings, control tokens, prompts."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import UnknownLabel


class Round(str, Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class Sentence:
    """A tokenized utterance. ``raw_text`` is the tokens joined by single spaces."""

    tokens: tuple[str, ...]
    raw_text: str = ""

    def __post_init__(self):
        tokens = tuple(self.tokens)
        if not tokens:
            raise ValueError("a sentence needs at least one token")
        for tok in tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"bad token {tok!r}: tokens must be nonempty and whitespace-free")
        object.__setattr__(self, "tokens", tokens)
        joined = " ".join(tokens)
        if not self.raw_text:
            object.__setattr__(self, "raw_text", joined)
        elif self.raw_text != joined:
            raise ValueError("raw_text must equal the tokens joined by single spaces")

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        return cls(tuple(text.split()))

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class ControlTokens:
    """Reserved output tokens: no-entity pad, value separator, end of generation."""

    none_token: str = "none"
    sep_token: str = ";"
    end_token: str = "."

    def __post_init__(self):
        toks = (self.none_token, self.sep_token, self.end_token)
        if any(not t for t in toks):
            raise ValueError("control tokens must be nonempty")
        if len(set(toks)) != 3:
            raise ValueError("control tokens must be pairwise distinct")

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.none_token, self.sep_token, self.end_token)

    def __contains__(self, token: object) -> bool:
        return token in self.as_tuple()


DEFAULT_CONTROL = ControlTokens()


@dataclass(frozen=True)
class LabelMapping:
    """Ordered one-to-one map from raw labels to natural-language label words.

    Entry order is significant: prompts are generated in this order.
    """

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        entries = tuple((raw, word) for raw, word in self.entries)
        object.__setattr__(self, "entries", entries)
        raws = [raw for raw, _ in entries]
        words = [word for _, word in entries]
        if len(set(raws)) != len(raws):
            raise ValueError("duplicate raw label in mapping")
        if len(set(words)) != len(words):
            raise ValueError("duplicate label word in mapping")
        reserved = set(DEFAULT_CONTROL.as_tuple())
        for word in words:
            if not word or not word.strip():
                raise ValueError("label words must be nonempty")
            if any(part in reserved for part in word.split()):
                raise ValueError(f"label word {word!r} collides with a control token")

    @classmethod
    def from_dict(cls, mapping: Mapping[str, str]) -> "LabelMapping":
        return cls(tuple(mapping.items()))

    def raw_labels(self) -> list[str]:
        return [raw for raw, _ in self.entries]

    def label_words(self) -> list[str]:
        return [word for _, word in self.entries]

    def word_for(self, raw_label: str) -> str:
        for raw, word in self.entries:
            if raw == raw_label:
                return word
        raise UnknownLabel(raw_label)

    def __contains__(self, raw_label: object) -> bool:
        return any(raw == raw_label for raw, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self.entries)

    def to_dict(self) -> dict[str, str]:
        return dict(self.entries)


@dataclass(frozen=True)
class Prompt:
    """A rendered prompt token sequence.

    ``answer_start`` is the index of the first answer token; it equals
    ``len(tokens)`` while the prompt is still unanswered.
    """

    tokens: tuple[str, ...]
    answer_start: int
    round: Round = Round.FIRST
    target_label_word: str = ""

    def __post_init__(self):
        tokens = tuple(self.tokens)
        object.__setattr__(self, "tokens", tokens)
        if not 0 < self.answer_start <= len(tokens):
            raise ValueError(
                f"answer_start {self.answer_start} out of range for {len(tokens)} tokens"
            )

    @property
    def is_answered(self) -> bool:
        return self.answer_start < len(self.tokens)

    @property
    def prefix_tokens(self) -> tuple[str, ...]:
        return self.tokens[: self.answer_start]

    @property
    def answer_tokens(self) -> tuple[str, ...]:
        return self.tokens[self.answer_start:]

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class SlotAnnotation:
    """Gold label/value pairs; each value is a contiguous token span."""

    pairs: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        pairs = tuple((raw, tuple(value)) for raw, value in self.pairs)
        for raw, value in pairs:
            if not value:
                raise ValueError(f"empty value span for label {raw!r}")
        object.__setattr__(self, "pairs", pairs)

    def labels(self) -> list[str]:
        return [raw for raw, _ in self.pairs]


def as_sentence(value: "Sentence | Sequence[str] | str") -> Sentence:
    """Coerce raw tokens or text into a Sentence."""
    if isinstance(value, Sentence):
        return value
    if isinstance(value, str):
        return Sentence.from_text(value)
    return Sentence(tuple(value))


def as_label_mapping(value: "LabelMapping | Mapping[str, str] | Iterable[tuple[str, str]]") -> LabelMapping:
    if isinstance(value, LabelMapping):
        return value
    if isinstance(value, Mapping):
        return LabelMapping.from_dict(value)
    return LabelMapping(tuple(value))
