"""Reverse labeling of generated slot values onto BIO tags, and chunk
extraction from BIO sequences.

Reverse labeling follows three rules: a value labels tokens only when it
matches a sentence span in full; a token already labeled is never relabeled;
matched spans get B- on the first token and I- on the rest.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .core import Sentence, SlotAnnotation
from .errors import LengthMismatch

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import SlotPrediction

BioSequence = Sequence[str]

TAG_PATTERN = re.compile(r"^(O|[BI]-.+)$")


@dataclass(frozen=True, order=True)
class Chunk:
    """A labeled span; ``end`` is inclusive."""

    raw_label: str
    start: int
    end: int


def split_tag(tag: str) -> tuple[str, str | None]:
    if tag == "O":
        return "O", None
    prefix, _, label = tag.partition("-")
    if prefix not in ("B", "I") or not label:
        raise ValueError(f"malformed BIO tag {tag!r}")
    return prefix, label


def is_valid_tag(tag: str) -> bool:
    return bool(TAG_PATTERN.match(tag))


def chunks_from_bio(tags: BioSequence) -> list[Chunk]:
    """Extract chunks with the conlleval segmentation convention.

    A chunk starts at B-x, or at I-x whose predecessor is O, a different
    label, or the sequence start; it extends through consecutive I-x.
    Orphan I- tags are repaired rather than rejected.
    """
    chunks: list[Chunk] = []
    open_start: int | None = None
    open_label: str | None = None
    for i, tag in enumerate(tags):
        prefix, label = split_tag(tag)
        starts_new = prefix == "B" or (prefix == "I" and label != open_label)
        if open_start is not None and (prefix == "O" or starts_new):
            chunks.append(Chunk(open_label, open_start, i - 1))
            open_start, open_label = None, None
        if starts_new:
            open_start, open_label = i, label
    if open_start is not None:
        chunks.append(Chunk(open_label, open_start, len(tags) - 1))
    return chunks


def find_occurrences(tokens: Sequence[str], value: Sequence[str]) -> list[int]:
    """Start indices where ``value`` occurs as a contiguous subsequence."""
    value = tuple(value)
    width = len(value)
    if width == 0 or width > len(tokens):
        return []
    return [
        start
        for start in range(len(tokens) - width + 1)
        if tuple(tokens[start : start + width]) == value
    ]


def reverse_label_pairs(
    sentence: Sentence,
    pairs: Iterable[tuple[str, Sequence[Sequence[str]]]],
    occurrences: str = "all",
) -> list[str]:
    """Label the sentence with (raw_label, values) pairs, in pair order.

    For each value, every full-match occurrence whose tokens are all still
    unlabeled is claimed left to right; occurrences overlapping an earlier
    claim are skipped, and values with no full match contribute nothing.
    ``occurrences="first"`` claims at most one occurrence per value.
    """
    if occurrences not in ("all", "first"):
        raise ValueError("occurrences must be 'all' or 'first'")
    tokens = sentence.tokens
    tags = ["O"] * len(tokens)
    claimed = [False] * len(tokens)
    for raw_label, values in pairs:
        for value in values:
            value = tuple(value)
            if not value:
                continue
            for start in find_occurrences(tokens, value):
                span = range(start, start + len(value))
                if any(claimed[i] for i in span):
                    continue
                for i in span:
                    claimed[i] = True
                tags[start] = f"B-{raw_label}"
                for i in range(start + 1, start + len(value)):
                    tags[i] = f"I-{raw_label}"
                if occurrences == "first":
                    break
    return tags


def apply_reverse_labeling(
    sentence: Sentence, prediction: "SlotPrediction", occurrences: str = "all"
) -> list[str]:
    """BIO tags for a slot prediction (labels in prediction order, values in
    generation order)."""
    return reverse_label_pairs(sentence, prediction.as_pairs(), occurrences)


def bio_to_annotation(sentence: Sentence, tags: BioSequence) -> SlotAnnotation:
    """Slot label/value pairs read off a BIO sequence, in sentence order."""
    if len(tags) != len(sentence.tokens):
        raise LengthMismatch(
            f"{len(tags)} tags for {len(sentence.tokens)} tokens"
        )
    pairs = tuple(
        (chunk.raw_label, sentence.tokens[chunk.start : chunk.end + 1])
        for chunk in chunks_from_bio(tags)
    )
    return SlotAnnotation(pairs)
