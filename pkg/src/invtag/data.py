"""Corpus IO: CoNLL BIO files, episode JSON, label-mapping JSON, K-shot
support-set sampling, and gold label/value extraction.
"""
from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .core import LabelMapping, Sentence
from .errors import ParseError, SupportInfeasible
from .labeling import bio_to_annotation, chunks_from_bio, is_valid_tag, split_tag
from .prompting import gold_label_values

Example = tuple[Sentence, tuple[str, ...]]


@dataclass(frozen=True)
class Dataset:
    examples: tuple[Example, ...]
    label_inventory: frozenset[str]

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self) -> Iterator[Example]:
        return iter(self.examples)


@dataclass(frozen=True)
class Episode:
    """A few-shot episode: labeled support examples plus query examples."""

    support: tuple[Example, ...]
    query: tuple[Example, ...]
    domain_name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "query", tuple(self.query))
        if not self.support or not self.query:
            raise ValueError("an episode needs a nonempty support set and query set")


def _inventory(examples: Iterable[Example]) -> frozenset[str]:
    labels: set[str] = set()
    for _, tags in examples:
        for tag in tags:
            _, label = split_tag(tag)
            if label is not None:
                labels.add(label)
    return frozenset(labels)


def parse_conll(lines: Iterable[str], lowercase: bool = False) -> Dataset:
    """Parse CoNLL lines: one ``token<TAB>tag`` per line (a single space is
    also accepted), blank lines separating sentences."""
    examples: list[Example] = []
    tokens: list[str] = []
    tags: list[str] = []

    def flush() -> None:
        if tokens:
            examples.append((Sentence(tuple(tokens)), tuple(tags)))
            tokens.clear()
            tags.clear()

    for line_no, raw in enumerate(lines, 1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        fields = line.split("\t") if "\t" in line else line.split(" ")
        if len(fields) != 2:
            raise ParseError(
                f"expected 'token<TAB>tag', got {line!r}", line_no=line_no
            )
        token, tag = fields
        if not token or any(ch.isspace() for ch in token):
            raise ParseError(f"bad token {token!r}", line_no=line_no)
        if not is_valid_tag(tag):
            raise ParseError(f"bad BIO tag {tag!r}", line_no=line_no)
        tokens.append(token.lower() if lowercase else token)
        tags.append(tag)
    flush()
    return Dataset(tuple(examples), _inventory(examples))


def load_conll(path: str | Path, lowercase: bool = False) -> Dataset:
    with open(path, encoding="utf-8") as handle:
        return parse_conll(handle, lowercase=lowercase)


def dump_conll(examples: Iterable[Example]) -> str:
    blocks = [
        "\n".join(f"{token}\t{tag}" for token, tag in zip(sentence.tokens, tags))
        for sentence, tags in examples
    ]
    return "\n\n".join(blocks) + "\n" if blocks else ""


def save_conll(examples: Iterable[Example], path: str | Path) -> None:
    Path(path).write_text(dump_conll(examples), encoding="utf-8")


def load_label_mapping(path: str | Path) -> LabelMapping:
    """Load the ``{raw_label: label_word}`` JSON mapping; key order is entry order."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in mapping file: {exc}", path=str(path)) from exc
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in raw.items()
    ):
        raise ParseError("mapping file must be a JSON object of strings", path=str(path))
    return LabelMapping.from_dict(raw)


def _chunk_counts(tags: Sequence[str]) -> Counter:
    return Counter(chunk.raw_label for chunk in chunks_from_bio(tags))


def sample_k_shot(
    dataset: Dataset, k: int, seed: int = 0, num_sets: int = 1
) -> list[list[Example]]:
    """Draw ``num_sets`` support sets, each covering every label with at
    least ``k`` chunk occurrences.

    Selection is minimum-inclusion greedy: repeatedly target the label with
    the largest remaining deficit and add a sentence containing it, choosing
    (seeded-randomly among ties) the candidate that adds the fewest surplus
    instances. Deterministic per (seed, set index); sentences keep corpus
    order inside each set.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    labels = sorted(dataset.label_inventory)
    if not labels:
        raise ValueError("dataset defines no labels to cover")
    per_sentence = [_chunk_counts(tags) for _, tags in dataset.examples]
    totals: Counter = Counter()
    for counts in per_sentence:
        totals.update(counts)
    for label in labels:
        if totals[label] < k:
            raise SupportInfeasible(label, needed=k, available=totals[label])

    sets: list[list[Example]] = []
    for set_index in range(num_sets):
        rng = random.Random(f"{seed}:{set_index}")
        have: Counter = Counter()
        chosen: set[int] = set()
        while True:
            deficits = [(k - have[label], label) for label in labels if have[label] < k]
            if not deficits:
                break
            _, target = max(deficits, key=lambda d: (d[0], d[1]))

            def surplus(idx: int) -> int:
                return sum(
                    max(0, count - max(0, k - have[label]))
                    for label, count in per_sentence[idx].items()
                )

            candidates = [
                idx
                for idx in range(len(dataset.examples))
                if idx not in chosen and per_sentence[idx][target] > 0
            ]
            best = min(surplus(idx) for idx in candidates)
            pool = [idx for idx in candidates if surplus(idx) == best]
            pick = pool[rng.randrange(len(pool))]
            chosen.add(pick)
            have.update(per_sentence[pick])
        sets.append([dataset.examples[idx] for idx in sorted(chosen)])
    return sets


def _episode_example(obj: object, path: str) -> Example:
    if not isinstance(obj, dict):
        raise ParseError("expected an object with 'tokens' and 'tags'", path=path)
    tokens = obj.get("tokens")
    tags = obj.get("tags")
    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) for t in tokens):
        raise ParseError("'tokens' must be a nonempty list of strings", path=f"{path}.tokens")
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise ParseError("'tags' must be a list of strings", path=f"{path}.tags")
    if len(tags) != len(tokens):
        raise ParseError(
            f"{len(tags)} tags for {len(tokens)} tokens", path=f"{path}.tags"
        )
    for tag in tags:
        if not is_valid_tag(tag):
            raise ParseError(f"bad BIO tag {tag!r}", path=f"{path}.tags")
    try:
        sentence = Sentence(tuple(tokens))
    except ValueError as exc:
        raise ParseError(str(exc), path=f"{path}.tokens") from exc
    return sentence, tuple(tags)


def _parse_domain(obj: object, path: str) -> list[Episode]:
    if not isinstance(obj, dict):
        raise ParseError("expected a domain object", path=path)
    domain = obj.get("domain", "")
    if not isinstance(domain, str):
        raise ParseError("'domain' must be a string", path=f"{path}.domain")
    episodes = obj.get("episodes")
    if not isinstance(episodes, list):
        raise ParseError("'episodes' must be a list", path=f"{path}.episodes")
    out: list[Episode] = []
    for i, episode in enumerate(episodes):
        ep_path = f"{path}.episodes[{i}]"
        if not isinstance(episode, dict):
            raise ParseError("expected an episode object", path=ep_path)
        parts = {}
        for part in ("support", "query"):
            items = episode.get(part)
            if not isinstance(items, list) or not items:
                raise ParseError(
                    f"'{part}' must be a nonempty list", path=f"{ep_path}.{part}"
                )
            parts[part] = tuple(
                _episode_example(item, f"{ep_path}.{part}[{j}]")
                for j, item in enumerate(items)
            )
        out.append(Episode(parts["support"], parts["query"], domain))
    return out


def load_episodes(path: str | Path) -> list[Episode]:
    """Load few-shot episodes from JSON: a domain object (or list of them)
    holding ``episodes`` with parallel token/tag records."""
    with open(path, encoding="utf-8") as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON in episode file: {exc}", path=str(path)) from exc
    if isinstance(raw, list):
        out: list[Episode] = []
        for i, domain in enumerate(raw):
            out.extend(_parse_domain(domain, f"$[{i}]"))
        return out
    return _parse_domain(raw, "$")


def extract_gold_pairs(
    sentence: Sentence, tags: Sequence[str], mapping: LabelMapping
) -> list[tuple[str, tuple[tuple[str, ...], ...]]]:
    """Per-label gold values in mapping order, read off a BIO sequence.

    Labels without chunks map to an empty value tuple (a none answer);
    multiple chunks of one label keep sentence order.
    """
    return gold_label_values(bio_to_annotation(sentence, tags), mapping)
