"""Shared test fixtures: the worked flight-booking example, a synthetic
corpus generator with unique-match slots, scorer test doubles, and a stub
HTTP scorer server.
"""
from __future__ import annotations

import json
import random
import sys
import threading
import zlib
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tools"))

from invtag import LabelMapping, Sentence

# --- worked example -------------------------------------------------------

FIG_SENTENCE = "book a flight from beijing to new york tomorrow morning"
FIG_MAPPING = {"from.Loc": "departure", "to.Loc": "arrival", "Time": "time", "Price": "price"}
FIG_GOLD_TAGS = ["O", "O", "O", "O", "B-from.Loc", "O", "B-to.Loc", "I-to.Loc", "B-Time", "I-Time"]


@pytest.fixture
def fig_sentence() -> Sentence:
    return Sentence.from_text(FIG_SENTENCE)


@pytest.fixture
def fig_mapping() -> LabelMapping:
    return LabelMapping.from_dict(FIG_MAPPING)


@pytest.fixture
def fig_gold_tags() -> list[str]:
    return list(FIG_GOLD_TAGS)


# --- synthetic corpus -----------------------------------------------------

SYN_MAPPING = {"Dish": "dish", "Loc": "place", "Time": "time"}

# Pools are pairwise token-disjoint and avoid template words ("refers", "to",
# the quote character) and control tokens, so every slot value matches a
# unique sentence span and template positions stay unambiguous.
FILLERS = [
    "please", "bring", "her", "fresh", "warm", "extra", "nearby", "quick",
    "another", "favorite", "table", "ready", "waiting", "almost", "still",
    "could", "should", "maybe", "really", "quite", "just", "then", "soon",
]
DISHES = [
    ("noodles",), ("burger",), ("pasta",), ("tacos",), ("curry",),
    ("ramen",), ("salad",), ("soup",), ("pizza",), ("dumplings",),
]
PLACES = [
    ("paris",), ("berlin",), ("tokyo",), ("cairo",), ("lima",),
    ("oslo",), ("quito",), ("dakar",),
]
TIMES = [
    ("monday",), ("tuesday",), ("sunset",), ("midnight",),
    ("next", "week"), ("early", "morning"), ("friday", "evening"),
]


def build_synthetic_corpus(num_sentences: int = 20, seed: int = 1234):
    """Sentences whose gold chunks are non-overlapping and whose values each
    match exactly one sentence span (all chunk tokens are sentence-unique)."""
    rng = random.Random(seed)
    corpus: list[tuple[Sentence, tuple[str, ...]]] = []
    for i in range(num_sentences):
        if i == 0:
            chunk_plan = {"Dish": 0, "Loc": 0, "Time": 0}  # all-none sentence
        elif i == 1:
            chunk_plan = {"Dish": 2, "Loc": 1, "Time": 1}  # separator path
        else:
            chunk_plan = {
                "Dish": rng.choice([0, 1, 1, 2]),
                "Loc": rng.choice([0, 1, 1]),
                "Time": rng.choice([0, 1, 1]),
            }
        segments: list[tuple[str, tuple[str, ...]]] = []
        for label, pool in (("Dish", DISHES), ("Loc", PLACES), ("Time", TIMES)):
            for value in rng.sample(pool, chunk_plan[label]):
                segments.append((label, value))
        for filler in rng.sample(FILLERS, rng.randint(3, 5)):
            segments.append(("O", (filler,)))
        rng.shuffle(segments)
        tokens: list[str] = []
        tags: list[str] = []
        for label, toks in segments:
            for j, tok in enumerate(toks):
                tokens.append(tok)
                tags.append("O" if label == "O" else ("B-" if j == 0 else "I-") + label)
        corpus.append((Sentence(tuple(tokens)), tuple(tags)))
    return corpus


@pytest.fixture(scope="session")
def synthetic_corpus():
    return build_synthetic_corpus()


@pytest.fixture
def syn_mapping() -> LabelMapping:
    return LabelMapping.from_dict(SYN_MAPPING)


def write_conll(corpus, path: Path) -> Path:
    lines = []
    for sentence, tags in corpus:
        lines.extend(f"{tok}\t{tag}" for tok, tag in zip(sentence.tokens, tags))
        lines.append("")
    path.write_text("\n".join(lines).rstrip("\n") + "\n", encoding="utf-8")
    return path


def write_mapping(mapping: dict, path: Path) -> Path:
    path.write_text(json.dumps(mapping, indent=1), encoding="utf-8")
    return path


# --- scorer test doubles --------------------------------------------------


class TableScorer:
    """Scores from an explicit {context: {token: score}} table."""

    concurrent_calls_allowed = True

    def __init__(self, table: dict[str, dict[str, float]], fallback: float = 0.0):
        self.table = table
        self.fallback = fallback

    def score_next(self, prefix, candidates):
        dist = self.table.get(" ".join(prefix), {})
        return [dist.get(tok, self.fallback) for tok in candidates]


class UniformScorer:
    concurrent_calls_allowed = True

    def score_next(self, prefix, candidates):
        return [0.0] * len(candidates)


class HashScorer:
    """Deterministic pseudo-random scorer; stable across processes."""

    concurrent_calls_allowed = True

    def __init__(self, seed: int):
        self.seed = seed

    def score_next(self, prefix, candidates):
        key = f"{self.seed}|{' '.join(prefix)}"
        return [
            zlib.crc32(f"{key}|{tok}".encode()) / 2**32
            for tok in candidates
        ]


class RecordingScorer:
    """Wraps a scorer and records every score_next prefix."""

    concurrent_calls_allowed = False

    def __init__(self, inner):
        self.inner = inner
        self.prefixes: list[tuple[str, ...]] = []

    def score_next(self, prefix, candidates):
        self.prefixes.append(tuple(prefix))
        return self.inner.score_next(prefix, candidates)

    def decode_call_prefixes(self) -> list[tuple[str, ...]]:
        """First-step prefixes, i.e. one entry per decode call.

        Relies on prompts ending with ("refers", "to") and test vocabularies
        never containing those words.
        """
        return [p for p in self.prefixes if p[-2:] == ("refers", "to")]


class FailingScorer:
    concurrent_calls_allowed = True

    def __init__(self, error):
        self.error = error

    def score_next(self, prefix, candidates):
        raise self.error


# --- stub scorer server ---------------------------------------------------


class _StubState:
    def __init__(self):
        self.mode = "echo"  # echo | status:<code> | garbage | short | lying
        self.requests: list[dict] = []


def _make_handler(state: _StubState):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length)) if length else {}
            state.requests.append({"path": self.path, "body": body})
            if state.mode.startswith("status:"):
                self.send_response(int(state.mode.split(":")[1]))
                self.end_headers()
                return
            if state.mode == "garbage":
                payload = b"this is not json"
            elif state.mode == "short":
                payload = json.dumps({"scores": [1.0]}).encode()
            elif state.mode == "end":
                candidates = body.get("candidates", [])
                payload = json.dumps(
                    {"scores": [1.0 if tok == "." else 0.0 for tok in candidates]}
                ).encode()
            else:
                candidates = body.get("candidates", [])
                # echo: score each candidate by its (reversed) position so the
                # argmax and order round-trip are observable
                payload = json.dumps(
                    {"scores": [float(len(candidates) - i) for i in range(len(candidates))]}
                ).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

        def log_message(self, *args):  # keep test output quiet
            pass

    return Handler


@pytest.fixture
def stub_scorer_server():
    state = _StubState()
    server = ThreadingHTTPServer(("127.0.0.1", 0), _make_handler(state))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_address[1]}", state
    finally:
        server.shutdown()
        server.server_close()
