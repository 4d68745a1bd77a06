"""Regenerate the frozen conlleval parity fixture.

Draws randomized BIO gold/prediction pairs (predictions are corrupted
copies of gold so partial matches occur), scores them with the independent
conlleval port, and freezes the expected counts. Hand-picked cases cover
orphan I- tags, adjacent B- tags, and mid-chunk type switches.

Usage: python tools/make_parity_fixture.py
"""
from __future__ import annotations

import json
import random
from pathlib import Path

import conlleval_port

LABELS = ["Time", "Loc", "Price"]
SEED = 20240917
NUM_RANDOM_CASES = 50

HAND_CASES = [
    ("orphan-i-exact", [["I-Time", "I-Time", "O"]], [["B-Time", "I-Time", "O"]]),
    ("orphan-i-miss", [["I-Time", "I-Time", "O"]], [["O", "B-Time", "O"]]),
    ("adjacent-b-exact", [["B-Time", "B-Time"]], [["B-Time", "B-Time"]]),
    ("adjacent-b-merged", [["B-Time", "B-Time"]], [["B-Time", "I-Time"]]),
    ("type-switch-mid-chunk", [["B-Loc", "I-Loc", "I-Time"]], [["B-Loc", "I-Time", "I-Time"]]),
    ("boundary-short", [["B-Time", "I-Time", "O"]], [["B-Time", "O", "O"]]),
    ("empty-pred", [["B-Time", "O"]], [["O", "O"]]),
    ("empty-gold", [["O", "O", "O"]], [["B-Loc", "I-Loc", "O"]]),
    (
        "multi-sequence",
        [["B-Time", "I-Time", "O"], ["O", "B-Loc", "O"], ["I-Price", "B-Price"]],
        [["B-Time", "I-Time", "O"], ["B-Loc", "I-Loc", "O"], ["I-Price", "B-Price"]],
    ),
]


def random_tags(rng: random.Random, length: int) -> list[str]:
    tags = []
    for _ in range(length):
        roll = rng.random()
        if roll < 0.40:
            tags.append("O")
        elif roll < 0.70:
            tags.append(f"B-{rng.choice(LABELS)}")
        else:
            tags.append(f"I-{rng.choice(LABELS)}")
    return tags


def corrupt(rng: random.Random, tags: list[str]) -> list[str]:
    out = []
    for tag in tags:
        roll = rng.random()
        if roll < 0.60:
            out.append(tag)
        elif roll < 0.75:
            out.append("O")
        elif roll < 0.85:
            out.append(f"B-{rng.choice(LABELS)}")
        else:
            out.append(f"I-{rng.choice(LABELS)}")
    return out


def build_cases() -> list[dict]:
    cases = []
    for name, gold, pred in HAND_CASES:
        cases.append({"name": name, "gold": gold, "pred": pred})

    rng = random.Random(SEED)
    made = 0
    while made < NUM_RANDOM_CASES:
        n_sequences = rng.randint(1, 4)
        gold = [random_tags(rng, rng.randint(1, 12)) for _ in range(n_sequences)]
        pred = [corrupt(rng, seq) for seq in gold]
        expected = conlleval_port.evaluate(gold, pred)
        # The degenerate no-chunks-on-either-side case is covered by its own
        # configurable convention, not by conlleval parity.
        if expected["gold_chunks"] == 0 and expected["pred_chunks"] == 0:
            continue
        cases.append({"name": f"random-{made:02d}", "gold": gold, "pred": pred})
        made += 1

    for case in cases:
        expected = conlleval_port.evaluate(case["gold"], case["pred"])
        expected["precision"] = round(expected["precision"], 10)
        expected["recall"] = round(expected["recall"], 10)
        expected["f1"] = round(expected["f1"], 10)
        case["expected"] = expected
    return cases


def main() -> None:
    conlleval_port._self_test()
    cases = build_cases()
    fixture = {
        "name": "conlleval-parity-corpus",
        "provenance_tag": "DERIVED",
        "oracle_note": (
            "Expected counts computed by tools/conlleval_port.py, an independent "
            "port of the conlleval.txt streaming chunk-transition algorithm "
            "(2004-01-26 revision), restricted to the B/I/O alphabet. "
            "Regenerate with: python tools/make_parity_fixture.py"
        ),
        "cases": cases,
    }
    out = Path(__file__).resolve().parents[1] / "src" / "invtag" / "fixtures" / "conlleval_parity.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(fixture, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {len(cases)} cases to {out}")


if __name__ == "__main__":
    main()
