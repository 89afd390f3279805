#!/usr/bin/env python3
"""Generate the bundled synthetic fixture corpora.

Two JSONL files under fixtures/ mimic the shape of the supported source
datasets: coaid_like.jsonl (3456 real / 916 fake, True/False labels) and
c19rumor_like.jsonl (659 real / 3040 fake, real/fake labels). Texts are
sampled from class-specific vocabulary pools so native classifiers can
separate the classes, and the rumor-style fake pool leans on outbreak
vocabulary (wuhan, outbreak, china) to mirror the distinct topical profile
of that kind of corpus. Deterministic for the fixed seed; re-running
reproduces the committed files byte for byte.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

SEED = 20240131
OUT_DIR = Path(__file__).resolve().parents[1] / "fixtures"

SHARED = [
    "people", "city", "week", "year", "report", "reports", "news", "new",
    "today", "world", "government", "minister", "public", "country",
    "statement", "according", "sources", "media", "story", "local",
    "national", "announced", "released", "million", "emergency", "crisis",
    "residents", "authorities", "officials", "days", "month", "region",
    "community", "leaders", "meeting", "press", "briefing", "agency",
]

COAID_REAL = [
    "vaccine", "vaccines", "study", "trial", "doses", "guidance", "health",
    "hospital", "clinical", "data", "researchers", "approved", "booster",
    "immunity", "testing", "symptoms", "treatment", "patients", "recovery",
    "experts", "evidence", "reviewed", "safety", "efficacy", "variants",
    "protection", "masks", "distancing", "guidelines", "infection",
    "antibodies", "immunization", "screening", "surveillance", "dosage",
]

COAID_FAKE = [
    "cure", "miracle", "garlic", "bleach", "microchip", "conspiracy",
    "hoax", "secret", "remedy", "silver", "detox", "scam", "exposed",
    "suppressed", "magnetic", "5g", "implants", "tracking", "poison",
    "toxins", "shocking", "hidden", "banned", "colloidal", "frequencies",
    "radiation", "antennas", "chemtrails", "cabal", "depopulation",
]

C19_REAL = [
    "cases", "lockdown", "quarantine", "travel", "border", "province",
    "confirmed", "update", "toll", "spread", "restrictions", "flights",
    "curfew", "economy", "schools", "reopening", "measures", "response",
    "supplies", "shipment", "hospitals", "deaths", "recoveries", "tally",
    "containment", "checkpoints", "advisory", "repatriation",
]

C19_FAKE = [
    "wuhan", "outbreak", "video", "leaked", "lab", "bioweapon", "panic",
    "rumor", "viral", "footage", "whistleblower", "staged", "cover-up",
    "china", "escaped", "engineered", "censored", "soldiers", "satellite",
    "smuggled", "collapse", "fleeing", "hazmat", "bodies",
]

OPENERS = ["Covid", "COVID-19", "Coronavirus", "Covid-19", "Virus"]


def _check_disjoint() -> None:
    pools = {"shared": SHARED, "coaid_real": COAID_REAL, "coaid_fake": COAID_FAKE,
             "c19_real": C19_REAL, "c19_fake": C19_FAKE}
    names = list(pools)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            overlap = set(pools[a]) & set(pools[b])
            if overlap:
                raise SystemExit(f"pool overlap {a}/{b}: {sorted(overlap)}")


def _make_text(rng: random.Random, class_pool: list[str], extras: list[tuple[str, float]]) -> str:
    length = rng.randint(8, 16)
    words: list[str] = []
    if rng.random() < 0.6:
        words.append(rng.choice(OPENERS))
    for _ in range(length):
        pool = class_pool if rng.random() < 0.6 else SHARED
        words.append(rng.choice(pool))
    for word, prob in extras:
        if rng.random() < prob:
            words.insert(rng.randint(0, len(words)), word)
    if rng.random() < 0.1:
        words.append(f"https://news.example/{rng.randint(1000, 9999)}")
    if rng.random() < 0.15:
        words.append(str(rng.choice([2020, 2021])))
    # light punctuation and casing noise so ingestion has something to clean
    if rng.random() < 0.3:
        pos = rng.randint(1, len(words) - 1)
        words[pos] = words[pos] + ","
    if rng.random() < 0.1:
        pos = rng.randint(0, len(words) - 1)
        words[pos] = words[pos].upper()
    text = " ".join(words)
    if rng.random() < 0.2:
        text = text + "."
    if rng.random() < 0.15:
        text = "  " + text + "  "
    return text[0].upper() + text[1:] if text[0].isalpha() else text


def _make_corpus(rng: random.Random, prefix: str, n_real: int, n_fake: int,
                 real_pool: list[str], fake_pool: list[str],
                 fake_extras: list[tuple[str, float]],
                 label_style: tuple[str, str]) -> list[dict]:
    rows = []
    for _ in range(n_real):
        rows.append({"text": _make_text(rng, real_pool, []), "label": label_style[0]})
    for _ in range(n_fake):
        rows.append({"text": _make_text(rng, fake_pool, fake_extras),
                     "label": label_style[1]})
    rng.shuffle(rows)
    for index, row in enumerate(rows):
        row["id"] = f"{prefix}-{index:05d}"
        row["source"] = prefix
    return [{"id": r["id"], "text": r["text"], "label": r["label"], "source": r["source"]}
            for r in rows]


def main() -> None:
    _check_disjoint()
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    rng = random.Random(SEED)
    coaid = _make_corpus(rng, "coaid", n_real=3456, n_fake=916,
                         real_pool=COAID_REAL, fake_pool=COAID_FAKE,
                         fake_extras=[], label_style=("True", "False"))
    c19 = _make_corpus(rng, "c19rumor", n_real=659, n_fake=3040,
                       real_pool=C19_REAL, fake_pool=C19_FAKE,
                       fake_extras=[("Wuhan", 0.55), ("outbreak", 0.5)],
                       label_style=("real", "fake"))

    for name, rows in (("coaid_like.jsonl", coaid), ("c19rumor_like.jsonl", c19)):
        path = OUT_DIR / name
        with open(path, "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
        print(f"wrote {path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
