"""Synthetic bilingual test collection and desk-scale random collections.

The bilingual fixture mimics the patent experiment in miniature: three
Japanese topics, a parallel Japanese/English document collection, a
dictionary where some query words carry a wrong sense that only occurs in
distractor documents, and a disjoint English corpus for bigram counts in
which the right senses sit next to each other.

Regenerate the shipped copy with ``python -m patclir.synthetic``.
"""
from __future__ import annotations

import json
import random
import shutil
import sys
from dataclasses import dataclass
from pathlib import Path

from patclir import tokenize

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "synthetic"

# ja surface -> en word; one-to-one so the two collections are exact parallels
FILLER = {
    "装置": "device", "方法": "method", "表面": "surface", "制御": "control",
    "信号": "signal", "回路": "circuit", "温度": "temperature", "圧力": "pressure",
    "基板": "substrate", "電極": "electrode", "部材": "member", "構造": "structure",
    "容器": "container", "配管": "pipe", "弁": "valve", "軸": "shaft",
    "歯車": "gear", "電池": "battery", "画像": "image", "光源": "light",
    "液体": "liquid", "粒子": "particle", "膜": "film", "繊維": "fiber",
    "溶液": "solution", "測定": "measurement", "検出": "detection", "出力": "output",
    "入力": "input", "記憶": "memory", "演算": "calculation", "表示": "display",
    "送信": "transmission", "受信": "reception", "冷却": "cooling", "加熱": "heating",
    "速度": "speed", "角度": "angle", "重量": "weight", "形状": "shape",
}

# per topic: ordered query words; value is (correct sense, wrong senses)
TOPICS = {
    "q1": {
        "domain": "electronics",
        "query": [
            ("衛星", "satellite", []),
            ("車載", "vehicle", ["carriage"]),
            ("航法", "navigation", ["voyage"]),
            ("渋滞", "congestion", ["jam"]),
            ("交通 情報", "traffic information", []),
        ],
        "narrative": "経路 案内",
    },
    "q2": {
        "domain": "mechanics",
        "query": [
            ("ダイオキシン", "dioxin", []),
            ("除去", "removal", ["dismissal"]),
            ("焼却", "incineration", []),
            ("固形", "solid", ["firm"]),
            ("廃棄物", "waste", []),
        ],
        "narrative": "排ガス",
    },
    "q3": {
        "domain": "chemistry",
        "query": [
            ("抗菌", "antibacterial", []),
            ("樹脂", "resin", ["sap"]),
            ("銀系", "silver", []),  # absent from the dictionary on purpose
            ("無機", "inorganic", []),
            ("材料", "material", ["ingredient"]),
            ("配合", "compounding", ["match"]),
        ],
        "narrative": "成形品",
    },
}

# wrong senses get their own ja surface in the parallel collection
WRONG_SENSE_JA = {
    "carriage": "台車", "voyage": "航海", "jam": "ジャム", "dismissal": "解雇",
    "firm": "企業", "sap": "樹液", "ingredient": "食材", "match": "試合",
}
# each distractor topic's wrong senses come with context words of their own
DISTRACTOR_CONTEXT = {
    "carriage": ["printer", "ribbon"], "voyage": ["ship", "harbor"],
    "jam": ["fruit", "sugar"], "dismissal": ["employee", "contract"],
    "firm": ["market", "investor"], "sap": ["tree", "bark"],
    "ingredient": ["recipe", "kitchen"], "match": ["player", "stadium"],
}
CONTEXT_JA = {
    "printer": "印刷機", "ribbon": "リボン", "ship": "船舶", "harbor": "港湾",
    "fruit": "果実", "sugar": "砂糖", "employee": "従業員", "contract": "契約",
    "market": "市場", "investor": "投資家", "tree": "樹木", "bark": "樹皮",
    "recipe": "調理法", "kitchen": "台所", "player": "選手", "stadium": "競技場",
}
NARRATIVE_EN = {"経路": "route", "案内": "guidance", "排ガス": "exhaust", "成形品": "molding"}
# the phrase is translated as a unit; its parts are ambiguous on their own
PART_SENSES = {"交通": ["traffic", "intercourse"], "情報": ["information", "intelligence"]}

STOPWORDS = ["the", "a", "an", "of", "and", "in", "for", "with", "is", "are", "by", "to", "on", "which"]
PARTICLES = ["の", "を", "に", "と", "は", "が", "、", "により", "および"]
IRREGULAR = {"fiber": "fibres", "waste": "wastes", "ship": "ships"}

TRANSLIT = [
    ("ダイ", "di"), ("オ", "o"), ("キ", "x"), ("シン", "in"), ("ン", "n"),
    ("ジャ", "ja"), ("ム", "m"), ("リ", "ri"), ("ボ", "bo"), ("ガ", "ga"), ("ス", "s"),
]


def _query_pairs(topic) -> list[tuple[str, str]]:
    out = []
    for ja, en, _ in topic["query"]:
        out.extend(zip(ja.split(), en.split()))
    return out


def ja_to_en() -> dict[str, str]:
    table = dict(FILLER)
    for topic in TOPICS.values():
        table.update(_query_pairs(topic))
    for en, ja in WRONG_SENSE_JA.items():
        table[ja] = en
    for en, ja in CONTEXT_JA.items():
        table[ja] = en
    table.update(NARRATIVE_EN)
    if len(set(table.values())) != len(table):
        raise AssertionError("ja/en table must be one-to-one")
    return table


def _plural(word: str) -> str:
    return IRREGULAR.get(word, word + "s")


@dataclass
class _Renderer:
    rng: random.Random

    def en(self, words: list[str]) -> str:
        out = []
        for w in words:
            if self.rng.random() < 0.3:
                out.append(self.rng.choice(STOPWORDS))
            out.append(_plural(w) if self.rng.random() < 0.25 else w)
        text = " ".join(out)
        return text[0].upper() + text[1:] + "."

    def ja(self, words: list[str]) -> str:
        out = [words[0]]
        for w in words[1:]:
            out.append(self.rng.choice(PARTICLES))
            out.append(w)
        return "".join(out) + "。"


def _doc_words(rng: random.Random, topic_words: dict[str, int], n_filler: int) -> list[str]:
    words = [w for w, tf in topic_words.items() for _ in range(tf)]
    words += rng.choices(sorted(FILLER.values()), k=n_filler)
    rng.shuffle(words)
    return words


def generate(out_dir: str | Path = FIXTURE_DIR, seed: int = 7) -> Path:
    """Write the bilingual fixture files into ``out_dir``."""
    rng = random.Random(seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    j2e = ja_to_en()
    e2j = {e: j for j, e in j2e.items()}
    render = _Renderer(rng)

    docs: list[tuple[str, list[str]]] = []  # (kind, en words)
    owners: list[str | None] = []
    for qid, topic in TOPICS.items():
        correct = [en for _, en, _ in topic["query"]]
        for _ in range(6):
            chosen = [c for c in correct if rng.random() < 0.55] or correct[:2]
            tw = {}
            for c in chosen:
                for w in c.split():
                    tw[w] = rng.randint(1, 3)
            docs.append(("relevant", _doc_words(rng, tw, rng.randint(12, 20))))
            owners.append(qid)
        wrongs = [w for _, _, ws in topic["query"] for w in ws]
        plain = [en for _, en, ws in topic["query"] if not ws and " " not in en]
        for i in range(4):
            sense = wrongs[i % len(wrongs)]
            tw = {sense: rng.randint(2, 4)}
            for ctx in DISTRACTOR_CONTEXT[sense]:
                tw[ctx] = rng.randint(1, 2)
            other = wrongs[(i + 1) % len(wrongs)]
            tw[other] = tw.get(other, 0) + 1
            tw[rng.choice(plain)] = 1
            docs.append(("distractor", _doc_words(rng, tw, rng.randint(10, 16))))
            owners.append(None)
    all_query_words = sorted({w for s in TOPICS.values() for _, en, _ in s["query"] for w in en.split()})
    for _ in range(20):
        tw = {}
        for w in rng.sample(all_query_words, rng.randint(0, 3)):
            tw[w] = rng.randint(1, 2)
        docs.append(("filler", _doc_words(rng, tw, rng.randint(15, 25))))
        owners.append(None)

    order = list(range(len(docs)))
    rng.shuffle(order)
    en_lines, ja_lines, qrels = [], [], []
    lexicon = tokenize.SegmentLexicon(
        {**{j: tokenize.CONTENT for j in j2e}, **{p: tokenize.FUNCTION for p in PARTICLES + ["。"]}}
    )
    for n, i in enumerate(order):
        doc_id = f"JP{n:04d}"
        words = docs[i][1]
        ja_words = [e2j[w] for w in words]
        ja_text = render.ja(ja_words)
        if tokenize.tokenize_segmented(ja_text, lexicon) != ja_words:
            raise AssertionError(f"{doc_id}: ja text does not segment back into its words")
        en_lines.append({"doc_id": doc_id, "lang": "en", "text": render.en(words)})
        ja_lines.append({"doc_id": doc_id, "lang": "ja", "text": ja_text})
        for qid in TOPICS:
            qrels.append((qid, doc_id, int(owners[i] == qid)))

    topics = []
    for qid, topic in TOPICS.items():
        units = [ja.replace(" ", "") for ja, _, _ in topic["query"]]
        narrative = topic["narrative"].split()
        topics.append({
            "topic_id": qid,
            "description": render.ja(units),
            "narrative": render.ja(narrative),
            "lang": "ja",
        })

    dict_rows = []
    for ja, en in sorted(j2e.items()):
        if any(ja == src for s in TOPICS.values() for src, _, _ in s["query"]):
            continue
        if ja == "銀系":
            continue
        dict_rows.append((ja, en))
    for topic in TOPICS.values():
        for ja, en, wrong in topic["query"]:
            if ja == "銀系":
                continue
            if ja == "ダイオキシン":
                continue  # reached through transliteration
            dict_rows.append((ja, en))
            dict_rows.extend((ja, w) for w in wrong)
    for ja, senses in PART_SENSES.items():
        dict_rows = [r for r in dict_rows if r[0] != ja]
        dict_rows.extend((ja, s) for s in senses)

    stats = _stats_corpus(rng)

    _write_jsonl(out_dir / "docs_en.jsonl", en_lines)
    _write_jsonl(out_dir / "docs_ja.jsonl", ja_lines)
    _write_jsonl(out_dir / "topics.jsonl", topics)
    _write_jsonl(out_dir / "stats_en.jsonl", stats)
    _write_rows(out_dir / "qrels.tsv", qrels)
    _write_rows(out_dir / "dict.tsv", dict_rows)
    _write_rows(out_dir / "translit.tsv", TRANSLIT)
    _write_rows(out_dir / "lexicon.tsv", sorted(lexicon.entries.items()))
    lemma_words = sorted(set(j2e.values()) | {w for ws in PART_SENSES.values() for w in ws})
    _write_rows(out_dir / "lemmas.tsv", [(_plural(w), w) for w in lemma_words])
    (out_dir / "stopwords.txt").write_text("\n".join(STOPWORDS) + "\n", encoding="utf-8")
    return out_dir


def _stats_corpus(rng: random.Random, n_docs: int = 200) -> list[dict]:
    """English documents where right senses co-occur in query order."""
    render = _Renderer(rng)
    chains = []
    for topic in TOPICS.values():
        chains.append([w for _, en, _ in topic["query"] for w in en.split()])
    # wrong senses only ever appear next to their own context words
    wrong_chains = [[ctx[0], sense, ctx[1]] for sense, ctx in DISTRACTOR_CONTEXT.items()]
    filler = sorted(FILLER.values())
    out = []
    for n in range(n_docs):
        words = rng.choices(filler, k=rng.randint(8, 14))
        for _ in range(rng.randint(1, 2)):
            chain = rng.choice(chains)
            start = rng.randrange(len(chain) - 1)
            window = chain[start : start + rng.randint(2, 3)]
            pos = rng.randrange(len(words) + 1)
            words[pos:pos] = window
        if rng.random() < 0.5:
            chain = rng.choice(wrong_chains)
            pos = rng.randrange(len(words) + 1)
            words[pos:pos] = chain
        out.append({"doc_id": f"NC{n:05d}", "lang": "en", "text": render.en(words)})
    return out


def _write_jsonl(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _write_rows(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write("\t".join(map(str, row)) + "\n")


def random_collection_lines(n_docs: int, tokens_per_doc: int = 100, vocab_size: int = 20000, seed: int = 0):
    """JSON-lines records of Zipf-distributed pseudo-words (desk-scale benchmarks)."""
    import numpy as np

    rng = np.random.default_rng(seed)
    vocab = np.array([f"t{i:x}" for i in range(vocab_size)])
    p = 1.0 / np.arange(1, vocab_size + 1)
    ids = rng.choice(vocab_size, size=(n_docs, tokens_per_doc), p=p / p.sum())
    return [
        {"doc_id": f"D{d:07d}", "lang": "en", "text": " ".join(vocab[row])}
        for d, row in enumerate(ids)
    ]


def run_experiment(workdir: str | Path, fixture: str | Path = FIXTURE_DIR, k: int = 1) -> dict[str, Path]:
    """Run MONO, ALL and DIS end to end through the CLI; returns artifact paths."""
    from patclir.cli import main

    fx = Path(fixture)
    work = Path(workdir)
    work.mkdir(parents=True, exist_ok=True)
    en_res = ["--stopwords", str(fx / "stopwords.txt"), "--lemmas", str(fx / "lemmas.tsv")]
    ja_res = ["--lexicon", str(fx / "lexicon.tsv")]
    steps = [
        ["build-index", "--collection", str(fx / "docs_en.jsonl"), *en_res, "--out", str(work / "en.idx")],
        ["build-index", "--collection", str(fx / "docs_ja.jsonl"), *ja_res, "--out", str(work / "ja.idx")],
        ["extract-bigrams", "--collection", str(fx / "stats_en.jsonl"), *en_res, "--out", str(work / "bigrams.bin")],
        ["search", "--mode", "MONO", "--index", str(work / "ja.idx"), "--topics", str(fx / "topics.jsonl"),
         *ja_res, "--tag", "JJ", "--out", str(work / "JJ.run")],
        ["search", "--mode", "ALL", "--index", str(work / "en.idx"), "--topics", str(fx / "topics.jsonl"),
         *ja_res, *en_res, "--dict", str(fx / "dict.tsv"), "--translit", str(fx / "translit.tsv"),
         "--tag", "JEALL", "--out", str(work / "JEALL.run")],
        ["search", "--mode", "DIS", "--k", str(k), "--index", str(work / "en.idx"), "--topics", str(fx / "topics.jsonl"),
         *ja_res, *en_res, "--dict", str(fx / "dict.tsv"), "--translit", str(fx / "translit.tsv"),
         "--bigrams", str(work / "bigrams.bin"), "--tag", "JEDIS", "--out", str(work / "JEDIS.run")],
        ["evaluate", str(work / "JJ.run"), str(work / "JEDIS.run"), str(work / "JEALL.run"),
         "--qrels", str(fx / "qrels.tsv"), "--topics", str(fx / "topics.jsonl"), "--baseline", "JJ",
         "--out", str(work / "eval")],
    ]
    for argv in steps:
        code = main(argv)
        if code != 0:
            raise RuntimeError(f"patclir {' '.join(argv[:1])} exited with {code}")
    return {
        "en_index": work / "en.idx",
        "ja_index": work / "ja.idx",
        "bigrams": work / "bigrams.bin",
        "runs": [work / "JJ.run", work / "JEDIS.run", work / "JEALL.run"],
        "report": work / "eval" / "report.json",
        "curve": work / "eval" / "curve.tsv",
    }


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else FIXTURE_DIR
    if target.exists() and target != FIXTURE_DIR:
        shutil.rmtree(target)
    print(generate(target))
