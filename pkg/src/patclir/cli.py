"""Command-line entry point: ``patclir build-index | extract-bigrams | search | evaluate``.

Exit status is 0 on success, 1 on validation errors, 2 on I/O errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from patclir import bigram, corpus, evaluation, index, tokenize, translate
from patclir.errors import ValidationError

log = logging.getLogger("patclir")

MONO, ALL, DIS = "MONO", "ALL", "DIS"
MODES = (MONO, ALL, DIS)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class ExperimentConfig:
    collection: Path | None = None
    index: dict[str, Path] = field(default_factory=dict)  # "" = shared index
    topics: Path | None = None
    qrels: Path | None = None
    dict: Path | None = None
    translit: Path | None = None
    stopwords: Path | None = None
    lemmas: Path | None = None
    lexicon: Path | None = None
    bigrams: Path | None = None
    mode: str = MONO
    k: int = 1
    depth: int = 1000
    use_narrative: bool = False
    tag: str | None = None
    out: Path | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValidationError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise ValidationError("--k must be >= 1")
        if self.depth < 1:
            raise ValidationError("--depth must be >= 1")
        if self.mode in (ALL, DIS) and self.dict is None:
            raise ValidationError(f"mode {self.mode} requires --dict")
        if self.mode == DIS and self.bigrams is None:
            raise ValidationError("mode DIS requires --bigrams")

    @property
    def run_tag(self) -> str:
        return self.tag or self.mode


def _load_resources(cfg: ExperimentConfig) -> dict:
    return {
        "stopwords": tokenize.load_stopwords(cfg.stopwords) if cfg.stopwords else None,
        "lemmas": tokenize.load_lemmas(cfg.lemmas) if cfg.lemmas else None,
        "lexicon": tokenize.load_lexicon(cfg.lexicon) if cfg.lexicon else None,
    }


def _collection_tokenizer(coll: corpus.Collection, resources: dict) -> tokenize.Tokenizer:
    langs = coll.languages()
    if len(langs) != 1:
        raise ValidationError(f"collection mixes languages {sorted(langs)}")
    return tokenize.make_tokenizer(next(iter(langs)), **resources)


def cmd_build_index(cfg: ExperimentConfig) -> int:
    if cfg.collection is None or cfg.out is None:
        raise ValidationError("build-index requires --collection and --out")
    coll = corpus.load_collection(cfg.collection)
    tok = _collection_tokenizer(coll, _load_resources(cfg))
    idx = index.build_index(coll, tok)
    index.save_index(idx, cfg.out)
    print(f"N={idx.N} vocabulary={len(idx)}")
    return 0


def cmd_extract_bigrams(cfg: ExperimentConfig, tsv: Path | None = None) -> int:
    if cfg.collection is None or cfg.out is None:
        raise ValidationError("extract-bigrams requires --collection and --out")
    coll = corpus.load_collection(cfg.collection)
    tok = _collection_tokenizer(coll, _load_resources(cfg))
    model = bigram.extract_bigrams(coll, tok)
    bigram.save_model(model, cfg.out)
    if tsv is not None:
        bigram.dump_tsv(model, tsv)
    print(f"total_bigrams={model.total_bigrams}")
    return 0


class _Searcher:
    """Turns a topic into query terms for one index according to the mode."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.resources = _load_resources(cfg)
        self.dictionary = translate.load_dictionary(cfg.dict) if cfg.dict else None
        self.rules = translate.load_translit(cfg.translit) if cfg.translit else translate.TranslitRules(())
        self.model = bigram.load_model(cfg.bigrams) if cfg.mode == DIS else None
        self._normalized: dict[str, translate.TranslationDictionary] = {}

    def _target_dictionary(self, lang: str) -> translate.TranslationDictionary:
        if lang not in self._normalized:
            target_tok = tokenize.make_tokenizer(lang, **self.resources)
            self._normalized[lang] = self.dictionary.map_targets(target_tok)
        return self._normalized[lang]

    def query_terms(self, topic: corpus.Topic, idx: index.InvertedIndex):
        text = topic.query_text(self.cfg.use_narrative)
        target_lang = idx.lang or topic.lang
        if self.cfg.mode == MONO:
            if topic.lang != target_lang:
                raise ValidationError(
                    f"MONO search of {topic.lang!r} topic {topic.topic_id!r} against a {target_lang!r} index"
                )
            return tokenize.make_tokenizer(target_lang, **self.resources)(text), None
        source = tokenize.make_tokenizer(topic.lang, **self.resources)(text)
        lattice = translate.build_lattice(
            source, self._target_dictionary(target_lang), self.rules, idx.vocabulary
        )
        if self.cfg.mode == ALL:
            result = translate.translate_all(lattice)
        else:
            result = translate.disambiguate(lattice, self.model, self.cfg.k)
        return list(result.terms), lattice.to_json(result)


def cmd_search(cfg: ExperimentConfig, lattice_dir: Path | None = None) -> int:
    cfg.validate()
    if cfg.topics is None or cfg.out is None or not cfg.index:
        raise ValidationError("search requires --index, --topics and --out")
    topics = corpus.load_topics(cfg.topics)
    searcher = _Searcher(cfg)
    loaded: dict[Path, index.InvertedIndex] = {}

    def index_for(topic_id: str) -> index.InvertedIndex:
        path = cfg.index.get(topic_id, cfg.index.get(""))
        if path is None:
            raise ValidationError(f"no index given for topic {topic_id!r}")
        if path not in loaded:
            loaded[path] = index.load_index(path)
        return loaded[path]

    results = []
    for topic in sorted(topics, key=lambda t: t.topic_id):
        idx = index_for(topic.topic_id)
        terms, lattice_json = searcher.query_terms(topic, idx)
        ranked = idx.search(terms, cfg.depth, topic.topic_id) if terms else index.RankedList(topic.topic_id)
        if not ranked.hits:
            log.warning("topic %s: no query terms matched the index; emitting zero results", topic.topic_id)
        results.append(ranked)
        if lattice_dir is not None and lattice_json is not None:
            lattice_dir.mkdir(parents=True, exist_ok=True)
            (lattice_dir / f"{topic.topic_id}.json").write_text(lattice_json + "\n", encoding="utf-8")
    index.write_run(results, cfg.out, cfg.run_tag)
    return 0


def _load_reports(paths, qrels, depth, topic_ids) -> list[evaluation.EvalReport]:
    reports = []
    judgments = None
    for path in paths:
        path = Path(path)
        if path.suffix == ".json":
            try:
                obj = json.loads(path.read_text(encoding="utf-8"))
                reports.extend(evaluation.EvalReport.from_dict(m) for m in obj.get("methods", [obj]))
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise ValidationError(f"{path}: not a report file ({exc})") from None
            continue
        if judgments is None:
            if qrels is None:
                raise ValidationError("evaluating run files requires --qrels")
            judgments = corpus.relevant_sets(corpus.load_judgments(qrels))
        run = evaluation.load_run(path)
        reports.append(evaluation.evaluate_run(run, judgments, depth, topic_ids))
    return reports


def cmd_evaluate(runs, qrels=None, baseline=None, depth=None, topics=None, out=None) -> int:
    topic_ids = [t.topic_id for t in corpus.load_topics(topics)] if topics else None
    reports = _load_reports(runs, qrels, depth, topic_ids)
    tags = [r.tag for r in reports]
    if len(set(tags)) != len(tags):
        raise ValidationError(f"duplicate run tags {tags}")
    if baseline is not None:
        by_tag = {r.tag: r for r in reports}
        if baseline not in by_tag:
            raise ValidationError(f"baseline {baseline!r} is not among the evaluated runs {tags}")
        for rep in reports:
            rep.ratio_to_baseline = evaluation.compare(rep, by_tag[baseline])
            rep.baseline_tag = baseline
    print(evaluation.format_table(reports, baseline))
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        evaluation.write_report_json(reports, out / "report.json", baseline)
        evaluation.write_curve_tsv(reports, out / "curve.tsv")
    return 0


def _tokenizer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stopwords", type=Path, help="stopword list, one per line")
    p.add_argument("--lemmas", type=Path, help="TSV: inflected form, root")
    p.add_argument("--lexicon", type=Path, help="TSV: surface, content|function")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="patclir", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build-index", help="tokenize a collection and write the inverted index")
    p.add_argument("--collection", type=Path, required=True)
    _tokenizer_flags(p)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("extract-bigrams", help="count adjacent content-word pairs in a stats corpus")
    p.add_argument("--collection", type=Path, required=True)
    _tokenizer_flags(p)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--tsv", type=Path, help="also write a w1/w2/count debug dump")

    p = sub.add_parser("search", help="translate topics (per --mode) and write a run file")
    p.add_argument(
        "--index", action="append", required=True, metavar="[TOPIC=]PATH",
        help="index file; repeat as TOPIC=PATH for per-topic collections",
    )
    p.add_argument("--topics", type=Path, required=True)
    p.add_argument("--mode", choices=MODES, default=MONO)
    p.add_argument("--dict", type=Path)
    p.add_argument("--translit", type=Path)
    p.add_argument("--bigrams", type=Path)
    _tokenizer_flags(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--depth", type=int, default=1000)
    p.add_argument("--use-narrative", action="store_true")
    p.add_argument("--tag")
    p.add_argument("--lattice-dir", type=Path, help="write each topic's candidate lattice as JSON")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("evaluate", help="score run files and print the comparison table")
    p.add_argument("runs", nargs="+", help="run files, or report JSON with precomputed results")
    p.add_argument("--qrels", type=Path)
    p.add_argument("--baseline", help="run tag used as the ratio denominator")
    p.add_argument("--depth", type=int)
    p.add_argument("--topics", type=Path, help="score topics missing from a run as 0")
    p.add_argument("--out", type=Path, help="directory for report.json and curve.tsv")
    return parser


def _parse_index_flags(values) -> dict[str, Path]:
    out = {}
    for v in values:
        topic, sep, path = v.rpartition("=")
        if not sep:
            topic, path = "", v
        if topic in out:
            raise ValidationError(f"--index given twice for {topic or 'all topics'!r}")
        out[topic] = Path(path)
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "evaluate":
            return cmd_evaluate(args.runs, args.qrels, args.baseline, args.depth, args.topics, args.out)
        cfg = ExperimentConfig(
            collection=getattr(args, "collection", None),
            stopwords=args.stopwords,
            lemmas=args.lemmas,
            lexicon=args.lexicon,
            out=args.out,
        )
        if args.command == "build-index":
            return cmd_build_index(cfg)
        if args.command == "extract-bigrams":
            return cmd_extract_bigrams(cfg, args.tsv)
        cfg.index = _parse_index_flags(args.index)
        cfg.topics = args.topics
        cfg.dict = args.dict
        cfg.translit = args.translit
        cfg.bigrams = args.bigrams
        cfg.mode = args.mode
        cfg.k = args.k
        cfg.depth = args.depth
        cfg.use_narrative = args.use_narrative
        cfg.tag = args.tag
        return cmd_search(cfg, args.lattice_dir)
    except ValidationError as exc:
        print(f"patclir: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"patclir: I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
