"""Command-line entry points.

Every pipeline stage is its own subcommand so a corpus can be built step by
step and inspected between stages; ``run`` executes the whole chain from a
JSON config. Paths are positional, tuning knobs are flags.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from bitextkit import __version__
from bitextkit.core import (
    FormatError,
    read_alignments,
    read_documents,
    read_gold,
    read_metadata,
    read_sentences,
    write_documents,
)
from bitextkit.evaluation import alignment_type_distribution, prf1
from bitextkit.pipeline import (
    PipelineConfig,
    PipelineError,
    SplitSpec,
    _dedup_rows,
    _stage_align,
    _stage_preprocess,
    _stage_sbd,
    _stage_split,
    corpus_stats,
    dedup_pairs,
    load_config,
    run_pipeline,
)
from bitextkit.scoring import BleuConfig, corpus_bleu, sentence_bleu, tokenize

log = logging.getLogger("bitextkit")


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(
            {"level": record.levelname, "logger": record.name, "message": record.getMessage()},
            sort_keys=True,
        )


def _configure_logging(fmt: str) -> None:
    handler = logging.StreamHandler(sys.stderr)
    if fmt == "json":
        handler.setFormatter(_JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logging.basicConfig(level=logging.INFO, handlers=[handler], force=True)


def _read_tsv(path: Path, min_cols: int, max_cols: int) -> list[tuple[str, ...]]:
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        fields = tuple(line.split("\t"))
        if not min_cols <= len(fields) <= max_cols:
            raise FormatError(
                f"{path} line {lineno}: expected {min_cols}-{max_cols} tab-separated fields"
            )
        rows.append(fields)
    return rows


def _langs(args) -> tuple[str, str]:
    return args.src_lang, args.tgt_lang


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_run(args) -> int:
    if args.config is None:
        raise ValueError("run requires --config FILE")
    return run_pipeline(load_config(args.config), args.jobs)


def _cmd_ingest(args) -> int:
    docs = read_documents(args.input, _langs(args))
    write_documents(docs, args.output)
    print(f"ingested {len(docs)} documents into {args.output}")
    return 0


def _cmd_preprocess(args) -> int:
    config = PipelineConfig(
        input=args.input,
        output=args.output,
        patterns=args.patterns,
        truecase=not args.no_truecase,
        src_lang=args.src_lang,
        tgt_lang=args.tgt_lang,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    n_in, n_out = _stage_preprocess(config, out, {})
    print(f"preprocessed {n_in} documents -> {out / '01_preprocess'}")
    return 0


def _cmd_sbd(args) -> int:
    config = PipelineConfig(
        input=args.input,
        output=args.output,
        abbreviations=args.abbreviations,
        en_sbd=args.en_method,
        src_lang=args.src_lang,
        tgt_lang=args.tgt_lang,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    state = {"docs": read_documents(args.input, _langs(args))}
    n_in, n_out = _stage_sbd(config, out, state)
    print(f"segmented {n_in} documents into {n_out} sentences -> {out / '02_sbd'}")
    return 0


def _load_sentence_dir(directory: Path, languages: tuple[str, str]) -> dict:
    metas = read_metadata(directory, languages)
    sentences = {
        m.doc_id: read_sentences(directory / f"{m.doc_id}.tsv", m.doc_id, m.language)
        for m in metas
    }
    return {"meta": metas, "sentences": sentences}


def _cmd_align(args) -> int:
    config = PipelineConfig(
        input=args.sentences,
        output=args.output,
        method=args.method,
        params_file=args.params,
        estimate_params=not args.no_estimate,
        theta1=args.theta1,
        theta2=args.theta2,
        em_iterations=args.iterations,
        min_score=args.min_score,
        mt_src=args.src_mt,
        mt_tgt=args.tgt_mt,
        src_lang=args.src_lang,
        tgt_lang=args.tgt_lang,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    state = _load_sentence_dir(Path(args.sentences), _langs(args))
    n_in, n_out = _stage_align(config, out, state, args.jobs or 1)
    print(f"aligned {n_in} article pairs into {n_out} beads -> {out / '03_align'}")
    return 0


def _cmd_dedup(args) -> int:
    rows = _read_tsv(Path(args.input), 2, 3)
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise FormatError(f"{args.input}: mixed column counts {sorted(widths)}")
    if widths == {3}:
        kept, removed = _dedup_rows(rows)
    else:
        kept, removed = dedup_pairs(rows)
    Path(args.output).write_text(
        "".join("\t".join(r) + "\n" for r in kept), encoding="utf-8"
    )
    print(f"kept {len(kept)} pairs, removed {removed} duplicates -> {args.output}")
    return 0


def _cmd_split(args) -> int:
    rows = _read_tsv(Path(args.pairs), 3, 3)
    meta_dir = Path(args.meta)
    config = PipelineConfig(
        input=meta_dir,
        output=args.output,
        split=SplitSpec(args.test, args.dev),
        src_lang=args.src_lang,
        tgt_lang=args.tgt_lang,
    )
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    state = {"bitext": rows, "meta": read_metadata(meta_dir, _langs(args))}
    _stage_split(config, out, state)
    print(f"split manifests written -> {out / '05_split'}")
    return 0


def _cmd_eval(args) -> int:
    pred = read_alignments(args.pred)
    gold = read_gold(args.gold)
    p, r, f1 = prf1(pred, gold, one_to_one_only=not args.all_types)
    print(f"precision={p:.4f} recall={r:.4f} f1={f1:.4f}")
    if args.distribution:
        for bead_type, count, percent in alignment_type_distribution(gold):
            print(f"{bead_type},{count},{percent}")
    return 0


def _cmd_stats(args) -> int:
    rows = _read_tsv(Path(args.pairs), 2, 3)
    triples = [r if len(r) == 3 else ("-",) + r for r in rows]
    pairs, src_tokens, tgt_tokens, articles = corpus_stats(
        triples, args.src_lang, args.tgt_lang
    )
    print(
        f"sentence_pairs={pairs} src_tokens={src_tokens} "
        f"tgt_tokens={tgt_tokens} articles={articles}"
    )
    return 0


def _cmd_bleu(args) -> int:
    hyp_lines = Path(args.hyp).read_text(encoding="utf-8").splitlines()
    ref_lines = Path(args.ref).read_text(encoding="utf-8").splitlines()
    cfg = BleuConfig(n_max=args.n_max)
    hyps = [tokenize(h, args.lang) for h in hyp_lines]
    refs = [tokenize(r, args.lang) for r in ref_lines]
    if args.sentence:
        if len(hyps) != len(refs):
            raise ValueError(f"length mismatch: {len(hyps)} hypotheses vs {len(refs)} references")
        for h, r in zip(hyps, refs):
            print(f"{sentence_bleu(h, r, cfg):.6f}")
    else:
        print(f"{corpus_bleu(hyps, refs, cfg):.6f}")
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_lang_flags(sub) -> None:
    sub.add_argument("--src-lang", default="zh", help="source language tag (default zh)")
    sub.add_argument("--tgt-lang", default="en", help="target language tag (default en)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitextkit",
        description="Build sentence-aligned bilingual corpora from paired documents.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="pipeline config (JSON)")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    parser.add_argument("--seed", type=int, default=None, help="reserved; no stage is stochastic")
    parser.add_argument("--log-format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", help="run the full pipeline from --config")
    s.set_defaults(func=_cmd_run)

    s = sub.add_parser("ingest", help="validate and copy a raw document directory")
    s.add_argument("input", type=Path)
    s.add_argument("output", type=Path)
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_ingest)

    s = sub.add_parser("preprocess", help="normalize, stitch, filter boilerplate, truecase")
    s.add_argument("input", type=Path)
    s.add_argument("output", type=Path)
    s.add_argument("--patterns", type=Path, help="boilerplate pattern file")
    s.add_argument("--no-truecase", action="store_true")
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_preprocess)

    s = sub.add_parser("sbd", help="split paragraphs into sentences")
    s.add_argument("input", type=Path, help="preprocessed document directory")
    s.add_argument("output", type=Path)
    s.add_argument("--en-method", choices=("rules", "punkt"), default="rules")
    s.add_argument("--abbreviations", type=Path, help="abbreviation list file")
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_sbd)

    s = sub.add_parser("align", help="align sentences of each article pair")
    s.add_argument("sentences", type=Path, help="sentence directory (sbd output)")
    s.add_argument("output", type=Path)
    s.add_argument("--method", choices=("gc", "moore", "bleualign"), default="gc")
    s.add_argument("--params", type=Path, help="length parameter file (skips estimation)")
    s.add_argument("--no-estimate", action="store_true", help="use default length parameters")
    s.add_argument("--theta1", type=float, default=0.99)
    s.add_argument("--theta2", type=float, default=0.5)
    s.add_argument("--iterations", type=int, default=4)
    s.add_argument("--min-score", type=float, default=0.0)
    s.add_argument("--src-mt", type=Path, help="directory of source translations, one <pair_id>.txt each")
    s.add_argument("--tgt-mt", type=Path, help="directory of target translations (enables bidirectional mode)")
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_align)

    s = sub.add_parser("dedup", help="drop near-duplicate sentence pairs")
    s.add_argument("input", type=Path, help="2- or 3-column pair TSV")
    s.add_argument("output", type=Path)
    s.set_defaults(func=_cmd_dedup)

    s = sub.add_parser("split", help="assign articles to train/dev/test")
    s.add_argument("pairs", type=Path, help="3-column (article, src, tgt) TSV")
    s.add_argument("meta", type=Path, help="directory containing metadata.tsv")
    s.add_argument("output", type=Path)
    s.add_argument("--test", type=int, default=2102, help="test sentence target")
    s.add_argument("--dev", type=int, default=2036, help="dev sentence target")
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_split)

    s = sub.add_parser("eval", help="score an alignment against gold")
    s.add_argument("pred", type=Path)
    s.add_argument("gold", type=Path)
    s.add_argument("--all-types", action="store_true", help="score all bead types, not only 1-1")
    s.add_argument("--distribution", action="store_true", help="also print the gold bead type table")
    s.set_defaults(func=_cmd_eval)

    s = sub.add_parser("stats", help="corpus size statistics from a pair TSV")
    s.add_argument("pairs", type=Path)
    _add_lang_flags(s)
    s.set_defaults(func=_cmd_stats)

    s = sub.add_parser("bleu", help="BLEU of line-parallel files")
    s.add_argument("hyp", type=Path)
    s.add_argument("ref", type=Path)
    s.add_argument("--lang", default="en", help="tokenizer language")
    s.add_argument("--n-max", type=int, default=2)
    s.add_argument("--sentence", action="store_true", help="print one score per line")
    s.set_defaults(func=_cmd_bleu)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_format)
    if args.seed is not None:
        random.seed(args.seed)
    try:
        return args.func(args)
    except (PipelineError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
