"""End-to-end corpus construction: preprocess, segment, align, dedup, split.

Every stage leaves its artifacts under the output directory (numbered
subdirectories, TSV throughout) plus a machine-readable run log. Files are
written to a ``.partial`` name and renamed on completion, so an aborted run
never leaves a truncated file under a final name. Article-level work is
ordered, so worker count never changes the output bytes.
"""

from __future__ import annotations

import json
import logging
import time
import unicodedata
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from hashlib import blake2b
from pathlib import Path

from bitextkit.bleualign import bleualign
from bitextkit.core import (
    META_FILENAME,
    AlignmentSet,
    ArticleMeta,
    Document,
    SentenceList,
    read_documents,
    write_alignments,
    write_documents,
    write_metadata,
    write_sentences,
)
from bitextkit.gale_church import (
    LengthParams,
    estimate_length_params,
    gc_align,
    load_length_params,
    save_length_params,
)
from bitextkit.moore import (
    EM_ITERATIONS,
    THETA1,
    THETA2,
    TranslationTable,
    length_pass,
    moore_align,
    save_table,
    train_lexicon,
)
from bitextkit.preprocess import (
    apply_truecaser,
    default_filter_rules,
    filter_boilerplate,
    load_filter_rules,
    normalize_document,
    paragraph_count_report,
    stitch_paragraphs,
    train_truecaser,
)
from bitextkit.sbd import (
    default_abbrevs,
    load_abbrevs,
    save_punkt,
    sbd_diff_report,
    segment_en_rules,
    segment_punkt,
    segment_zh,
    train_punkt,
)
from bitextkit.scoring import BleuConfig, tokenize

log = logging.getLogger(__name__)

#: The one supported content hash for dedup (recorded in the run log).
HASH_NAME = "blake2b-64"


class PipelineError(Exception):
    """A stage failed; the message names the stage and the cause."""


# ---------------------------------------------------------------------------
# deduplication

def normalize_for_dedup(text: str) -> str:
    """Casefold, drop digits and punctuation, collapse whitespace."""
    kept = []
    for ch in text.lower():
        if ch.isdigit() or unicodedata.category(ch).startswith("P"):
            continue
        kept.append(ch)
    return " ".join("".join(kept).split())


def pair_hash(src: str, tgt: str) -> str:
    payload = f"{normalize_for_dedup(src)}\t{normalize_for_dedup(tgt)}"
    return blake2b(payload.encode("utf-8"), digest_size=8).hexdigest()


def dedup_pairs(pairs: list[tuple[str, str]]) -> tuple[list[tuple[str, str]], int]:
    """Keep the first occurrence of each normalized (src, tgt) pair."""
    seen: set[str] = set()
    kept = []
    for src, tgt in pairs:
        h = pair_hash(src, tgt)
        if h not in seen:
            seen.add(h)
            kept.append((src, tgt))
    return kept, len(pairs) - len(kept)


def _dedup_rows(rows: list[tuple[str, str, str]]) -> tuple[list[tuple[str, str, str]], int]:
    """Same policy for (article, src, tgt) rows."""
    seen: set[str] = set()
    kept = []
    for row in rows:
        h = pair_hash(row[1], row[2])
        if h not in seen:
            seen.add(h)
            kept.append(row)
    return kept, len(rows) - len(kept)


# ---------------------------------------------------------------------------
# splitting

@dataclass(frozen=True)
class SplitSpec:
    """Sentence-count targets for the held-out splits; articles are consumed
    newest-first and never straddle a split."""

    test_sentence_target: int = 2102
    dev_sentence_target: int = 2036

    def __post_init__(self):
        if self.test_sentence_target < 0 or self.dev_sentence_target < 0:
            raise ValueError("split targets must be >= 0")


def split_corpus(
    articles: list[tuple[ArticleMeta, int]], spec: SplitSpec = SplitSpec()
) -> dict[str, str]:
    """Assign whole articles to test, then dev, then train.

    Articles are ordered by date descending (id breaks ties); each phase
    consumes articles until its cumulative sentence-pair count reaches the
    target. Running out of articles mid-phase logs a warning.
    """
    ids = [meta.pair_id for meta, _ in articles]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ValueError(f"duplicate article ids: {', '.join(dupes)}")
    remaining = sorted(articles, key=lambda a: (-a[0].date.toordinal(), a[0].pair_id))
    assignment: dict[str, str] = {}
    pos = 0
    for split_name, target in (
        ("test", spec.test_sentence_target),
        ("dev", spec.dev_sentence_target),
    ):
        taken = 0
        while pos < len(remaining) and taken < target:
            meta, count = remaining[pos]
            assignment[meta.pair_id] = split_name
            taken += count
            pos += 1
        if taken < target:
            log.warning(
                "articles exhausted while filling %s split (%d of %d sentence pairs)",
                split_name,
                taken,
                target,
            )
    for meta, _ in remaining[pos:]:
        assignment[meta.pair_id] = "train"
    return assignment


# ---------------------------------------------------------------------------
# statistics

def corpus_stats(
    bitext: list[tuple[str, str, str]], src_lang: str = "zh", tgt_lang: str = "en"
) -> tuple[int, int, int, int]:
    """(sentence pairs, source tokens, target tokens, distinct articles)
    over (article, src, tgt) rows."""
    src_tokens = sum(len(tokenize(src, src_lang)) for _, src, _ in bitext)
    tgt_tokens = sum(len(tokenize(tgt, tgt_lang)) for _, _, tgt in bitext)
    return len(bitext), src_tokens, tgt_tokens, len({a for a, _, _ in bitext})


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class PipelineConfig:
    input: Path
    output: Path
    patterns: Path | None = None
    abbreviations: Path | None = None
    src_lang: str = "zh"
    tgt_lang: str = "en"
    en_sbd: str = "rules"  # "rules" | "punkt"
    truecase: bool = True
    method: str = "gc"  # "gc" | "moore" | "bleualign"
    params_file: Path | None = None
    estimate_params: bool = True
    theta1: float = THETA1
    theta2: float = THETA2
    em_iterations: int = EM_ITERATIONS
    min_score: float = 0.0
    mt_src: Path | None = None
    mt_tgt: Path | None = None
    bleu: BleuConfig = BleuConfig()
    split: SplitSpec = SplitSpec()
    jobs: int = 1

    def __post_init__(self):
        if self.method not in ("gc", "moore", "bleualign"):
            raise ValueError(f"unknown aligner method {self.method!r}")
        if self.en_sbd not in ("rules", "punkt"):
            raise ValueError(f"unknown en segmenter {self.en_sbd!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


_PATH_KEYS = ("input", "output", "patterns", "abbreviations", "params_file", "mt_src", "mt_tgt")


def load_config(path: str | Path) -> PipelineConfig:
    """Read a JSON config; relative paths resolve against the file's directory."""
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: expected a JSON object")
    if raw.pop("hash", HASH_NAME) != HASH_NAME:
        raise ValueError(f"{path}: unsupported hash (only {HASH_NAME})")
    kwargs: dict = {}
    for key, value in raw.items():
        if key in _PATH_KEYS:
            kwargs[key] = (path.parent / value).resolve() if value is not None else None
        elif key == "bleu":
            kwargs[key] = BleuConfig(**value)
        elif key == "split":
            kwargs[key] = SplitSpec(**value)
        else:
            kwargs[key] = value
    try:
        return PipelineConfig(**kwargs)
    except TypeError as exc:
        raise ValueError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# stage helpers

def _write_text(path: Path, text: str) -> None:
    partial = path.with_name(path.name + ".partial")
    partial.write_text(text, encoding="utf-8", newline="\n")
    partial.rename(path)


def _write_rows(path: Path, rows) -> None:
    _write_text(path, "".join("\t".join(str(f) for f in row) + "\n" for row in rows))


def _write_csv(path: Path, rows) -> None:
    _write_text(path, "".join(",".join(str(f) for f in row) + "\n" for row in rows))


def _paired_metas(
    metas: list[ArticleMeta], src_lang: str, tgt_lang: str
) -> list[tuple[str, ArticleMeta, ArticleMeta]]:
    by_pair: dict[str, dict[str, ArticleMeta]] = {}
    for m in metas:
        by_pair.setdefault(m.pair_id, {})[m.language] = m
    pairs = []
    for pair_id, sides in by_pair.items():
        if set(sides) != {src_lang, tgt_lang}:
            raise ValueError(f"article {pair_id} lacks a {src_lang}/{tgt_lang} pair")
        pairs.append((pair_id, sides[src_lang], sides[tgt_lang]))
    return pairs


def _paired_docs(
    docs: list[Document], src_lang: str, tgt_lang: str
) -> list[tuple[str, Document, Document]]:
    by_id = {d.meta.doc_id: d for d in docs}
    return [
        (pair_id, by_id[sm.doc_id], by_id[tm.doc_id])
        for pair_id, sm, tm in _paired_metas([d.meta for d in docs], src_lang, tgt_lang)
    ]


def _join(sentences, lang: str) -> str:
    return "".join(sentences) if lang == "zh" else " ".join(sentences)


def _pmap(fn, payloads: list, jobs: int) -> list:
    if jobs <= 1 or len(payloads) <= 1:
        return [fn(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, payloads))


def _gc_worker(payload) -> AlignmentSet:
    src, tgt, params = payload
    return gc_align(src, tgt, params)


def _length_worker(payload) -> list[tuple[int, int]]:
    src, tgt, theta1 = payload
    return length_pass(src, tgt, theta1)[1]


def _moore_worker(payload) -> AlignmentSet:
    src, tgt, table, theta2 = payload
    return moore_align(src, tgt, table, theta2)


def _bleualign_worker(payload) -> AlignmentSet:
    src, tgt, mt_src, mt_tgt, cfg, min_score, params = payload
    return bleualign(src, tgt, mt_src, mt_tgt, cfg, min_score, params)


def _segment(doc: Document, abbrevs, punkt_model) -> SentenceList:
    sentences: list[str] = []
    para_idx: list[int] = []
    for idx, para in enumerate(doc.paragraphs):
        if doc.meta.language == "zh":
            segs = segment_zh(para)
        elif punkt_model is not None:
            segs = segment_punkt(para, punkt_model)
        else:
            segs = segment_en_rules(para, abbrevs)
        sentences.extend(segs)
        para_idx.extend([idx] * len(segs))
    return SentenceList(doc.meta.doc_id, doc.meta.language, tuple(sentences), tuple(para_idx))


def _read_mt(path: Path, doc_id: str, language: str, template: SentenceList) -> SentenceList:
    if not path.is_file():
        raise FileNotFoundError(f"translation file not found: {path}")
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if len(lines) != len(template):
        raise ValueError(
            f"{path}: {len(lines)} translation lines for {len(template)} sentences"
        )
    return SentenceList(doc_id, language, tuple(lines), template.paragraph_index)


# ---------------------------------------------------------------------------
# the pipeline

def run_pipeline(config: PipelineConfig, jobs: int | None = None) -> int:
    """Execute all stages; returns 0 on success, raises PipelineError otherwise."""
    jobs = config.jobs if jobs is None else jobs
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    entries: list[dict] = [
        {"stage": "start", "method": config.method, "hash": HASH_NAME, "jobs": jobs}
    ]
    state: dict = {}

    def stage(name: str, fn) -> None:
        t0 = time.monotonic()
        try:
            n_in, n_out = fn()
        except Exception as exc:
            raise PipelineError(f"{name} stage failed: {exc}") from exc
        entries.append(
            {
                "stage": name,
                "inputs": n_in,
                "outputs": n_out,
                "duration_s": round(time.monotonic() - t0, 6),
            }
        )

    stage("preprocess", lambda: _stage_preprocess(config, out, state))
    stage("sbd", lambda: _stage_sbd(config, out, state))
    stage("align", lambda: _stage_align(config, out, state, jobs))
    stage("dedup", lambda: _stage_dedup(config, out, state))
    stage("split", lambda: _stage_split(config, out, state))
    stage("stats", lambda: _stage_stats(config, out, state))
    _write_text(
        out / "run_log.jsonl",
        "".join(json.dumps(e, sort_keys=True) + "\n" for e in entries),
    )
    return 0


def _stage_preprocess(config: PipelineConfig, out: Path, state: dict) -> tuple[int, int]:
    docs = read_documents(config.input, (config.src_lang, config.tgt_lang))
    rules = load_filter_rules(config.patterns) if config.patterns else default_filter_rules()
    pre = [stitch_paragraphs(normalize_document(d)) for d in docs]
    removal_rows: list[tuple[str, int, str]] = []
    post: list[Document] = []
    for doc in pre:
        filtered, removals = filter_boilerplate(doc, rules)
        removal_rows.extend((doc.meta.doc_id, idx, rule) for idx, rule in removals)
        post.append(filtered)
    if config.truecase:
        model = train_truecaser([d for d in post if d.meta.language == "en"])
        post = [apply_truecaser(d, model) if d.meta.language == "en" else d for d in post]
    stage_dir = out / "01_preprocess"
    stage_dir.mkdir(exist_ok=True)
    write_documents(post, stage_dir)
    _write_rows(out / "removal_log.tsv", removal_rows)
    pre_pairs = [(s, t) for _, s, t in _paired_docs(pre, config.src_lang, config.tgt_lang)]
    post_pairs = [(s, t) for _, s, t in _paired_docs(post, config.src_lang, config.tgt_lang)]
    _write_csv(out / "paragraph_report.csv", paragraph_count_report(pre_pairs, post_pairs))
    state["docs"] = post
    return len(docs), len(post)


def _stage_sbd(config: PipelineConfig, out: Path, state: dict) -> tuple[int, int]:
    docs = state["docs"]
    abbrevs = load_abbrevs(config.abbreviations) if config.abbreviations else default_abbrevs()
    punkt_model = None
    stage_dir = out / "02_sbd"
    stage_dir.mkdir(exist_ok=True)
    if config.en_sbd == "punkt":
        punkt_model = train_punkt([d for d in docs if d.meta.language == "en"])
        save_punkt(punkt_model, stage_dir / "punkt_model.txt")
    sentence_lists = {d.meta.doc_id: _segment(d, abbrevs, punkt_model) for d in docs}
    for doc_id, sl in sentence_lists.items():
        write_sentences(sl, stage_dir / f"{doc_id}.tsv")
    write_metadata(docs, stage_dir / META_FILENAME)
    counts: dict[str, dict[str, int]] = {config.src_lang: {}, config.tgt_lang: {}}
    for d in docs:
        counts[d.meta.language][d.meta.pair_id] = len(sentence_lists[d.meta.doc_id])
    _write_csv(
        out / "sbd_report.csv",
        sbd_diff_report(counts[config.src_lang], counts[config.tgt_lang]),
    )
    state["sentences"] = sentence_lists
    state["meta"] = [d.meta for d in docs]
    return len(docs), sum(len(sl) for sl in sentence_lists.values())


def _doc_pairs(config: PipelineConfig, state: dict) -> list[tuple[str, SentenceList, SentenceList]]:
    sentence_lists = state["sentences"]
    return [
        (pair_id, sentence_lists[sm.doc_id], sentence_lists[tm.doc_id])
        for pair_id, sm, tm in _paired_metas(state["meta"], config.src_lang, config.tgt_lang)
    ]


def _reconstructed_paragraphs(sl: SentenceList, lang: str) -> list[str]:
    by_para: dict[int, list[str]] = {}
    for sent, idx in zip(sl.sentences, sl.paragraph_index):
        by_para.setdefault(idx, []).append(sent)
    return [_join(by_para[k], lang) for k in sorted(by_para)]


def _corpus_length_params(
    config: PipelineConfig, pairs: list[tuple[str, SentenceList, SentenceList]]
) -> LengthParams:
    """Length-model parameters for gc/bleualign: loaded, default, or fitted
    on paragraph pairs rebuilt from the segmented sentences."""
    if config.params_file:
        return load_length_params(config.params_file)
    if not config.estimate_params:
        return LengthParams()
    paragraph_pairs: list[tuple[str, str]] = []
    for _, src, tgt in pairs:
        src_paras = _reconstructed_paragraphs(src, config.src_lang)
        tgt_paras = _reconstructed_paragraphs(tgt, config.tgt_lang)
        if len(src_paras) == len(tgt_paras):
            paragraph_pairs.extend(zip(src_paras, tgt_paras))
        else:
            paragraph_pairs.append(("\n".join(src_paras), "\n".join(tgt_paras)))
    return estimate_length_params(paragraph_pairs)


def _stage_align(config: PipelineConfig, out: Path, state: dict, jobs: int) -> tuple[int, int]:
    pairs = _doc_pairs(config, state)
    stage_dir = out / "03_align"
    stage_dir.mkdir(exist_ok=True)
    if config.method == "moore":
        confident = _pmap(
            _length_worker, [(src, tgt, config.theta1) for _, src, tgt in pairs], jobs
        )
        table: TranslationTable = train_lexicon(
            [(src, tgt, conf) for (_, src, tgt), conf in zip(pairs, confident)],
            config.em_iterations,
        )
        save_table(table, stage_dir / "translation_table.tsv")
        results = _pmap(
            _moore_worker, [(src, tgt, table, config.theta2) for _, src, tgt in pairs], jobs
        )
    else:
        params = _corpus_length_params(config, pairs)
        save_length_params(params, stage_dir / "length_params.txt")
        if config.method == "gc":
            results = _pmap(_gc_worker, [(src, tgt, params) for _, src, tgt in pairs], jobs)
        else:
            if config.mt_src is None:
                raise ValueError("bleualign requires mt_src (directory of translation files)")
            payloads = []
            for pair_id, src, tgt in pairs:
                mt_src = _read_mt(
                    Path(config.mt_src) / f"{pair_id}.txt", f"{pair_id}-mt", config.tgt_lang, src
                )
                mt_tgt = None
                if config.mt_tgt is not None:
                    mt_tgt = _read_mt(
                        Path(config.mt_tgt) / f"{pair_id}.txt", f"{pair_id}-mt-rev", config.src_lang, tgt
                    )
                payloads.append((src, tgt, mt_src, mt_tgt, config.bleu, config.min_score, params))
            results = _pmap(_bleualign_worker, payloads, jobs)
    alignments: dict[str, AlignmentSet] = {}
    for (pair_id, _, _), aset in zip(pairs, results):
        alignments[pair_id] = aset
        write_alignments(aset, stage_dir / f"{pair_id}.tsv")
    state["pairs"] = pairs
    state["alignments"] = alignments
    return len(pairs), sum(len(a.beads) for a in alignments.values())


def _stage_dedup(config: PipelineConfig, out: Path, state: dict) -> tuple[int, int]:
    rows: list[tuple[str, str, str]] = []
    for pair_id, src, tgt in state["pairs"]:
        for bead in state["alignments"][pair_id].beads:
            if bead.src and bead.tgt:
                rows.append(
                    (
                        pair_id,
                        _join([src.sentences[i] for i in bead.src], config.src_lang),
                        _join([tgt.sentences[j] for j in bead.tgt], config.tgt_lang),
                    )
                )
    kept, removed = _dedup_rows(rows)
    stage_dir = out / "04_dedup"
    stage_dir.mkdir(exist_ok=True)
    _write_rows(stage_dir / "pairs.tsv", kept)
    _write_rows(stage_dir / "bitext.tsv", [(s, t) for _, s, t in kept])
    state["bitext"] = kept
    return len(rows), len(kept)


def _stage_split(config: PipelineConfig, out: Path, state: dict) -> tuple[int, int]:
    per_article: dict[str, int] = {}
    for pair_id, _, _ in state["bitext"]:
        per_article[pair_id] = per_article.get(pair_id, 0) + 1
    articles = [
        (src_meta, per_article.get(pair_id, 0))
        for pair_id, src_meta, _ in _paired_metas(state["meta"], config.src_lang, config.tgt_lang)
    ]
    assignment = split_corpus(articles, config.split)
    stage_dir = out / "05_split"
    stage_dir.mkdir(exist_ok=True)
    order = sorted(articles, key=lambda a: (-a[0].date.toordinal(), a[0].pair_id))
    _write_rows(
        stage_dir / "manifest.tsv",
        [(m.pair_id, assignment[m.pair_id], n) for m, n in order],
    )
    for split_name in ("train", "dev", "test"):
        rows = [(s, t) for a, s, t in state["bitext"] if assignment[a] == split_name]
        _write_rows(stage_dir / f"{split_name}.tsv", rows)
    state["assignment"] = assignment
    return len(articles), len(set(assignment.values()))


def _stage_stats(config: PipelineConfig, out: Path, state: dict) -> tuple[int, int]:
    scopes = [("all", state["bitext"])]
    for split_name in ("train", "dev", "test"):
        scopes.append(
            (
                split_name,
                [r for r in state["bitext"] if state["assignment"][r[0]] == split_name],
            )
        )
    rows = [("scope", "sentence_pairs", "src_tokens", "tgt_tokens", "articles")]
    for name, rows_in_scope in scopes:
        stats = corpus_stats(rows_in_scope, config.src_lang, config.tgt_lang)
        rows.append((name, *stats))
    _write_rows(out / "stats.tsv", rows)
    return len(state["bitext"]), len(rows) - 1
