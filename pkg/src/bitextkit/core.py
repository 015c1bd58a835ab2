"""Core data types and file formats for the corpus pipeline.

All stages exchange a small set of immutable types (documents, sentence
lists, alignment beads) plus plain-text file formats designed to be
diffable and trivially parseable:

* document text: UTF-8, one paragraph per line, LF endings, no BOM;
* document metadata: tab-separated sidecar, one record per document with
  fields ``id  pair_id  language  date  article_type`` (no header);
* sentence files: ``paragraph_index<TAB>sentence`` per line;
* alignment files: one bead per line as
  ``src_indices<TAB>tgt_indices<TAB>score<TAB>method[<TAB>note]`` where the
  index fields are comma-joined 0-based integers (empty for a 0-side),
  score is a decimal or ``NA``, preceded by an optional comment line
  ``# src_len=N\ttgt_len=M`` recording the sentence counts.
"""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field
from pathlib import Path

#: Bead shapes that may appear in alignments (the types observed in the
#: hand-aligned reference data).
BEAD_TYPES = frozenset({(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3)})

_LANG_RE = re.compile(r"[a-z]{2,8}")


class FormatError(ValueError):
    """Raised when an input file does not match its documented format."""


def check_language(code: str) -> str:
    """Validate a language tag (lowercase ASCII token, e.g. ``zh``/``en``)."""
    if not isinstance(code, str) or not _LANG_RE.fullmatch(code):
        raise ValueError(f"language: {code!r} is not a lowercase ASCII language tag")
    return code


@dataclass(frozen=True)
class ArticleMeta:
    """Identity and provenance of one crawled article document."""

    doc_id: str
    pair_id: str
    language: str
    date: datetime.date
    article_type: str = ""

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("doc_id: must be non-empty")
        if not self.pair_id:
            raise ValueError("pair_id: must be non-empty")
        check_language(self.language)
        if not isinstance(self.date, datetime.date):
            raise ValueError("date: must be a datetime.date")


@dataclass(frozen=True)
class Document:
    """One article in one language: metadata plus ordered paragraphs."""

    meta: ArticleMeta
    paragraphs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "paragraphs", tuple(self.paragraphs))
        for i, p in enumerate(self.paragraphs):
            if not isinstance(p, str) or not p.strip():
                raise ValueError(f"paragraphs[{i}]: must be non-empty text")


@dataclass(frozen=True)
class SentenceList:
    """Sentence-segmented document; parallel paragraph indices are kept so
    a paragraph's sentences can be re-joined losslessly."""

    doc_id: str
    language: str
    sentences: tuple[str, ...]
    paragraph_index: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))
        object.__setattr__(self, "paragraph_index", tuple(self.paragraph_index))
        check_language(self.language)
        if len(self.sentences) != len(self.paragraph_index):
            raise ValueError(
                "paragraph_index: must have one entry per sentence "
                f"({len(self.paragraph_index)} != {len(self.sentences)})"
            )
        prev = 0
        for i, (s, p) in enumerate(zip(self.sentences, self.paragraph_index)):
            if not s.strip():
                raise ValueError(f"sentences[{i}]: must be non-empty")
            if p < 0 or p < prev:
                raise ValueError("paragraph_index: must be non-decreasing and 0-based")
            prev = p

    def __len__(self) -> int:
        return len(self.sentences)


@dataclass(frozen=True)
class Bead:
    """One alignment link: a block of source sentences paired with a block
    of target sentences (either side may be empty, not both).

    Well-formed beads have contiguous ascending indices and a shape in
    :data:`BEAD_TYPES`; those constraints are reported (not raised) by
    :func:`validate_alignment` so that defective data can be inspected.
    """

    src: tuple[int, ...]
    tgt: tuple[int, ...]
    score: float | None = None
    method: str = ""

    def __post_init__(self):
        object.__setattr__(self, "src", tuple(int(i) for i in self.src))
        object.__setattr__(self, "tgt", tuple(int(i) for i in self.tgt))
        if not self.src and not self.tgt:
            raise ValueError("src/tgt: a bead may not be empty on both sides")
        if any(i < 0 for i in self.src + self.tgt):
            raise ValueError("src/tgt: indices must be non-negative")

    @property
    def bead_type(self) -> tuple[int, int]:
        return (len(self.src), len(self.tgt))

    @property
    def key(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Identity of the link itself, ignoring score/method."""
        return (self.src, self.tgt)


@dataclass(frozen=True)
class AlignmentSet:
    """An ordered set of beads over one document pair."""

    beads: tuple[Bead, ...]
    src_len: int
    tgt_len: int

    def __post_init__(self):
        object.__setattr__(self, "beads", tuple(self.beads))
        if self.src_len < 0 or self.tgt_len < 0:
            raise ValueError("src_len/tgt_len: must be non-negative")

    def __len__(self) -> int:
        return len(self.beads)


@dataclass(frozen=True)
class GoldAlignment:
    """Hand-made reference alignment; same shape as :class:`AlignmentSet`
    plus an optional annotator note per bead."""

    beads: tuple[Bead, ...]
    src_len: int
    tgt_len: int
    notes: tuple[str | None, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "beads", tuple(self.beads))
        notes = tuple(self.notes) if self.notes else (None,) * len(self.beads)
        object.__setattr__(self, "notes", notes)
        if len(self.notes) != len(self.beads):
            raise ValueError("notes: must have one entry per bead")
        if self.src_len < 0 or self.tgt_len < 0:
            raise ValueError("src_len/tgt_len: must be non-negative")

    def __len__(self) -> int:
        return len(self.beads)


def _check_block(indices: tuple[int, ...]) -> bool:
    """True if indices form a contiguous ascending run (or are empty)."""
    return all(b == a + 1 for a, b in zip(indices, indices[1:]))


def validate_alignment(aset: AlignmentSet | GoldAlignment) -> list[str]:
    """Check structural alignment invariants; return every violation found.

    An empty list means the alignment is well formed: each bead has a shape
    from :data:`BEAD_TYPES` with contiguous ascending indices in range, and
    across beads each side's indices are strictly increasing (monotone, no
    index used twice).
    """
    violations: list[str] = []
    for k, bead in enumerate(aset.beads):
        if bead.bead_type not in BEAD_TYPES:
            m, n = bead.bead_type
            violations.append(f"bead {k}: type {m}-{n} not in allowed set")
        for side, indices, limit in (
            ("src", bead.src, aset.src_len),
            ("tgt", bead.tgt, aset.tgt_len),
        ):
            if not _check_block(indices):
                violations.append(f"bead {k}: {side} indices not contiguous ascending")
            for i in indices:
                if i >= limit:
                    violations.append(
                        f"bead {k}: {side} index {i} out of range [0, {limit})"
                    )
    for side in ("src", "tgt"):
        prev_last = None
        for k, bead in enumerate(aset.beads):
            indices = getattr(bead, side)
            if not indices:
                continue
            if prev_last is not None:
                if indices[0] == prev_last:
                    violations.append(
                        f"bead {k}: {side} index {indices[0]} reused (index reuse)"
                    )
                elif indices[0] < prev_last:
                    violations.append(
                        f"bead {k}: {side} indices go backwards (monotonicity)"
                    )
            prev_last = indices[-1]
    return violations


def validate_gold(gold: GoldAlignment) -> list[str]:
    """Validate a reference alignment: structure plus full coverage of both
    sides (every sentence in exactly one bead)."""
    violations = validate_alignment(gold)
    for side, length in (("src", gold.src_len), ("tgt", gold.tgt_len)):
        seen = [i for bead in gold.beads for i in getattr(bead, side)]
        missing = sorted(set(range(length)) - set(seen))
        if missing:
            violations.append(f"{side}: indices {missing} not covered by any bead")
    return violations


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

_META_FIELDS = "id, pair_id, language, date, article_type"
META_FILENAME = "metadata.tsv"


def _iter_metadata(meta_path: Path, languages: tuple[str, ...]):
    if not meta_path.is_file():
        raise FormatError(f"{meta_path}: metadata file not found")
    for lineno, line in enumerate(
        meta_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise FormatError(
                f"{meta_path} line {lineno}: expected 5 tab-separated fields "
                f"({_META_FIELDS})"
            )
        doc_id, pair_id, language, date_s, article_type = fields
        if language not in languages:
            raise FormatError(
                f"{meta_path} line {lineno}: unknown language tag {language!r} "
                f"(expected one of {sorted(languages)})"
            )
        try:
            date = datetime.date.fromisoformat(date_s)
        except ValueError as exc:
            raise FormatError(
                f"{meta_path} line {lineno}: bad date {date_s!r} (expected ISO-8601)"
            ) from exc
        yield lineno, ArticleMeta(doc_id, pair_id, language, date, article_type)


def read_metadata(
    directory: str | Path, languages: tuple[str, ...] = ("zh", "en")
) -> list[ArticleMeta]:
    """Read just the ``metadata.tsv`` of a document or sentence directory."""
    return [m for _, m in _iter_metadata(Path(directory) / META_FILENAME, languages)]


def read_documents(
    directory: str | Path, languages: tuple[str, ...] = ("zh", "en")
) -> list[Document]:
    """Read a document directory: ``metadata.tsv`` plus one ``<id>.txt`` per
    record (one paragraph per line, blank lines skipped)."""
    directory = Path(directory)
    meta_path = directory / META_FILENAME
    docs = []
    for lineno, meta in _iter_metadata(meta_path, languages):
        text_path = directory / f"{meta.doc_id}.txt"
        if not text_path.is_file():
            raise FormatError(f"{meta_path} line {lineno}: missing text file {text_path}")
        paragraphs = tuple(
            p for p in text_path.read_text(encoding="utf-8").splitlines() if p.strip()
        )
        docs.append(Document(meta, paragraphs))
    return docs


def write_metadata(docs: list[Document], path: str | Path) -> None:
    lines = [
        "\t".join([m.doc_id, m.pair_id, m.language, m.date.isoformat(), m.article_type])
        for m in (doc.meta for doc in docs)
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_documents(docs: list[Document], directory: str | Path) -> None:
    """Write documents plus their metadata sidecar, preserving order."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for doc in docs:
        (directory / f"{doc.meta.doc_id}.txt").write_text(
            "\n".join(doc.paragraphs) + "\n", encoding="utf-8"
        )
    write_metadata(docs, directory / META_FILENAME)


def _format_score(score: float | None) -> str:
    return "NA" if score is None else repr(float(score))


def _parse_bead_line(path, lineno: int, line: str, n_min: int, n_max: int) -> list[str]:
    fields = line.split("\t")
    if not n_min <= len(fields) <= n_max:
        raise FormatError(
            f"{path} line {lineno}: expected {n_min}-{n_max} tab-separated fields "
            "(src_indices, tgt_indices, score, method[, note])"
        )
    return fields


def _parse_indices(path, lineno: int, text: str) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise FormatError(
            f"{path} line {lineno}: bad index list {text!r} "
            "(expected comma-joined integers)"
        ) from exc


def _parse_score(path, lineno: int, text: str) -> float | None:
    if text == "NA":
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise FormatError(
            f"{path} line {lineno}: bad score {text!r} (expected decimal or NA)"
        ) from exc


def _read_bead_file(path: str | Path, with_notes: bool):
    path = Path(path)
    src_len = tgt_len = None
    beads, notes = [], []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            m = re.search(r"src_len=(\d+)\s+tgt_len=(\d+)", line)
            if m:
                src_len, tgt_len = int(m.group(1)), int(m.group(2))
            continue
        fields = _parse_bead_line(path, lineno, line, 4, 5)
        src = _parse_indices(path, lineno, fields[0])
        tgt = _parse_indices(path, lineno, fields[1])
        score = _parse_score(path, lineno, fields[2])
        try:
            beads.append(Bead(src, tgt, score, fields[3]))
        except ValueError as exc:
            raise FormatError(f"{path} line {lineno}: {exc}") from exc
        notes.append(fields[4] if len(fields) > 4 and fields[4] else None)
    if src_len is None:
        src_len = max((i for b in beads for i in b.src), default=-1) + 1
        tgt_len = max((i for b in beads for i in b.tgt), default=-1) + 1
    return tuple(beads), src_len, tgt_len, tuple(notes)


def read_alignments(path: str | Path) -> AlignmentSet:
    """Read an alignment TSV (see module docstring for the format)."""
    beads, src_len, tgt_len, _ = _read_bead_file(path, with_notes=False)
    return AlignmentSet(beads, src_len, tgt_len)


def read_gold(path: str | Path) -> GoldAlignment:
    """Read a reference alignment TSV, keeping the optional note column."""
    beads, src_len, tgt_len, notes = _read_bead_file(path, with_notes=True)
    return GoldAlignment(beads, src_len, tgt_len, notes)


def _bead_lines(beads, src_len, tgt_len, notes=None):
    lines = [f"# src_len={src_len}\ttgt_len={tgt_len}"]
    for k, bead in enumerate(beads):
        fields = [
            ",".join(str(i) for i in bead.src),
            ",".join(str(i) for i in bead.tgt),
            _format_score(bead.score),
            bead.method,
        ]
        if notes is not None and notes[k]:
            fields.append(notes[k])
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def write_alignments(aset: AlignmentSet, path: str | Path) -> None:
    Path(path).write_text(
        _bead_lines(aset.beads, aset.src_len, aset.tgt_len), encoding="utf-8"
    )


def write_gold(gold: GoldAlignment, path: str | Path) -> None:
    Path(path).write_text(
        _bead_lines(gold.beads, gold.src_len, gold.tgt_len, gold.notes),
        encoding="utf-8",
    )


def read_sentences(path: str | Path, doc_id: str, language: str) -> SentenceList:
    """Read a ``paragraph_index<TAB>sentence`` file."""
    path = Path(path)
    sentences, para_idx = [], []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].isdigit():
            raise FormatError(
                f"{path} line {lineno}: expected 'paragraph_index<TAB>sentence'"
            )
        para_idx.append(int(fields[0]))
        sentences.append(fields[1])
    return SentenceList(doc_id, language, tuple(sentences), tuple(para_idx))


def write_sentences(sl: SentenceList, path: str | Path) -> None:
    lines = [f"{p}\t{s}" for p, s in zip(sl.paragraph_index, sl.sentences)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
