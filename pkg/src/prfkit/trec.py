"""Readers and writers for TREC-style collections, topics, qrels and runs.

All four formats are UTF-8 text. The document parser is streaming: it
never holds more than one <DOC> block in memory, so arbitrarily large
collections can be read.
"""

import codecs
import io
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CollectionError, InputError, ParseError


@dataclass(frozen=True)
class Document:
    """One corpus record: its unique identifier and raw body text."""

    docno: str
    body: str


@dataclass(frozen=True)
class Topic:
    """One query record: numeric id and raw title text."""

    number: int
    title: str


@dataclass
class Qrels:
    """Relevance judgments: (topic, docno) -> integer grade, 0 = non-relevant."""

    judgments: dict = field(default_factory=dict)

    def __post_init__(self):
        # Per-topic view so batch evaluation stays linear in the qrels size.
        by_topic = {}
        for (topic, docno), grade in self.judgments.items():
            by_topic.setdefault(topic, {})[docno] = grade
        self._by_topic = by_topic

    def grade(self, topic: int, docno: str) -> int:
        return self._by_topic.get(topic, {}).get(docno, 0)

    def topics(self):
        return sorted(self._by_topic)

    def relevant_docs(self, topic: int) -> set:
        return {d for d, g in self._by_topic.get(topic, {}).items() if g > 0}

    def __len__(self):
        return len(self.judgments)


@dataclass(frozen=True)
class RunEntry:
    """One ranked-retrieval output row."""

    topic: int
    docno: str
    rank: int
    score: float
    tag: str


# ---------------------------------------------------------------------------
# Stream helpers


def _text_chunks(stream, chunk_size):
    """Yield decoded text chunks from a str, bytes, Path, or file-like source.

    A plain str is treated as content; use a Path for file names.
    """
    if isinstance(stream, str):
        yield stream
        return
    if isinstance(stream, Path):
        with open(stream, "rb") as fh:
            yield from _text_chunks(fh, chunk_size)
        return
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(bytes(stream))
    probe = stream.read(0)
    if isinstance(probe, str):
        while True:
            chunk = stream.read(chunk_size)
            if not chunk:
                return
            yield chunk
    else:
        decoder = codecs.getincrementaldecoder("utf-8")()
        offset = 0
        while True:
            raw = stream.read(chunk_size)
            try:
                text = decoder.decode(raw, final=not raw)
            except UnicodeDecodeError as exc:
                raise InputError(
                    f"invalid UTF-8 at byte offset {offset + exc.start}"
                ) from exc
            if text:
                yield text
            if not raw:
                return
            offset += len(raw)


def _read_all(stream):
    return "".join(_text_chunks(stream, 1 << 16))


# ---------------------------------------------------------------------------
# Documents

_DOC_OPEN = "<DOC>"
_DOC_CLOSE = "</DOC>"
_DOCNO_RE = re.compile(r"<DOCNO>(.*?)</DOCNO>", re.DOTALL | re.IGNORECASE)
_TAG_RE = re.compile(r"</?[A-Za-z][^>]*>")


def parse_trec_docs(stream, chunk_size: int = 1 << 16):
    """Yield Documents from SGML-like <DOC> markup, one block at a time.

    Every block needs a <DOCNO>; the rest of the block's element content,
    <TEXT> and any other tag alike, is concatenated into the body in
    document order. Duplicate DOCNOs and unclosed blocks are errors.
    """
    chunks = _text_chunks(stream, chunk_size)
    buffer = ""
    line = 1  # line number of the buffer's first character
    exhausted = False
    close_from = 0  # resume point for the </DOC> search across chunk reads
    seen = set()
    while True:
        start = buffer.find(_DOC_OPEN)
        if start >= 0:
            end = buffer.find(_DOC_CLOSE, max(start, close_from))
            if end >= 0:
                block_line = line + buffer[:start].count("\n")
                block = buffer[start + len(_DOC_OPEN):end]
                cut = end + len(_DOC_CLOSE)
                line += buffer[:cut].count("\n")
                buffer = buffer[cut:]
                close_from = 0
                yield _parse_doc_block(block, block_line, seen)
                continue
            if exhausted:
                raise ParseError(
                    "unclosed <DOC> block",
                    line=line + buffer[:start].count("\n"),
                )
            close_from = max(start, len(buffer) - len(_DOC_CLOSE) + 1)
        elif exhausted:
            return
        else:
            # Nothing useful in the buffer; keep only a tail that could be
            # the start of a split "<DOC>" marker.
            keep = len(_DOC_OPEN) - 1
            if len(buffer) > keep:
                cut = len(buffer) - keep
                line += buffer[:cut].count("\n")
                buffer = buffer[cut:]
        chunk = next(chunks, None)
        if chunk is None:
            exhausted = True
        else:
            buffer += chunk


def _parse_doc_block(block, line, seen):
    match = _DOCNO_RE.search(block)
    if match is None:
        raise ParseError("missing <DOCNO> in <DOC> block", line=line)
    docno = match.group(1).strip()
    if not docno:
        raise ParseError("empty <DOCNO>", line=line)
    if docno in seen:
        raise CollectionError(f"duplicate DOCNO {docno!r}")
    seen.add(docno)
    rest = block[:match.start()] + block[match.end():]
    body = _TAG_RE.sub(" ", rest).strip()
    return Document(docno=docno, body=body)


# ---------------------------------------------------------------------------
# Topics

_TOP_RE = re.compile(r"<top>(.*?)</top>", re.DOTALL | re.IGNORECASE)


def _element_text(block, name):
    # Content runs to the closing tag when present, otherwise to the next
    # tag or the end of the block (classic TREC topics omit closing tags).
    pattern = rf"<{name}>(.*?)(?:</{name}>|(?=<)|$)"
    match = re.search(pattern, block, re.DOTALL | re.IGNORECASE)
    return match.group(1).strip() if match else None


def parse_topics(stream):
    """Parse <top> blocks into Topics, keeping only <num> and <title>."""
    text = _read_all(stream)
    topics = []
    numbers = set()
    for match in _TOP_RE.finditer(text):
        line = text[:match.start()].count("\n") + 1
        block = match.group(1)
        raw_num = _element_text(block, "num")
        if raw_num is None:
            raise ParseError("topic without <num>", line=line)
        raw_num = re.sub(r"(?i)^number\s*:\s*", "", raw_num)
        try:
            number = int(raw_num)
        except ValueError:
            raise ParseError(f"non-numeric topic number {raw_num!r}", line=line) from None
        title = _element_text(block, "title")
        if not title:
            raise ParseError(f"topic {number} has an empty <title>", line=line)
        if number in numbers:
            raise CollectionError(f"duplicate topic number {number}")
        numbers.add(number)
        topics.append(Topic(number=number, title=title))
    return topics


# ---------------------------------------------------------------------------
# Qrels


def parse_qrels(stream) -> Qrels:
    """Parse "topic iter docno grade" lines; the iter column is ignored."""
    judgments = {}
    for lineno, line in enumerate(_read_all(stream).splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 4:
            raise ParseError(f"expected 4 fields, found {len(parts)}", line=lineno)
        raw_topic, _iteration, docno, raw_grade = parts
        try:
            topic = int(raw_topic)
            grade = int(raw_grade)
        except ValueError:
            raise ParseError(f"non-numeric topic or grade in {line!r}", line=lineno) from None
        key = (topic, docno)
        if key in judgments and judgments[key] != grade:
            raise CollectionError(
                f"conflicting grades for topic {topic}, document {docno!r}"
            )
        judgments[key] = grade
    return Qrels(judgments)


# ---------------------------------------------------------------------------
# Runs


def write_run(entries, sink):
    """Write "topic Q0 docno rank score tag" lines, scores at 4 decimals.

    Within a topic, ranks must be contiguous from 1 and scores must not
    increase with rank. Callers that need exact write/read round trips
    should quantize scores to 4 decimals beforehand.
    """
    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="\n") as fh:
            write_run(entries, fh)
        return
    last = {}
    for entry in entries:
        prev = last.get(entry.topic)
        if prev is None:
            if entry.rank != 1:
                raise ValueError(f"topic {entry.topic} does not start at rank 1")
        else:
            prev_rank, prev_score = prev
            if entry.rank != prev_rank + 1:
                raise ValueError(
                    f"rank gap in topic {entry.topic}: {prev_rank} -> {entry.rank}"
                )
            if entry.score > prev_score:
                raise ValueError(
                    f"score increases with rank in topic {entry.topic} at rank {entry.rank}"
                )
        last[entry.topic] = (entry.rank, entry.score)
        sink.write(
            f"{entry.topic} Q0 {entry.docno} {entry.rank} {entry.score:.4f} {entry.tag}\n"
        )


def read_run(stream):
    """Parse run lines back into RunEntry records."""
    entries = []
    for lineno, line in enumerate(_read_all(stream).splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 6:
            raise ParseError(f"expected 6 fields, found {len(parts)}", line=lineno)
        raw_topic, _q0, docno, raw_rank, raw_score, tag = parts
        try:
            entries.append(
                RunEntry(
                    topic=int(raw_topic),
                    docno=docno,
                    rank=int(raw_rank),
                    score=float(raw_score),
                    tag=tag,
                )
            )
        except ValueError:
            raise ParseError(f"malformed run line {line!r}", line=lineno) from None
    return entries
