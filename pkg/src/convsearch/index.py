"""Inverted index over a jsonl collection with parameterized BM25 scoring.

The index is immutable after build and keeps a verbatim copy of every raw
document (the expansion stages need raw text back).
"""
import gzip
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .tokenization import tokenize


class CorpusError(Exception):
    """Raised for malformed input collections or index builds."""


class UnknownDocumentError(KeyError):
    """Raised when a doc_id is not present in the index."""

    def __init__(self, doc_id: str):
        super().__init__(doc_id)
        self.doc_id = doc_id

    def __str__(self) -> str:
        return f"unknown doc_id: {self.doc_id!r}"


@dataclass(frozen=True)
class Bm25Params:
    k1: float = 1.2
    b: float = 0.75

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


@dataclass(frozen=True)
class Document:
    doc_id: str
    text: str
    token_count: int = 0


@dataclass
class RankedList:
    """Ordered (id, score) pairs, scores non-increasing, ties by ascending id."""
    entries: list[tuple[str, float]]
    k: int

    def ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class InvertedIndex:
    postings: dict[str, list[tuple[str, int]]]  # term -> [(doc_id, tf)], sorted by doc_id
    doc_freq: dict[str, int]
    doc_count: int
    avg_doc_len: float
    doc_lengths: dict[str, int]
    raw_store: dict[str, str]
    _tf: dict[str, dict[str, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._tf:
            self._tf = {t: dict(plist) for t, plist in self.postings.items()}

    def term_frequency(self, term: str, doc_id: str) -> int:
        return self._tf.get(term, {}).get(doc_id, 0)

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term, 0)
        return math.log(1.0 + (self.doc_count - df + 0.5) / (df + 0.5))

    def df_fraction(self, term: str) -> float:
        return self.doc_freq.get(term, 0) / self.doc_count

    def save(self, path: str) -> None:
        payload = {
            "format": "convsearch-index-v1",
            "doc_lengths": self.doc_lengths,
            "raw_store": self.raw_store,
            "postings": {t: [[d, tf] for d, tf in plist] for t, plist in self.postings.items()},
        }
        with gzip.open(path, "wt", encoding="utf-8") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path: str) -> "InvertedIndex":
        try:
            with gzip.open(path, "rt", encoding="utf-8") as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CorpusError(f"cannot read index file {path}: {exc}") from exc
        if payload.get("format") != "convsearch-index-v1":
            raise CorpusError(f"{path} is not a convsearch index file")
        postings = {t: [(d, int(tf)) for d, tf in plist] for t, plist in payload["postings"].items()}
        doc_lengths = {d: int(n) for d, n in payload["doc_lengths"].items()}
        return cls(
            postings=postings,
            doc_freq={t: len(plist) for t, plist in postings.items()},
            doc_count=len(doc_lengths),
            avg_doc_len=sum(doc_lengths.values()) / len(doc_lengths),
            doc_lengths=doc_lengths,
            raw_store=payload["raw_store"],
        )


def read_jsonl(path: str) -> Iterator[Document]:
    """Parse a jsonl collection: one object per line with `id` and `contents`."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid json: {exc}") from exc
            if not isinstance(obj, dict) or "id" not in obj or "contents" not in obj:
                raise CorpusError(f"{path}:{lineno}: expected object with 'id' and 'contents'")
            yield Document(doc_id=str(obj["id"]), text=str(obj["contents"]))


def build_index(docs: Iterable[Document]) -> InvertedIndex:
    """Build an immutable inverted index; rejects duplicates and empty input."""
    postings: dict[str, list[tuple[str, int]]] = {}
    doc_lengths: dict[str, int] = {}
    raw_store: dict[str, str] = {}
    for doc in docs:
        if not doc.doc_id:
            raise CorpusError("empty doc_id")
        if doc.doc_id in doc_lengths:
            raise CorpusError(f"duplicate doc_id: {doc.doc_id!r}")
        tokens = tokenize(doc.text)
        doc_lengths[doc.doc_id] = len(tokens)
        raw_store[doc.doc_id] = doc.text
        counts: dict[str, int] = {}
        for t in tokens:
            counts[t] = counts.get(t, 0) + 1
        for t, tf in counts.items():
            postings.setdefault(t, []).append((doc.doc_id, tf))
    if not doc_lengths:
        raise CorpusError("cannot index an empty collection")
    for plist in postings.values():
        plist.sort(key=lambda entry: entry[0])
    return InvertedIndex(
        postings=postings,
        doc_freq={t: len(plist) for t, plist in postings.items()},
        doc_count=len(doc_lengths),
        avg_doc_len=sum(doc_lengths.values()) / len(doc_lengths),
        doc_lengths=doc_lengths,
        raw_store=raw_store,
    )


def bm25_score(index: InvertedIndex, params: Bm25Params, query_terms: list[str], doc_id: str) -> float:
    """Okapi BM25 with idf = ln(1 + (N - df + 0.5)/(df + 0.5)).

    Query terms are a bag: a repeated term contributes once per occurrence.
    """
    if doc_id not in index.doc_lengths:
        raise UnknownDocumentError(doc_id)
    doc_len = index.doc_lengths[doc_id]
    score = 0.0
    for term in query_terms:
        tf = index.term_frequency(term, doc_id)
        if tf == 0:
            continue
        norm = tf + params.k1 * (1.0 - params.b + params.b * doc_len / index.avg_doc_len)
        score += index.idf(term) * tf * (params.k1 + 1.0) / norm
    return score


def search(index: InvertedIndex, params: Bm25Params, query_terms: list[str], k: int) -> RankedList:
    """Top-k documents containing at least one query term, BM25-ranked.

    Ties broken by ascending doc_id; empty query yields an empty list.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scores: dict[str, float] = {}
    for term in query_terms:
        idf = index.idf(term)
        for doc_id, tf in index.postings.get(term, []):
            doc_len = index.doc_lengths[doc_id]
            norm = tf + params.k1 * (1.0 - params.b + params.b * doc_len / index.avg_doc_len)
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (params.k1 + 1.0) / norm
    ranked = sorted(scores.items(), key=lambda entry: (-entry[1], entry[0]))[:k]
    return RankedList(entries=ranked, k=k)
