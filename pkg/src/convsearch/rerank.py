"""Passage reranking stage: a lexical BM25 default plus an http plugin that
delegates ordering to an external model service."""
import httpx

from .chunking import Passage
from .index import Bm25Params, InvertedIndex, RankedList
from .tokenization import tokenize


class RerankServiceError(Exception):
    """The external rerank service failed (timeout, non-2xx, bad payload)."""


class LexicalReranker:
    """BM25 over passage-local tf/length with IDF from the full index.

    avg length is taken over the candidate passage set.
    """

    name = "lexical"

    def __init__(self, index: InvertedIndex, params: Bm25Params):
        self.index = index
        self.params = params

    def rerank(self, query: str, passages: list[Passage], k: int) -> RankedList:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not passages:
            return RankedList(entries=[], k=k)
        query_terms = tokenize(query)
        token_lists = [tokenize(p.text) for p in passages]
        avg_len = sum(len(toks) for toks in token_lists) / len(passages)
        scored = []
        for passage, tokens in zip(passages, token_lists):
            counts: dict[str, int] = {}
            for t in tokens:
                counts[t] = counts.get(t, 0) + 1
            score = 0.0
            for term in query_terms:
                tf = counts.get(term, 0)
                if tf == 0:
                    continue
                length_norm = 1.0 - self.params.b + self.params.b * len(tokens) / avg_len if avg_len > 0 else 1.0
                norm = tf + self.params.k1 * length_norm
                score += self.index.idf(term) * tf * (self.params.k1 + 1.0) / norm
            scored.append((passage.passage_id, score))
        scored.sort(key=lambda entry: (-entry[1], entry[0]))
        return RankedList(entries=scored[:k], k=k)


class HttpReranker:
    """POSTs {query, passages:[{id,text}]} and expects {order:[id,...]}."""

    name = "http"

    def __init__(self, url: str, timeout: float = 5.0):
        self.url = url
        self.timeout = timeout

    def rerank(self, query: str, passages: list[Passage], k: int) -> RankedList:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if not passages:
            return RankedList(entries=[], k=k)
        payload = {"query": query, "passages": [{"id": p.passage_id, "text": p.text} for p in passages]}
        try:
            resp = httpx.post(self.url, json=payload, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise RerankServiceError(f"rerank service unreachable: {exc}") from exc
        if resp.status_code // 100 != 2:
            raise RerankServiceError(f"rerank service returned {resp.status_code}")
        try:
            order = resp.json()["order"]
        except (ValueError, KeyError) as exc:
            raise RerankServiceError(f"bad rerank payload: {exc}") from exc
        known = {p.passage_id for p in passages}
        seen: set[str] = set()
        entries: list[tuple[str, float]] = []
        for pid in order:
            if pid not in known or pid in seen:
                raise RerankServiceError(f"rerank service returned unexpected or duplicate id {pid!r}")
            seen.add(pid)
            entries.append((pid, float(len(order) - len(entries))))
        return RankedList(entries=entries[:k], k=k)


def make_reranker(
    name: str,
    index: InvertedIndex,
    params: Bm25Params,
    url: str | None = None,
    timeout: float = 5.0,
):
    if name == "lexical":
        return LexicalReranker(index, params)
    if name == "http":
        if not url:
            raise ValueError("http reranker requires a url")
        return HttpReranker(url, timeout)
    raise ValueError(f"unknown reranker plugin: {name!r}")
