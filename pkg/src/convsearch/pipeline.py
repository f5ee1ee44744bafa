"""Per-turn orchestration: HQE -> PQE -> first-stage BM25 -> chunk -> rewrite
-> rerank -> top-K passages, plus batch execution over topic files."""
import json
import time
from dataclasses import dataclass, field

from .chunking import Passage, chunk_document
from .hqe import ExpandedQuery, HqeConfig, SessionState, hqe_expand
from .index import Bm25Params, InvertedIndex, RankedList, search
from .pqe import PqeConfig, pqe_expand
from .rerank import RerankServiceError, make_reranker
from .rewrite import RewriteServiceError, make_rewriter
from .tokenization import tokenize


class TopicError(Exception):
    """Raised for malformed topic files or duplicate ids."""


@dataclass(frozen=True)
class PipelineConfig:
    bm25: Bm25Params = field(default_factory=Bm25Params)
    hqe: HqeConfig = field(default_factory=HqeConfig)
    pqe: PqeConfig = field(default_factory=PqeConfig)
    pqe_enabled: bool = True
    first_stage_depth: int = 100
    rerank_depth: int = 500
    output_k: int = 500
    chunk_window: int = 128
    chunk_stride: int = 64
    rewriter: str = "passthrough"
    reranker: str = "lexical"
    rewrite_url: str | None = None
    rerank_url: str | None = None
    http_timeout: float = 5.0
    run_tag: str = "convsearch"

    def __post_init__(self):
        if self.output_k > self.rerank_depth:
            raise ValueError("output_k must be <= rerank_depth")
        if min(self.first_stage_depth, self.rerank_depth, self.output_k) < 1:
            raise ValueError("depths must be >= 1")

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineConfig":
        raw = dict(raw)
        kwargs = {}
        if "bm25" in raw:
            kwargs["bm25"] = Bm25Params(**raw.pop("bm25"))
        if "hqe" in raw:
            kwargs["hqe"] = HqeConfig(**_parse_inf(raw.pop("hqe")))
        if "pqe" in raw:
            kwargs["pqe"] = PqeConfig(**raw.pop("pqe"))
        kwargs.update(raw)
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str) -> "PipelineConfig":
        if path.endswith(".toml"):
            try:
                import tomllib
            except ModuleNotFoundError:  # python < 3.11
                import tomli as tomllib

            with open(path, "rb") as fh:
                return cls.from_dict(tomllib.load(fh))
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _parse_inf(raw: dict) -> dict:
    # config files spell infinities as "inf" / "-inf" strings
    return {k: float(v) if isinstance(v, str) else v for k, v in raw.items()}


@dataclass
class TurnResult:
    turn_id: str
    expanded: ExpandedQuery
    rewritten: str
    ranking: RankedList
    passages: dict[str, Passage]  # ranked passage ids only
    diagnostics: dict


@dataclass(frozen=True)
class Topic:
    topic_id: str
    turns: list[tuple[str, str]]  # (turn_id, raw_utterance)


def load_topics(path: str) -> list[Topic]:
    """Topic file: [{topic_id, turns: [{turn_id, raw_utterance}]}]."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise TopicError(f"{path}: invalid json: {exc}") from exc
    topics = []
    try:
        for t in raw:
            topics.append(
                Topic(
                    topic_id=str(t["topic_id"]),
                    turns=[(str(u["turn_id"]), str(u["raw_utterance"])) for u in t["turns"]],
                )
            )
    except (TypeError, KeyError) as exc:
        raise TopicError(f"{path}: malformed topic structure: {exc}") from exc
    return topics


def _first_stage_ranklist(first: RankedList, passages: list[Passage], k: int) -> RankedList:
    """Fallback ordering: passages inherit their document's first-stage score."""
    doc_scores = dict(first.entries)
    entries = [(p.passage_id, doc_scores[p.doc_id]) for p in passages]
    entries.sort(key=lambda entry: (-entry[1], entry[0]))
    return RankedList(entries=entries[:k], k=k)


def run_turn(
    state: SessionState,
    utterance: str,
    cfg: PipelineConfig,
    index: InvertedIndex,
    turn_id: str = "",
    rewriter=None,
    reranker=None,
) -> tuple[TurnResult, SessionState]:
    """Execute one conversation turn; the session state advances exactly once."""
    rewriter = rewriter or make_rewriter(cfg.rewriter, cfg.rewrite_url, cfg.http_timeout)
    reranker = reranker or make_reranker(cfg.reranker, index, cfg.bm25, cfg.rerank_url, cfg.http_timeout)
    timings: dict[str, float] = {}
    fallbacks: list[str] = []

    t0 = time.perf_counter()
    expanded, state = hqe_expand(state, utterance, index, cfg.bm25, cfg.hqe)
    timings["hqe"] = time.perf_counter() - t0

    if not tokenize(utterance):
        result = TurnResult(
            turn_id=turn_id,
            expanded=expanded,
            rewritten=utterance,
            ranking=RankedList(entries=[], k=cfg.output_k),
            passages={},
            diagnostics={"timings": timings, "fallbacks": [], "degraded": False, "first_stage_doc_ids": []},
        )
        return result, state

    if cfg.pqe_enabled:
        t0 = time.perf_counter()
        expanded = pqe_expand(index, cfg.bm25, expanded, utterance, cfg.pqe)
        timings["pqe"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    first = search(index, cfg.bm25, expanded.terms_only(), cfg.first_stage_depth)
    timings["first_stage"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    passages: list[Passage] = []
    for doc_id, _score in first.entries:
        passages.extend(chunk_document(doc_id, index.raw_store[doc_id], cfg.chunk_window, cfg.chunk_stride))
    timings["chunk"] = time.perf_counter() - t0

    history = state.turns[:-1]
    t0 = time.perf_counter()
    try:
        rewritten = rewriter.rewrite(history, utterance)
    except RewriteServiceError:
        rewritten = utterance
        fallbacks.append("rewrite")
    timings["rewrite"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        ranking = reranker.rerank(rewritten, passages, cfg.rerank_depth)
    except RerankServiceError:
        ranking = _first_stage_ranklist(first, passages, cfg.rerank_depth)
        fallbacks.append("rerank")
    timings["rerank"] = time.perf_counter() - t0

    ranking = RankedList(entries=ranking.entries[: cfg.output_k], k=cfg.output_k)
    by_id = {p.passage_id: p for p in passages}
    result = TurnResult(
        turn_id=turn_id,
        expanded=expanded,
        rewritten=rewritten,
        ranking=ranking,
        passages={pid: by_id[pid] for pid, _ in ranking.entries},
        diagnostics={
            "timings": timings,
            "fallbacks": fallbacks,
            "degraded": bool(fallbacks),
            "first_stage_doc_ids": first.ids(),
        },
    )
    return result, state


def run_topics(
    topics: list[Topic], cfg: PipelineConfig, index: InvertedIndex
) -> tuple[list[tuple], list[TurnResult]]:
    """Run every topic with a fresh session; returns TREC run entries + results.

    Run entries are (query_id, "Q0", passage_id, rank, score, tag) ordered by
    topic, turn, rank.
    """
    seen_turn_ids: set[str] = set()
    seen_topic_ids: set[str] = set()
    for topic in topics:
        if topic.topic_id in seen_topic_ids:
            raise TopicError(f"duplicate topic_id: {topic.topic_id!r}")
        seen_topic_ids.add(topic.topic_id)
        for turn_id, _ in topic.turns:
            if turn_id in seen_turn_ids:
                raise TopicError(f"duplicate turn_id: {turn_id!r}")
            seen_turn_ids.add(turn_id)

    rewriter = make_rewriter(cfg.rewriter, cfg.rewrite_url, cfg.http_timeout)
    reranker = make_reranker(cfg.reranker, index, cfg.bm25, cfg.rerank_url, cfg.http_timeout)
    entries: list[tuple] = []
    results: list[TurnResult] = []
    for topic in topics:
        state = SessionState()
        for turn_id, utterance in topic.turns:
            result, state = run_turn(
                state, utterance, cfg, index, turn_id=turn_id, rewriter=rewriter, reranker=reranker
            )
            results.append(result)
            for rank, (pid, score) in enumerate(result.ranking.entries, start=1):
                entries.append((turn_id, "Q0", pid, rank, score, cfg.run_tag))
    return entries, results
