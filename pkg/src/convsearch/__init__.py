"""Conversational passage search: BM25 retrieval with historical and
pseudo-relevance query expansion, pluggable rewrite/rerank stages, TREC-style
evaluation, and greedy cutoff tuning."""

from .chunking import Passage, chunk_document
from .evaluation import MetricsReport, evaluate_run
from .hqe import ExpandedQuery, HqeConfig, SessionState, hqe_expand
from .index import Bm25Params, Document, InvertedIndex, RankedList, build_index, search
from .pipeline import PipelineConfig, Topic, TurnResult, run_topics, run_turn
from .pqe import PqeConfig, pqe_expand
from .tuner import SearchSpace, greedy_tune

__all__ = [
    "Bm25Params",
    "Document",
    "ExpandedQuery",
    "HqeConfig",
    "InvertedIndex",
    "MetricsReport",
    "Passage",
    "PipelineConfig",
    "PqeConfig",
    "RankedList",
    "SearchSpace",
    "SessionState",
    "Topic",
    "TurnResult",
    "build_index",
    "chunk_document",
    "evaluate_run",
    "greedy_tune",
    "hqe_expand",
    "pqe_expand",
    "run_topics",
    "run_turn",
    "search",
]
