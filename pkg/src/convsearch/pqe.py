"""Pseudo-relevance feedback expansion: when the utterance carries a pronoun,
pull the top TF-IDF terms out of the query's own top-ranked documents and
append them to the expanded query."""
from dataclasses import dataclass
from typing import Collection

from .hqe import PROVENANCE_PQE, ExpandedQuery
from .index import Bm25Params, InvertedIndex, search
from .tokenization import PRONOUNS, raw_tokens, tokenize


@dataclass(frozen=True)
class PqeConfig:
    top_docs: int = 5
    top_tokens: int = 3
    df_min: float = 0.001
    df_max: float = 0.2

    def __post_init__(self):
        if self.top_docs < 1 or self.top_tokens < 1:
            raise ValueError("top_docs and top_tokens must be >= 1")
        if not 0.0 <= self.df_min < self.df_max <= 1.0:
            raise ValueError(f"need 0 <= df_min < df_max <= 1, got [{self.df_min}, {self.df_max})")


def has_pronoun(utterance: str, pronouns: Collection[str] = PRONOUNS) -> bool:
    """True iff any raw token (stopwords kept) is on the pronoun list."""
    return any(t in pronouns for t in raw_tokens(utterance))


def tfidf_rank(index: InvertedIndex, feedback_docs: list[str], config: PqeConfig) -> list[str]:
    """Top feedback terms by TF-IDF.

    TF counts over the concatenation of the feedback documents; IDF comes from
    the full index. Candidates must sit inside the DF band [df_min, df_max)
    and must not be pure digits. Ties break lexicographically.
    """
    if not feedback_docs:
        raise ValueError("feedback_docs must be non-empty")
    counts: dict[str, int] = {}
    for text in feedback_docs:
        for t in tokenize(text):
            counts[t] = counts.get(t, 0) + 1
    scored = []
    for term, tf in counts.items():
        if term.isdigit():
            continue
        df = index.df_fraction(term)
        if not config.df_min <= df < config.df_max:
            continue
        scored.append((tf * index.idf(term), term))
    scored.sort(key=lambda entry: (-entry[0], entry[1]))
    return [term for _, term in scored[: config.top_tokens]]


def pqe_expand(
    index: InvertedIndex,
    params: Bm25Params,
    hqe_query: ExpandedQuery,
    raw_utterance: str,
    config: PqeConfig,
    pronouns: Collection[str] = PRONOUNS,
) -> ExpandedQuery:
    """Append pseudo-relevance feedback terms when the raw utterance has a pronoun.

    Zero-hit retrieval leaves the query unchanged (a turn never fails here).
    """
    if not has_pronoun(raw_utterance, pronouns):
        return hqe_query
    hits = search(index, params, hqe_query.terms_only(), config.top_docs)
    if not hits.entries:
        return hqe_query
    feedback = [index.raw_store[doc_id] for doc_id, _ in hits.entries]
    existing = set(hqe_query.terms_only())
    terms = list(hqe_query.terms)
    for term in tfidf_rank(index, feedback, config):
        if term not in existing:
            terms.append((term, PROVENANCE_PQE))
            existing.add(term)
    return ExpandedQuery(raw=hqe_query.raw, terms=terms)
