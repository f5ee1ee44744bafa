"""Historical query expansion: mine session/query keywords from past turns by
BM25 importance and expand the current utterance with them.

Session keywords always expand the query; query keywords from *preceding*
turns are added only when the current utterance looks ambiguous (its best
retrieval score falls below the threshold).
"""
from dataclasses import dataclass, field

from .index import Bm25Params, InvertedIndex, bm25_score, search
from .tokenization import tokenize

PROVENANCE_ORIGINAL = "original"
PROVENANCE_SESSION = "session"
PROVENANCE_QUERY = "query"
PROVENANCE_PQE = "pqe"


@dataclass(frozen=True)
class HqeConfig:
    q_s: float = 4.0      # session keyword cutoff
    q_t: float = 4.0      # query keyword cutoff
    theta: float = 10.0   # ambiguity threshold
    strict_cutoffs: bool = False  # True: importance must strictly exceed a cutoff


@dataclass
class SessionState:
    turns: list[str] = field(default_factory=list)
    session_keywords: dict[str, None] = field(default_factory=dict)  # insertion-ordered set
    query_keywords_by_turn: list[list[str]] = field(default_factory=list)


@dataclass
class ExpandedQuery:
    raw: str
    terms: list[tuple[str, str]]  # (term, provenance)

    def terms_only(self) -> list[str]:
        return [t for t, _ in self.terms]

    def to_debug_json(self) -> list[dict[str, str]]:
        return [{"term": t, "provenance": p} for t, p in self.terms]


def keyword_importance(index: InvertedIndex, params: Bm25Params, term: str) -> float:
    """BM25 score of the term against its single best document; 0 if unseen."""
    best = 0.0
    for doc_id, _tf in index.postings.get(term, []):
        score = bm25_score(index, params, [term], doc_id)
        if score > best:
            best = score
    return best


def extract_keywords(
    index: InvertedIndex, params: Bm25Params, utterance: str, config: HqeConfig
) -> tuple[list[str], list[str]]:
    """Split the utterance's tokens into session and query keyword lists.

    A token can land in both lists; order follows the utterance, duplicates
    collapse to the first occurrence.
    """
    session_kws: list[str] = []
    query_kws: list[str] = []
    seen: set[str] = set()
    for token in tokenize(utterance):
        if token in seen:
            continue
        seen.add(token)
        importance = keyword_importance(index, params, token)
        if _clears(importance, config.q_s, config.strict_cutoffs):
            session_kws.append(token)
        if _clears(importance, config.q_t, config.strict_cutoffs):
            query_kws.append(token)
    return session_kws, query_kws


def _clears(importance: float, cutoff: float, strict: bool) -> bool:
    return importance > cutoff if strict else importance >= cutoff


def ambiguity_score(index: InvertedIndex, params: Bm25Params, utterance: str) -> float:
    """Score of the utterance's top-1 retrieved document; 0 when nothing matches."""
    hits = search(index, params, tokenize(utterance), 1)
    return hits.entries[0][1] if hits.entries else 0.0


def hqe_expand(
    state: SessionState,
    utterance: str,
    index: InvertedIndex,
    params: Bm25Params,
    config: HqeConfig,
) -> tuple[ExpandedQuery, SessionState]:
    """Expand one turn and advance the session state.

    Expansion = all accumulated session keywords (current turn included),
    plus the union of query keywords from preceding turns when the utterance
    is ambiguous. Original tokens come first, in utterance order.
    """
    preceding_query_kws = [t for kws in state.query_keywords_by_turn for t in kws]
    session_kws, query_kws = extract_keywords(index, params, utterance, config)
    for t in session_kws:
        state.session_keywords.setdefault(t)

    originals: list[str] = []
    seen: set[str] = set()
    for t in tokenize(utterance):
        if t not in seen:
            originals.append(t)
            seen.add(t)

    terms = [(t, PROVENANCE_ORIGINAL) for t in originals]
    for t in state.session_keywords:
        if t not in seen:
            terms.append((t, PROVENANCE_SESSION))
            seen.add(t)
    if ambiguity_score(index, params, utterance) < config.theta:
        for t in preceding_query_kws:
            if t not in seen:
                terms.append((t, PROVENANCE_QUERY))
                seen.add(t)

    state.turns.append(utterance)
    state.query_keywords_by_turn.append(query_kws)
    return ExpandedQuery(raw=utterance, terms=terms), state
