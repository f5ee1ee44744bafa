#!/usr/bin/env python3
"""Regenerates the committed golden files from the naive reference
implementations in tests/oracles.py (never from the engine itself):

  tests/fixtures/golden_run.txt        end-to-end pipeline run on the fixtures
  tests/fixtures/golden_metrics.json   reference metric report for that run
  tests/fixtures/toy.jsonl             5-doc toy corpus
  tests/fixtures/toy_postings.json     hand-count postings table for it

Run from the repo root: python3 scripts/make_golden.py
"""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from oracles import (  # noqa: E402
    brute_force_search,
    oracle_pqe_terms,
    oracle_session_replay,
    ref_ap,
    ref_ndcg,
    ref_precision,
)

from convsearch.tokenization import token_spans, tokenize  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"

TOY_CORPUS = [
    ("t1", "cancer cells grow and spread"),
    ("t2", "breast cancer screening saves lives"),
    ("t3", "lobular carcinoma in situ of the breast"),
    ("t4", "carcinoma treatment options and therapy"),
    ("t5", "weather patterns spread across the plains"),
]


def naive_chunks(doc_id, text, window, stride):
    spans = token_spans(text)
    if not spans:
        return []
    out = []
    start, idx = 0, 0
    while True:
        piece = spans[start : start + window]
        out.append((f"{doc_id}#{idx}", text[piece[0][1] : piece[-1][2]]))
        if start + window >= len(spans):
            break
        start += stride
        idx += 1
    return out


def naive_lexical_rerank(docs_full, query, passages, k1, b, k):
    """passages: list of (passage_id, text). IDF from the full collection."""
    import math

    n = len(docs_full)
    df = {}
    for text in docs_full.values():
        for t in set(tokenize(text)):
            df[t] = df.get(t, 0) + 1
    query_terms = tokenize(query)
    token_lists = [tokenize(text) for _, text in passages]
    avg_len = sum(len(toks) for toks in token_lists) / len(passages)
    scored = []
    for (pid, _text), toks in zip(passages, token_lists):
        counts = {}
        for t in toks:
            counts[t] = counts.get(t, 0) + 1
        score = 0.0
        for term in query_terms:
            tf = counts.get(term, 0)
            if tf == 0:
                continue
            idf = math.log(1.0 + (n - df.get(term, 0) + 0.5) / (df.get(term, 0) + 0.5))
            length_norm = 1.0 - b + b * len(toks) / avg_len if avg_len > 0 else 1.0
            norm = tf + k1 * length_norm
            score += idf * tf * (k1 + 1.0) / norm
        scored.append((pid, score))
    scored.sort(key=lambda entry: (-entry[1], entry[0]))
    return scored[:k]


def main():
    docs = {}
    with open(FIXTURES / "corpus.jsonl", encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            docs[obj["id"]] = obj["contents"]
    with open(FIXTURES / "topics.json", encoding="utf-8") as fh:
        topic = json.load(fh)[0]
    with open(FIXTURES / "config.json", encoding="utf-8") as fh:
        cfg = json.load(fh)
    k1, b = cfg["bm25"]["k1"], cfg["bm25"]["b"]
    hqe, pqe = cfg["hqe"], cfg["pqe"]

    utterances = [t["raw_utterance"] for t in topic["turns"]]
    hqe_expansions = oracle_session_replay(
        docs, k1, b, utterances, hqe["q_s"], hqe["q_t"], hqe["theta"]
    )

    entries = []
    for turn, terms in zip(topic["turns"], hqe_expansions):
        term_list = [t for t, _ in terms]
        pqe_terms = oracle_pqe_terms(
            docs, k1, b, term_list, turn["raw_utterance"],
            pqe["top_docs"], pqe["top_tokens"], pqe["df_min"], pqe["df_max"],
        )
        full_terms = term_list + [t for t in pqe_terms if t not in term_list]
        first = brute_force_search(docs, k1, b, full_terms, cfg["first_stage_depth"])
        passages = []
        for doc_id, _score in first:
            passages.extend(naive_chunks(doc_id, docs[doc_id], cfg["chunk_window"], cfg["chunk_stride"]))
        rewritten = turn["raw_utterance"]  # passthrough rewriter
        ranked = naive_lexical_rerank(docs, rewritten, passages, k1, b, cfg["rerank_depth"])
        ranked = ranked[: cfg["output_k"]]
        for rank, (pid, score) in enumerate(ranked, start=1):
            entries.append((turn["turn_id"], "Q0", pid, rank, score, cfg["run_tag"]))

    with open(FIXTURES / "golden_run.txt", "w", encoding="utf-8", newline="\n") as fh:
        for qid, q0, pid, rank, score, tag in entries:
            fh.write(f"{qid} {q0} {pid} {rank} {score:.6f} {tag}\n")

    # reference metric report over the golden run
    qrels = {}
    with open(FIXTURES / "qrels.txt", encoding="utf-8") as fh:
        for line in fh:
            qid, _, pid, grade = line.split()
            qrels.setdefault(qid, {})[pid] = int(grade)
    rankings = {}
    for qid, _q0, pid, _rank, _score, _tag in entries:
        rankings.setdefault(qid, []).append(pid)
    per_query = {}
    for qid, ranking in rankings.items():
        if qid not in qrels:
            continue
        judged = qrels[qid]
        per_query[qid] = {
            "ndcg@3": ref_ndcg(ranking, judged, 3),
            "ndcg@5": ref_ndcg(ranking, judged, 5),
            "ndcg@500": ref_ndcg(ranking, judged, 500),
            "ap@500": ref_ap(ranking, judged, 500),
            "p@5": ref_precision(ranking, judged, 5),
        }
    n = len(per_query)
    means = {
        m: sum(vals[m] for vals in per_query.values()) / n
        for m in ("ndcg@3", "ndcg@5", "ndcg@500", "ap@500", "p@5")
    }
    report = {
        "per_query": per_query,
        "means": means,
        "evaluated": n,
        "skipped": [qid for qid in rankings if qid not in qrels],
    }
    with open(FIXTURES / "golden_metrics.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)

    # toy corpus + hand-count postings golden
    with open(FIXTURES / "toy.jsonl", "w", encoding="utf-8") as fh:
        for doc_id, text in TOY_CORPUS:
            fh.write(json.dumps({"id": doc_id, "contents": text}) + "\n")
    postings = {}
    for doc_id, text in TOY_CORPUS:
        counts = {}
        for t in tokenize(text):
            counts[t] = counts.get(t, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append([doc_id, tf])
    for plist in postings.values():
        plist.sort(key=lambda entry: entry[0])
    with open(FIXTURES / "toy_postings.json", "w", encoding="utf-8") as fh:
        json.dump(postings, fh, indent=2, sort_keys=True)

    print(f"wrote golden files for {len(entries)} run entries")


if __name__ == "__main__":
    main()
