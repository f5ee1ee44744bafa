"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line. Run with `pytest tests/test_acceptance.py -v -s`.
"""
import json
import math
import random
import sys
import time
from dataclasses import replace

import pytest
from click.testing import CliRunner

from conftest import random_corpus
from convsearch.cli import cli
from convsearch.evaluation import (
    ap_at_k,
    evaluate_run,
    ndcg_at_k,
    precision_at_k,
    read_qrels,
    write_run,
)
from convsearch.hqe import HqeConfig, SessionState, ambiguity_score, hqe_expand
from convsearch.index import Bm25Params, Document, build_index, search
from convsearch.pipeline import PipelineConfig, load_topics, run_topics, run_turn
from convsearch.pqe import PqeConfig, has_pronoun, pqe_expand
from convsearch.tuner import SearchSpace, greedy_tune
from oracles import brute_force_search, ref_ap, ref_ndcg, ref_precision

P = Bm25Params(1.2, 0.75)


def report(name: str, ok: bool):
    print(f"{'PASS' if ok else 'FAIL'}: {name}", file=sys.__stdout__, flush=True)
    assert ok, name


def build(docs: dict[str, str]):
    return build_index(Document(doc_id=d, text=t) for d, t in docs.items())


def test_bm25_oracle_equivalence():
    """50 random corpora x 20 queries: search() == brute force, 1e-9, < 30 s."""
    start = time.monotonic()
    rng = random.Random(101)
    ok = True
    for _ in range(50):
        docs = random_corpus(rng, max_docs=200, vocab_size=50)
        index = build(docs)
        vocab = sorted({t for text in docs.values() for t in text.split()})
        params = Bm25Params(rng.choice([0.9, 1.2]), rng.choice([0.4, 0.75]))
        for _ in range(20):
            query = rng.choices(vocab, k=rng.randint(1, 5))
            k = rng.randint(1, 50)
            got = search(index, params, query, k)
            expected = brute_force_search(docs, params.k1, params.b, query, k)
            if got.ids() != [d for d, _ in expected]:
                ok = False
            for (_, s1), (_, s2) in zip(got.entries, expected):
                if abs(s1 - s2) > 1e-9:
                    ok = False
    elapsed = time.monotonic() - start
    report(f"BM25 oracle equivalence (elapsed {elapsed:.1f}s < 30s)", ok and elapsed < 30)


def test_metric_oracle_equivalence():
    """200 random run/qrels instances: ndcg/ap/p match the reference, 1e-9."""
    rng = random.Random(202)
    ok = True
    for _ in range(200):
        pids = [f"p{i}" for i in range(rng.randint(1, 10))]
        judged = {pid: rng.randint(0, 3) for pid in pids if rng.random() < 0.85}
        ranking = rng.sample(pids, k=rng.randint(0, len(pids)))
        for k in (1, 3, 5, 500):
            if abs(ndcg_at_k(ranking, judged, k) - ref_ndcg(ranking, judged, k)) > 1e-9:
                ok = False
            if abs(ap_at_k(ranking, judged, k) - ref_ap(ranking, judged, k)) > 1e-9:
                ok = False
            if abs(precision_at_k(ranking, judged, k) - ref_precision(ranking, judged, k)) > 1e-9:
                ok = False
    report("metric oracle equivalence", ok)


def _random_hqe_session(rng):
    docs = random_corpus(rng, max_docs=40, vocab_size=20)
    index = build(docs)
    vocab = sorted({t for text in docs.values() for t in text.split()})
    turns = [" ".join(rng.choices(vocab, k=rng.randint(1, 6))) for _ in range(rng.randint(2, 5))]
    cfg = HqeConfig(
        q_s=rng.choice([0.0, 0.5, 1.0, 2.0, 4.0, math.inf]),
        q_t=rng.choice([0.0, 0.5, 1.0, 2.0, 4.0, math.inf]),
        theta=rng.choice([-math.inf, 0.0, 1.0, 3.0, math.inf]),
    )
    return index, turns, cfg


def test_hqe_invariant_suite():
    """Five HQE invariants over >= 100 generated sessions each."""
    rng = random.Random(303)
    ok = True
    for _ in range(110):
        index, turns, cfg = _random_hqe_session(rng)
        lower = HqeConfig(
            q_s=cfg.q_s - 1.0 if math.isfinite(cfg.q_s) else 4.0, q_t=cfg.q_t, theta=cfg.theta
        )
        state, state_lo = SessionState(), SessionState()
        sizes = []
        replay_a, replay_b = [], []
        for turn_no, u in enumerate(turns):
            amb = ambiguity_score(index, P, u)
            expanded, state = hqe_expand(state, u, index, P, cfg)
            sizes.append(len(state.session_keywords))
            replay_a.append(expanded.terms)
            _, state_lo = hqe_expand(state_lo, u, index, P, lower)
            # cutoff monotonicity: lower q_s -> superset session keyword set
            if not set(state.session_keywords) <= set(state_lo.session_keywords):
                ok = False
            # theta gating
            if amb >= cfg.theta and any(p == "query" for _, p in expanded.terms):
                ok = False
            # turn-1 neutrality
            if turn_no == 0 and any(p == "query" for _, p in expanded.terms):
                ok = False
        # session monotonicity
        if sizes != sorted(sizes):
            ok = False
        # replay determinism
        state = SessionState()
        for u in turns:
            expanded, state = hqe_expand(state, u, index, P, cfg)
            replay_b.append(expanded.terms)
        if replay_a != replay_b:
            ok = False
    report("HQE invariant suite (110 generated sessions)", ok)


def test_pqe_invariant_suite():
    """Pronoun gate, top_tokens bound, DF band, digit exclusion."""
    from convsearch.hqe import ExpandedQuery

    rng = random.Random(404)
    ok = True
    for _ in range(120):
        docs = random_corpus(rng, max_docs=60, vocab_size=25)
        # sprinkle digit tokens so the digit filter has something to reject
        for doc_id in list(docs)[:5]:
            docs[doc_id] += " 2021 2019"
        index = build(docs)
        vocab = sorted({t for text in docs.values() for t in text.split()})
        terms = list(dict.fromkeys(rng.choices(vocab, k=rng.randint(1, 5))))
        pronoun = rng.random() < 0.5
        utterance = " ".join(terms) + (" it" if pronoun else "")
        cfg = PqeConfig(
            top_docs=rng.randint(1, 6),
            top_tokens=rng.randint(1, 4),
            df_min=0.001,
            df_max=rng.choice([0.2, 0.5, 0.9]),
        )
        query = ExpandedQuery(raw=utterance, terms=[(t, "original") for t in terms])
        out = pqe_expand(index, P, query, utterance, cfg)
        if has_pronoun(utterance) != pronoun:
            ok = False
        if not pronoun:
            if out != query:  # gate soundness
                ok = False
            continue
        added = [t for t, p in out.terms if p == "pqe"]
        if len(added) > cfg.top_tokens:
            ok = False
        for t in added:
            if not (cfg.df_min <= index.df_fraction(t) < cfg.df_max):
                ok = False
            if t.isdigit():
                ok = False
    report("PQE invariant suite (120 generated cases)", ok)


def test_end_to_end_golden_run(fixtures_dir, corpus_index, tmp_path):
    """Fixture corpus + 5-turn topic reproduce the committed golden run byte-for-byte."""
    cfg = PipelineConfig.from_file(str(fixtures_dir / "config.json"))
    topics = load_topics(str(fixtures_dir / "topics.json"))
    outputs = []
    for name in ("a.txt", "b.txt"):
        entries, _ = run_topics(topics, cfg, corpus_index)
        out = str(tmp_path / name)
        write_run(entries, out)
        outputs.append(open(out, "rb").read())
    golden = open(fixtures_dir / "golden_run.txt", "rb").read()
    report("end-to-end golden run byte-identical", outputs[0] == outputs[1] == golden)


def test_tuner_trace_and_argmax(fixtures_dir, corpus_index):
    """Grid {0,2,4,8,16,inf}: < 60 s, complete trace, per-phase argmax holds."""
    start = time.monotonic()
    cfg = PipelineConfig.from_file(str(fixtures_dir / "config.json"))
    topics = load_topics(str(fixtures_dir / "topics.json"))
    qrels = read_qrels(str(fixtures_dir / "qrels.txt"))
    grid = [0.0, 2.0, 4.0, 8.0, 16.0, math.inf]
    space = SearchSpace(q_s=grid, q_t=grid, theta=grid)
    tuned, trace = greedy_tune(topics, qrels, space, cfg, corpus_index)
    elapsed = time.monotonic() - start
    ok = len(trace) == 3 * len(grid)
    by_phase = {1: [], 2: [], 3: []}
    for entry in trace:
        by_phase[entry.phase].append(entry)

    def argmax(entries):
        best = max(e.score for e in entries)
        return min(e.value for e in entries if e.score == best)

    ok = ok and tuned.q_s == argmax(by_phase[1])
    ok = ok and tuned.theta == argmax(by_phase[2])
    ok = ok and tuned.q_t == argmax(by_phase[3])
    ok = ok and elapsed < 60
    report(f"tuner trace completeness + per-phase argmax (elapsed {elapsed:.1f}s < 60s)", ok)


def _planted_corpus():
    """500 docs: 30 planted docs share vocabulary only with turn 1; decoys
    carry the generic words of the anaphoric follow-up turns."""
    rng = random.Random(505)
    generic = ["deadly", "spread", "treatments", "common", "symptoms", "causes", "risk"]
    docs = {}
    for i in range(470):
        words = rng.choices(generic, k=rng.randint(2, 4)) + [f"noise{i}x{j}" for j in range(5)]
        rng.shuffle(words)
        docs[f"decoy{i:03d}"] = " ".join(words)
    planted_by_turn = {}
    filler = ["orchard", "grove", "fruit", "rot", "fungus", "bark"]
    n = 0
    for turn in (2, 3, 4):
        ids = []
        for _ in range(10):
            words = ["quandong", "blight"] + rng.choices(filler, k=4)
            rng.shuffle(words)
            doc_id = f"planted{n:02d}"
            docs[doc_id] = " ".join(words)
            ids.append(doc_id)
            n += 1
        planted_by_turn[turn] = ids
    return docs, planted_by_turn


def test_planted_relevance_recall():
    """HQE strictly improves recall@100 on anaphoric turns whose relevant docs
    only share vocabulary with turn 1."""
    docs, planted_by_turn = _planted_corpus()
    index = build(docs)
    turns = [
        "what is quandong blight",
        "how deadly is it",
        "does it spread quickly",
        "what are common treatments for it",
    ]
    expanded_cfg = PipelineConfig(
        hqe=HqeConfig(q_s=2.0, q_t=math.inf, theta=-math.inf),
        pqe_enabled=False,
        first_stage_depth=100,
        rerank_depth=100,
        output_k=100,
    )
    disabled_cfg = replace(expanded_cfg, hqe=HqeConfig(q_s=math.inf, q_t=math.inf, theta=-math.inf))

    def recall_sum(cfg):
        state = SessionState()
        total = 0.0
        for turn_no, utterance in enumerate(turns, start=1):
            result, state = run_turn(state, utterance, cfg, index)
            if turn_no in planted_by_turn:
                retrieved = set(result.diagnostics["first_stage_doc_ids"])
                relevant = set(planted_by_turn[turn_no])
                total += len(retrieved & relevant) / len(relevant)
        return total

    with_hqe = recall_sum(expanded_cfg)
    without = recall_sum(disabled_cfg)
    report(f"planted-relevance recall@100 (HQE {with_hqe:.2f} > baseline {without:.2f})", with_hqe > without)


def test_cli_contract_round_trip(fixtures_dir, tmp_path):
    """index -> run -> eval exits 0 and reproduces the fixture metrics exactly."""
    runner = CliRunner()
    idx = str(tmp_path / "c.idx")
    run_file = str(tmp_path / "run.txt")
    ok = runner.invoke(cli, ["index", str(fixtures_dir / "corpus.jsonl"), "-o", idx]).exit_code == 0
    ok = ok and runner.invoke(cli, [
        "run", "--index", idx, "--topics", str(fixtures_dir / "topics.json"),
        "--config", str(fixtures_dir / "config.json"), "-o", run_file,
    ]).exit_code == 0
    result = runner.invoke(cli, ["eval", "--run", run_file, "--qrels", str(fixtures_dir / "qrels.txt"), "--json"])
    ok = ok and result.exit_code == 0
    golden = json.load(open(fixtures_dir / "golden_metrics.json"))
    ok = ok and json.loads(result.output) == golden
    report("CLI index->run->eval round trip reproduces fixture metrics", ok)
