"""Greedy three-phase line search over the HQE cutoffs on a training topic set.

Phase 1 tunes the session cutoff with the other knobs pinned high (expansion
via session keywords only), phase 2 tunes the ambiguity threshold, phase 3
tunes the query cutoff (or the session cutoff again via phase3="qs", honoring
the alternative reading of the tuning recipe).
"""
import math
from dataclasses import dataclass, replace
from typing import Callable

from .evaluation import evaluate_run
from .hqe import HqeConfig
from .index import InvertedIndex
from .pipeline import PipelineConfig, Topic, run_topics


class TuningError(Exception):
    pass


@dataclass(frozen=True)
class SearchSpace:
    q_s: list[float]
    q_t: list[float]
    theta: list[float]

    def __post_init__(self):
        for name, values in (("q_s", self.q_s), ("q_t", self.q_t), ("theta", self.theta)):
            if not values:
                raise ValueError(f"empty candidate list for {name}")


@dataclass
class TraceEntry:
    phase: int
    param: str
    value: float
    metric: str
    score: float

    def to_json(self) -> dict:
        return {
            "phase": self.phase,
            "param": self.param,
            "value": _jsonable(self.value),
            "metric": self.metric,
            "score": self.score,
        }


def _jsonable(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def line_search(objective: Callable[[float], float], candidates: list[float]) -> tuple[float, float]:
    """Argmax of the objective over the candidates; ties pick the smallest value."""
    if not candidates:
        raise TuningError("no candidates")
    best_value = None
    best_score = -math.inf
    for value in candidates:
        score = objective(value)
        if score > best_score or (score == best_score and (best_value is None or value < best_value)):
            best_value, best_score = value, score
    return best_value, best_score


def greedy_tune(
    train_topics: list[Topic],
    qrels: dict[str, dict[str, int]],
    space: SearchSpace,
    cfg: PipelineConfig,
    index: InvertedIndex,
    metric: str = "ndcg@3",
    phase3: str = "qt",
) -> tuple[HqeConfig, list[TraceEntry]]:
    """Returns the tuned HQE config and the full evaluation trace."""
    if not train_topics:
        raise TuningError("empty training topic set")
    if phase3 not in ("qt", "qs"):
        raise ValueError(f"phase3 must be 'qt' or 'qs', got {phase3!r}")
    trace: list[TraceEntry] = []

    def objective_for(phase: int, param: str, base: HqeConfig) -> Callable[[float], float]:
        def objective(value: float) -> float:
            hqe = replace(base, **{param: value})
            run, _ = run_topics(train_topics, replace(cfg, hqe=hqe), index)
            report = evaluate_run(run, qrels, metrics=(metric,))
            score = report.means[metric]
            trace.append(TraceEntry(phase=phase, param=param, value=value, metric=metric, score=score))
            return score

        return objective

    # phase 1: session cutoff alone, query expansion fully gated off
    base = HqeConfig(q_s=math.inf, q_t=math.inf, theta=math.inf, strict_cutoffs=cfg.hqe.strict_cutoffs)
    best_qs, _ = line_search(objective_for(1, "q_s", base), space.q_s)

    # phase 2: pin q_t one grid step above the tuned q_s, tune theta
    above = [v for v in space.q_t if v > best_qs]
    fixed_qt = min(above) if above else math.inf
    base = replace(base, q_s=best_qs, q_t=fixed_qt)
    best_theta, _ = line_search(objective_for(2, "theta", base), space.theta)
    base = replace(base, theta=best_theta)

    # phase 3
    if phase3 == "qt":
        best_qt, _ = line_search(objective_for(3, "q_t", base), space.q_t)
        tuned = replace(base, q_t=best_qt)
    else:
        best_qs, _ = line_search(objective_for(3, "q_s", base), space.q_s)
        tuned = replace(base, q_s=best_qs)
    return tuned, trace
