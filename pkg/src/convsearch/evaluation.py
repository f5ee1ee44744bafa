"""TREC run/qrels parsing and the metric suite: NDCG@k, AP@k, P@k.

DCG uses the trec_eval-compatible gain 2^grade - 1 with a log2(rank+1)
discount. Unjudged retrieved passages count as grade 0.
"""
import math
from dataclasses import dataclass, field

RunEntry = tuple[str, str, str, int, float, str]

DEFAULT_METRICS = ("ndcg@3", "ndcg@5", "ndcg@500", "ap@500", "p@5")


class RunFormatError(Exception):
    """Raised for malformed run or qrels files."""


def write_run(entries: list[RunEntry], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for qid, q0, pid, rank, score, tag in entries:
            fh.write(f"{qid} {q0} {pid} {rank} {score:.6f} {tag}\n")


def read_run(path: str) -> list[RunEntry]:
    entries: list[RunEntry] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise RunFormatError(f"{path}:{lineno}: expected 6 columns, got {len(parts)}")
            try:
                entries.append((parts[0], parts[1], parts[2], int(parts[3]), float(parts[4]), parts[5]))
            except ValueError as exc:
                raise RunFormatError(f"{path}:{lineno}: {exc}") from exc
    return entries


def read_qrels(path: str) -> dict[str, dict[str, int]]:
    """4-column qrels: qid 0 pid grade."""
    qrels: dict[str, dict[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise RunFormatError(f"{path}:{lineno}: expected 4 columns, got {len(parts)}")
            try:
                grade = int(parts[3])
            except ValueError as exc:
                raise RunFormatError(f"{path}:{lineno}: {exc}") from exc
            if grade < 0:
                raise RunFormatError(f"{path}:{lineno}: negative grade")
            qrels.setdefault(parts[0], {})[parts[2]] = grade
    return qrels


def run_rankings(entries: list[RunEntry]) -> dict[str, list[str]]:
    """Group run entries into per-query ranked id lists, validating order."""
    grouped: dict[str, list[tuple[int, float, str]]] = {}
    for qid, _q0, pid, rank, score, _tag in entries:
        grouped.setdefault(qid, []).append((rank, score, pid))
    rankings: dict[str, list[str]] = {}
    for qid, rows in grouped.items():
        rows.sort(key=lambda r: r[0])
        pids = [pid for _, _, pid in rows]
        if [r[0] for r in rows] != list(range(1, len(rows) + 1)):
            raise RunFormatError(f"query {qid}: ranks not contiguous from 1")
        if len(set(pids)) != len(pids):
            raise RunFormatError(f"query {qid}: duplicate passage ids")
        rankings[qid] = pids
    return rankings


def ndcg_at_k(ranking: list[str], judged: dict[str, int], k: int) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    ideal_gains = sorted(judged.values(), reverse=True)[:k]
    idcg = sum((2**g - 1) / math.log2(i + 2) for i, g in enumerate(ideal_gains))
    if idcg == 0:
        return 0.0
    dcg = sum(
        (2 ** judged.get(pid, 0) - 1) / math.log2(i + 2) for i, pid in enumerate(ranking[:k])
    )
    return dcg / idcg


def ap_at_k(ranking: list[str], judged: dict[str, int], k: int, rel_threshold: int = 1) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    total_relevant = sum(1 for g in judged.values() if g >= rel_threshold)
    if total_relevant == 0:
        return 0.0
    hits = 0
    precision_sum = 0.0
    for i, pid in enumerate(ranking[:k], start=1):
        if judged.get(pid, 0) >= rel_threshold:
            hits += 1
            precision_sum += hits / i
    return precision_sum / total_relevant


def precision_at_k(ranking: list[str], judged: dict[str, int], k: int, rel_threshold: int = 1) -> float:
    if k < 1:
        raise ValueError("k must be >= 1")
    hits = sum(1 for pid in ranking[:k] if judged.get(pid, 0) >= rel_threshold)
    return hits / k


@dataclass
class MetricsReport:
    per_query: dict[str, dict[str, float]]
    means: dict[str, float]
    evaluated: int
    skipped: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "per_query": self.per_query,
            "means": self.means,
            "evaluated": self.evaluated,
            "skipped": self.skipped,
        }

    def to_table(self) -> str:
        metrics = list(self.means)
        width = max([len(q) for q in self.per_query] + [len("mean"), 8])
        lines = [" ".join(["query".ljust(width)] + [m.rjust(9) for m in metrics])]
        for qid in sorted(self.per_query):
            vals = self.per_query[qid]
            lines.append(" ".join([qid.ljust(width)] + [f"{vals[m]:9.4f}" for m in metrics]))
        lines.append(" ".join(["mean".ljust(width)] + [f"{self.means[m]:9.4f}" for m in metrics]))
        if self.skipped:
            lines.append(f"skipped (not in qrels): {', '.join(sorted(self.skipped))}")
        return "\n".join(lines)


def _compute_metric(metric: str, ranking: list[str], judged: dict[str, int], rel_threshold: int) -> float:
    name, _, depth = metric.partition("@")
    k = int(depth)
    if name == "ndcg":
        return ndcg_at_k(ranking, judged, k)
    if name == "ap":
        return ap_at_k(ranking, judged, k, rel_threshold)
    if name == "p":
        return precision_at_k(ranking, judged, k, rel_threshold)
    raise ValueError(f"unknown metric: {metric!r}")


def evaluate_run(
    run: list[RunEntry],
    qrels: dict[str, dict[str, int]],
    metrics: tuple[str, ...] = DEFAULT_METRICS,
    rel_threshold: int = 1,
) -> MetricsReport:
    """Per-query metrics and arithmetic means over the evaluated queries.

    Queries absent from the qrels are skipped (reported, not scored).
    """
    rankings = run_rankings(run)
    per_query: dict[str, dict[str, float]] = {}
    skipped: list[str] = []
    for qid, ranking in rankings.items():
        if qid not in qrels:
            skipped.append(qid)
            continue
        judged = qrels[qid]
        per_query[qid] = {m: _compute_metric(m, ranking, judged, rel_threshold) for m in metrics}
    n = len(per_query)
    means = {
        m: (sum(vals[m] for vals in per_query.values()) / n if n else 0.0) for m in metrics
    }
    return MetricsReport(per_query=per_query, means=means, evaluated=n, skipped=skipped)
