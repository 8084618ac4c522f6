"""Elitist estimation-of-distribution algorithm with a doubly stochastic model."""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .dsm import LearningConfig, learn_smoothed
from .perm import Permutation
from .qap import QapInstance, evaluate, relative_deviation
from .sampling import SAMPLER_NAMES, draw_many

log = logging.getLogger(__name__)

RECORD_COLUMNS = ("t", "mean_sampled", "min_sampled", "best_so_far", "evals")


@dataclass(frozen=True)
class EdaConfig:
    """Run parameters; ``None`` means the size-dependent default.

    Defaults for size ``n``: ``lam = 10n``, ``mu = n``, ``alpha = 1/n^2``,
    ``budget = 100 n^2``.
    """

    sampler: str = "ps"
    lam: Optional[int] = None
    mu: Optional[int] = None
    alpha: Optional[float] = None
    budget: Optional[int] = None
    seed: int = 0

    def resolve(self, n: int) -> "EdaConfig":
        cfg = EdaConfig(
            sampler=self.sampler.lower(),
            lam=10 * n if self.lam is None else int(self.lam),
            mu=n if self.mu is None else int(self.mu),
            alpha=1.0 / n**2 if self.alpha is None else float(self.alpha),
            budget=100 * n * n if self.budget is None else int(self.budget),
            seed=int(self.seed),
        )
        cfg.check()
        return cfg

    def check(self):
        if self.sampler not in SAMPLER_NAMES:
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if not 1 <= self.mu <= self.lam:
            raise ValueError(f"need 1 <= mu <= lambda, got mu={self.mu}, lambda={self.lam}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.budget < self.lam:
            raise ValueError(f"budget {self.budget} is smaller than lambda {self.lam}")


@dataclass(frozen=True)
class IterationStats:
    t: int
    mean_sampled: float
    min_sampled: float
    best_so_far: float
    evals: int


@dataclass
class EdaRunRecord:
    instance: str
    config: EdaConfig
    best_permutation: Permutation
    best_value: float
    evaluations_used: int
    iterations: list[IterationStats] = field(default_factory=list)


def uniform_random_permutation(n: int, rng: np.random.Generator) -> Permutation:
    """Fisher-Yates shuffle of the identity."""
    if n < 1:
        raise ValueError("n must be >= 1")
    arr = list(range(1, n + 1))
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        arr[i], arr[j] = arr[j], arr[i]
    return Permutation(tuple(arr))


def select_truncation(pop: Sequence[tuple[Permutation, float]], mu: int) -> list:
    """The ``mu`` lowest-valued members; equal values keep their population order."""
    if not pop:
        raise ValueError("empty population")
    if mu > len(pop):
        raise ValueError(f"cannot select {mu} from a population of {len(pop)}")
    order = sorted(range(len(pop)), key=lambda k: pop[k][1])
    return [pop[k] for k in order[:mu]]


def run_eda(inst: QapInstance, cfg: EdaConfig) -> EdaRunRecord:
    cfg = cfg.resolve(inst.n)
    rng = np.random.default_rng(cfg.seed)
    n = inst.n

    pop = []
    for _ in range(cfg.lam):
        p = uniform_random_permutation(n, rng)
        pop.append((p, evaluate(inst, p)))
    evals = cfg.lam
    best_p, best_v = min(pop, key=lambda e: e[1])

    iterations = []
    t = 0
    while evals < cfg.budget:
        t += 1
        selected = select_truncation(pop, cfg.mu)
        model = learn_smoothed([p for p, _ in selected], LearningConfig(cfg.alpha))
        size = min(cfg.lam, cfg.budget - evals)
        sampled = [(p, evaluate(inst, p)) for p in draw_many(cfg.sampler, model, rng, size)]
        evals += size
        values = [v for _, v in sampled]
        gen_best = min(sampled, key=lambda e: e[1])
        if gen_best[1] < best_v:
            best_p, best_v = gen_best
        iterations.append(
            IterationStats(t, float(np.mean(values)), min(values), best_v, evals)
        )
        pop = selected + sampled
        if t % 50 == 0:
            log.debug("%s/%s seed=%d t=%d best=%s", inst.name, cfg.sampler, cfg.seed, t, best_v)

    return EdaRunRecord(inst.name, cfg, best_p, best_v, evals, iterations)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def record_header(record: EdaRunRecord, best_known: Optional[float] = None) -> dict:
    head = {
        "instance": record.instance,
        **asdict(record.config),
        "best_value": record.best_value,
        "evaluations_used": record.evaluations_used,
        "best_permutation": str(record.best_permutation),
    }
    if best_known is not None:
        head["best_known"] = best_known
        head["relative_deviation"] = relative_deviation(record.best_value, best_known)
    return head


def format_record(record: EdaRunRecord, best_known: Optional[float] = None) -> str:
    lines = ["# " + json.dumps(record_header(record, best_known), sort_keys=True)]
    lines.append(",".join(RECORD_COLUMNS))
    for it in record.iterations:
        lines.append(",".join(_fmt(getattr(it, c)) for c in RECORD_COLUMNS))
    return "\n".join(lines) + "\n"


def write_record(record: EdaRunRecord, path, best_known: Optional[float] = None) -> None:
    Path(path).write_text(format_record(record, best_known))


def read_record(path) -> tuple[dict, list[IterationStats]]:
    """Header dict and per-iteration rows of a record file."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError(f"{path}: missing header line")
    header = json.loads(lines[0][2:])
    if tuple(lines[1].split(",")) != RECORD_COLUMNS:
        raise ValueError(f"{path}: unexpected column header {lines[1]!r}")
    rows = []
    for line in lines[2:]:
        t, mean, mn, best, ev = line.split(",")
        rows.append(IterationStats(int(t), float(mean), float(mn), float(best), int(ev)))
    return header, rows
