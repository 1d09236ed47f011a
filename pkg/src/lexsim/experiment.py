"""Full runs: repetitions, checkpointed success curves and parameter sweeps.

Each repetition builds a fresh world, tutor lexicon and learner from seeds
derived purely from (master seed, condition key, repetition index), so results
do not depend on execution order or the degree of parallelism. The world and
tutor streams are keyed by repetition only, which pairs environments across
conditions and makes between-condition comparisons less noisy.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .learners import ALGORITHMS, make_learner
from .protocol import (
    FeedbackPolicy,
    InteractionOutcome,
    run_test_interaction,
    run_training_interaction,
)
from .seeding import rng_for
from .tutor import STRATEGIES, TutorLexicon, make_tutor_lexicon
from .world import World, generate_world

DEFAULT_CHECKPOINTS = (0, 1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)

ConditionKey = tuple[str, float, str]  # (algorithm, f, strategy)


@dataclass(frozen=True)
class ExperimentConfig:
    world_size: int = 32
    context_size: int = 4
    lexicon_size: int = 50
    dims: int = 3
    f: float = 1.0
    algorithm: str = "pe"
    alpha: float = 0.05
    k: int = 30
    strategy: str = "discriminative"
    training_interactions: int = 10000
    test_interactions: int = 100
    checkpoints: tuple[int, ...] = DEFAULT_CHECKPOINTS
    repetitions: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "f", float(self.f))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "checkpoints", tuple(int(c) for c in self.checkpoints))
        for key in ("world_size", "lexicon_size", "dims", "k", "training_interactions",
                    "test_interactions", "repetitions"):
            if getattr(self, key) < 1:
                raise ValueError(f"{key} must be >= 1 (got {getattr(self, key)})")
        if self.context_size < 2:
            raise ValueError(f"context_size must be >= 2 (got {self.context_size})")
        if self.context_size >= self.world_size:
            raise ValueError(
                "context_size must be smaller than world_size "
                f"(got {self.context_size} >= {self.world_size})"
            )
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"f must be within [0, 1] (got {self.f})")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be within [0, 1] (got {self.alpha})")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS} (got {self.algorithm!r})")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES} (got {self.strategy!r})")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative (got {self.seed})")
        if len(self.checkpoints) == 0:
            raise ValueError("checkpoints must not be empty")
        if any(c < 0 for c in self.checkpoints):
            raise ValueError("checkpoints must be non-negative")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must be strictly ascending")
        if self.checkpoints[-1] > self.training_interactions:
            raise ValueError(
                "checkpoints must not exceed training_interactions "
                f"(got {self.checkpoints[-1]} > {self.training_interactions})"
            )

    @property
    def condition(self) -> ConditionKey:
        return (self.algorithm, self.f, self.strategy)


@dataclass(frozen=True)
class TraceRecord:
    phase: str  # "training" or "testing"
    checkpoint: int | None  # set on testing rows
    step: int  # 1-based within its phase segment
    outcome: InteractionOutcome


@dataclass(frozen=True)
class SuccessCurve:
    """Per-checkpoint success rates over repetitions, with mean and sample
    standard deviation per checkpoint."""

    checkpoints: tuple[int, ...]
    rates: np.ndarray  # (repetitions, n_checkpoints)
    mean: np.ndarray = field(init=False, compare=False)
    std: np.ndarray = field(init=False, compare=False)

    def __post_init__(self) -> None:
        rates = np.asarray(self.rates, dtype=np.float64)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "mean", rates.mean(axis=0))
        if rates.shape[0] > 1:
            object.__setattr__(self, "std", rates.std(axis=0, ddof=1))
        else:
            object.__setattr__(self, "std", np.zeros(rates.shape[1]))

    @property
    def repetitions(self) -> int:
        return self.rates.shape[0]


def evaluate(
    lex: TutorLexicon,
    learner,
    world: World,
    config: ExperimentConfig,
    rng: np.random.Generator,
    trace: list[TraceRecord] | None = None,
    checkpoint: int | None = None,
) -> float:
    """Fraction of successful test interactions; leaves the learner as-is."""
    wins = 0
    for i in range(config.test_interactions):
        out = run_test_interaction(
            lex, learner, world, config.context_size, config.strategy, rng
        )
        wins += out.success
        if trace is not None:
            trace.append(TraceRecord("testing", checkpoint, i + 1, out))
    return wins / config.test_interactions


@dataclass(frozen=True)
class RepetitionResult:
    rates: list[float]
    lexicon: TutorLexicon
    world: World
    learner: object


def run_repetition_detailed(
    config: ExperimentConfig,
    rep: int,
    trace: list[TraceRecord] | None = None,
) -> RepetitionResult:
    """One full training run with frozen evaluations at every checkpoint.

    Training stops at the last checkpoint; interactions beyond it could not
    affect any reported rate.
    """
    alg, f, strategy = config.condition
    world = generate_world(config.world_size, config.dims, rng_for(config.seed, rep, "world"))
    lex = make_tutor_lexicon(
        config.lexicon_size, rng_for(config.seed, rep, "tutor"), dims=config.dims
    )
    learner = make_learner(alg, alpha=config.alpha, k=config.k, world_size=config.world_size)
    policy = FeedbackPolicy(f)
    train_rng = rng_for(config.seed, alg, f, strategy, rep, "train")

    rates: list[float] = []
    done = 0
    for checkpoint in config.checkpoints:
        while done < checkpoint:
            out = run_training_interaction(
                lex, learner, world, config.context_size, strategy, policy, train_rng
            )
            done += 1
            if trace is not None:
                trace.append(TraceRecord("training", None, done, out))
        eval_rng = rng_for(config.seed, alg, f, strategy, rep, "eval", checkpoint)
        rates.append(evaluate(lex, learner, world, config, eval_rng, trace, checkpoint))
    return RepetitionResult(rates, lex, world, learner)


def run_repetition(
    config: ExperimentConfig,
    rep: int,
    trace: list[TraceRecord] | None = None,
) -> list[float]:
    """Per-checkpoint success rates of one repetition."""
    return run_repetition_detailed(config, rep, trace).rates


def _repetition_task(task: tuple[ExperimentConfig, int]) -> list[float]:
    config, rep = task
    return run_repetition(config, rep)


def _map_tasks(tasks: list[tuple[ExperimentConfig, int]], jobs: int | None) -> list[list[float]]:
    if jobs is None or jobs <= 1 or len(tasks) <= 1:
        return [_repetition_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_repetition_task, tasks))


def run_experiment(config: ExperimentConfig, jobs: int | None = None) -> SuccessCurve:
    """All repetitions of one condition, aggregated per checkpoint."""
    tasks = [(config, rep) for rep in range(config.repetitions)]
    rows = _map_tasks(tasks, jobs)
    return SuccessCurve(config.checkpoints, np.array(rows))


def run_sweep(
    config: ExperimentConfig,
    f_values: list[float],
    algorithms: list[str],
    strategies: list[str],
    jobs: int | None = None,
) -> dict[ConditionKey, SuccessCurve]:
    """Cartesian product of conditions, each run like run_experiment.

    Results are keyed by (algorithm, f, strategy) and do not depend on the
    order of the condition lists or on the degree of parallelism.
    """
    if not f_values or not algorithms or not strategies:
        raise ValueError("f_values, algorithms and strategies must be non-empty")
    cells = [
        replace(config, algorithm=a, f=float(fv), strategy=s)
        for a in algorithms
        for fv in f_values
        for s in strategies
    ]
    keys = [cell.condition for cell in cells]
    if len(set(keys)) != len(keys):
        raise ValueError("sweep grid contains duplicate conditions")
    tasks = [(cell, rep) for cell in cells for rep in range(config.repetitions)]
    rows = _map_tasks(tasks, jobs)
    results: dict[ConditionKey, SuccessCurve] = {}
    for i, cell in enumerate(cells):
        block = rows[i * config.repetitions : (i + 1) * config.repetitions]
        results[cell.condition] = SuccessCurve(cell.checkpoints, np.array(block))
    return results
