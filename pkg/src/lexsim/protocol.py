"""Single tutor/learner interactions.

A training interaction teaches: the tutor names a random topic from a fresh
context and points to it with probability f. A testing interaction measures:
speaker and hearer roles are assigned by fair coin, the speaker names a random
topic, the hearer resolves the word to an object, and the interaction succeeds
iff both picked the same object. Testing never mutates learner state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .learners import Learner
from .tutor import TutorLexicon, produce_word, tutor_interpret
from .world import World, sample_context


@dataclass(frozen=True)
class FeedbackPolicy:
    """Per-interaction pointing probability."""

    f: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f <= 1.0:
            raise ValueError(f"f must be within [0, 1] (got {self.f})")


@dataclass(frozen=True)
class InteractionOutcome:
    kind: str  # "training" or "testing"
    context_ids: tuple[int, ...]
    topic_id: int
    word: str | None
    pointing: bool
    hearer_id: int | None = None
    success: bool | None = None


def draw_pointing(policy: FeedbackPolicy, rng: np.random.Generator) -> bool:
    """One Bernoulli(f) draw."""
    return bool(rng.random() < policy.f)


def run_training_interaction(
    lex: TutorLexicon,
    learner: Learner,
    world: World,
    m: int,
    strategy: str,
    policy: FeedbackPolicy,
    rng: np.random.Generator,
) -> InteractionOutcome:
    """Sample a context, let the tutor name a random topic, maybe point,
    and feed the observation to the learner."""
    context = sample_context(world, m, rng)
    topic = context.objects[int(rng.integers(m))]
    word = produce_word(lex, context, topic, strategy)
    pointing = draw_pointing(policy, rng)
    learner.observe(context, word, topic if pointing else None)
    return InteractionOutcome(
        kind="training",
        context_ids=tuple(context.ids.tolist()),
        topic_id=topic.id,
        word=word,
        pointing=pointing,
    )


def run_test_interaction(
    lex: TutorLexicon,
    learner: Learner,
    world: World,
    m: int,
    strategy: str,
    rng: np.random.Generator,
) -> InteractionOutcome:
    """One measurement interaction; the learner is speaker or hearer with
    equal probability and never learns from the outcome."""
    learner_speaks = bool(rng.random() < 0.5)
    context = sample_context(world, m, rng)
    topic = context.objects[int(rng.integers(m))]
    if learner_speaks:
        word = learner.produce(context, topic)
    else:
        word = produce_word(lex, context, topic, strategy)
    if word is None:
        hearer_choice = None
    elif learner_speaks:
        hearer_choice = tutor_interpret(lex, context, word)
    else:
        hearer_choice = learner.interpret(context, word, rng)
    success = hearer_choice is not None and hearer_choice.id == topic.id
    return InteractionOutcome(
        kind="testing",
        context_ids=tuple(context.ids.tolist()),
        topic_id=topic.id,
        word=word,
        pointing=False,
        hearer_id=None if hearer_choice is None else hearer_choice.id,
        success=success,
    )
