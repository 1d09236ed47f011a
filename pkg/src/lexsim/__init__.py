"""Word-learning games between a prototype tutor and an online learner.

A tutor teaches words for objects in a continuous 3-D feature space to a
learner running one of four online algorithms (knn, pe, ap, cwp), under
interactive (always pointing), cross-situational (never pointing) or mixed
feedback. The experiment harness measures communicative success curves over
seeded, repeatable parameter sweeps.
"""

from .world import Object, World, Context, generate_world, sample_context
from .tutor import (
    TutorLexicon,
    UnknownWordError,
    make_tutor_lexicon,
    produce_discriminative,
    produce_descriptive,
    produce_word,
    tutor_interpret,
)
from .learners import (
    Learner,
    KNNLearner,
    PELearner,
    APLearner,
    CWPLearner,
    make_learner,
    topic_set,
)
from .protocol import (
    FeedbackPolicy,
    InteractionOutcome,
    draw_pointing,
    run_training_interaction,
    run_test_interaction,
)
from .experiment import (
    ExperimentConfig,
    SuccessCurve,
    evaluate,
    run_repetition,
    run_experiment,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "Object",
    "World",
    "Context",
    "generate_world",
    "sample_context",
    "TutorLexicon",
    "UnknownWordError",
    "make_tutor_lexicon",
    "produce_discriminative",
    "produce_descriptive",
    "produce_word",
    "tutor_interpret",
    "Learner",
    "KNNLearner",
    "PELearner",
    "APLearner",
    "CWPLearner",
    "make_learner",
    "topic_set",
    "FeedbackPolicy",
    "InteractionOutcome",
    "draw_pointing",
    "run_training_interaction",
    "run_test_interaction",
    "ExperimentConfig",
    "SuccessCurve",
    "evaluate",
    "run_repetition",
    "run_experiment",
    "run_sweep",
    "__version__",
]
