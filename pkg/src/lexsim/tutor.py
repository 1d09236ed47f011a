"""Tutor language: a fixed word-prototype lexicon plus production and
interpretation rules.

Production picks a word for a topic either discriminatively (prototype close
to the topic and far from the nearest distractor) or descriptively (prototype
nearest the topic, ignoring distractors). Interpretation maps a heard word to
the context object nearest its prototype. Learners with prototype state reuse
the same selection rules on their own prototypes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .world import Context, Object

STRATEGIES = ("discriminative", "descriptive")


class UnknownWordError(KeyError):
    """Raised when interpretation is asked for a word outside the lexicon."""


@dataclass(frozen=True)
class TutorLexicon:
    """Bijective word-to-prototype map; the target language."""

    words: tuple[str, ...]
    prototypes: np.ndarray  # (t, dims)
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.words) != len(set(self.words)):
            raise ValueError("lexicon words must be distinct")
        if len(self.words) != len(self.prototypes):
            raise ValueError("one prototype per word required")
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})

    def __len__(self) -> int:
        return len(self.words)

    def word_index(self, word: str) -> int:
        try:
            return self._index[word]
        except KeyError:
            raise UnknownWordError(word) from None


def make_tutor_lexicon(t: int, rng: np.random.Generator, dims: int = 3) -> TutorLexicon:
    """Generate t words with prototypes i.i.d. uniform on the unit cube."""
    if t < 1:
        raise ValueError(f"lexicon size must be >= 1 (got {t})")
    prototypes = rng.random((t, dims))
    prototypes.setflags(write=False)
    words = tuple(f"w{i:03d}" for i in range(t))
    return TutorLexicon(words, prototypes)


def distances_to(points: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Euclidean distance from each row of `points` to `target`."""
    diff = points - target
    return np.sqrt(np.einsum("md,md->m", diff, diff))


def discriminative_index(prototypes: np.ndarray, context: Context, topic: Object) -> int:
    """Index of the prototype maximizing
    min over distractors of d(p, o)  minus  d(p, topic).

    Ties resolve to the lowest index. A single-object context degenerates to
    the descriptive rule (no distractors to discriminate against).
    """
    ti = -1
    for i, obj in enumerate(context.objects):
        if obj.id == topic.id:
            ti = i
            break
    if ti < 0:
        raise ValueError(f"topic {topic.id} is not in the context")
    if len(context) == 1:
        return descriptive_index(prototypes, topic)
    diff = prototypes[:, None, :] - context.features[None, :, :]
    dist = np.sqrt(np.einsum("pmd,pmd->pm", diff, diff))
    topic_col = dist[:, ti].copy()
    dist[:, ti] = np.inf  # drop the topic from the distractor minimum
    scores = dist.min(axis=1) - topic_col
    return int(np.argmax(scores))


def descriptive_index(prototypes: np.ndarray, topic: Object) -> int:
    """Index of the prototype nearest the topic; ties to the lowest index."""
    return int(np.argmin(distances_to(prototypes, topic.features)))


def nearest_object(context: Context, point: np.ndarray) -> Object:
    """Context object nearest `point`; ties resolve to the lowest object id."""
    d = distances_to(context.features, point)
    best = np.flatnonzero(d == d.min())
    pick = best[0] if len(best) == 1 else best[np.argmin(context.ids[best])]
    return context.objects[int(pick)]


def produce_discriminative(lex: TutorLexicon, context: Context, topic: Object) -> str:
    if len(lex) == 0:
        raise ValueError("lexicon is empty")
    return lex.words[discriminative_index(lex.prototypes, context, topic)]


def produce_descriptive(lex: TutorLexicon, topic: Object) -> str:
    """Word of the prototype nearest the topic, independent of context."""
    if len(lex) == 0:
        raise ValueError("lexicon is empty")
    return lex.words[descriptive_index(lex.prototypes, topic)]


def produce_word(lex: TutorLexicon, context: Context, topic: Object, strategy: str) -> str:
    if strategy == "discriminative":
        return produce_discriminative(lex, context, topic)
    if strategy == "descriptive":
        return produce_descriptive(lex, topic)
    raise ValueError(f"strategy must be one of {STRATEGIES} (got {strategy!r})")


def tutor_interpret(lex: TutorLexicon, context: Context, word: str) -> Object:
    """Context object nearest the word's prototype."""
    return nearest_object(context, lex.prototypes[lex.word_index(word)])
