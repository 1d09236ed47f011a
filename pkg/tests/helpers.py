"""Shared builders for hand-constructed worlds, contexts and lexicons."""

import numpy as np

from lexsim.tutor import TutorLexicon
from lexsim.world import Context, Object


def obj(i, coords):
    return Object(i, np.asarray(coords, dtype=np.float64))


def ctx(*objects):
    return Context.of(objects)


def lexicon(entries):
    """Build a TutorLexicon from (word, prototype) pairs."""
    words = tuple(w for w, _ in entries)
    protos = np.array([p for _, p in entries], dtype=np.float64)
    return TutorLexicon(words, protos)
