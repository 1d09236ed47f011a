"""Online learner algorithms: knn, pe, ap and cwp.

All four consume the same observation: a context, the word the tutor uttered,
and optionally the pointed-to topic. Pointing collapses the candidate referent
set to a single object; without it the learner has to disambiguate across
situations. Production and interpretation for the prototype learners reuse the
tutor's selection rules on the learner's own prototypes.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from .tutor import discriminative_index, distances_to, nearest_object
from .world import Context, Object

ALGORITHMS = ("knn", "pe", "ap", "cwp")


def topic_set(context: Context, pointed: Object | None = None) -> tuple[Object, ...]:
    """Candidate referents of the heard word: just the pointed object when
    pointing occurred, the whole context otherwise."""
    if pointed is None:
        return context.objects
    for obj in context.objects:
        if obj.id == pointed.id:
            return (pointed,)
    raise ValueError(f"pointed object {pointed.id} is not in the context")


def _topic_features(context: Context, pointed: Object | None) -> np.ndarray:
    """Feature rows of the topic set, aligned with topic_set() order."""
    if pointed is None:
        return context.features
    return pointed.features[None, :]


class Learner(ABC):
    """Common interface of the four algorithms.

    `produce` and `interpret` return None when the learner has no usable
    answer (nothing learned yet, or an unknown word); the protocol scores
    that as a failed interaction. Only knn interpretation is randomized,
    and only through the generator passed in.
    """

    algorithm: str

    @abstractmethod
    def observe(self, context: Context, word: str, pointed: Object | None = None) -> None:
        """Update internal state from one training interaction."""

    @abstractmethod
    def produce(self, context: Context, topic: Object) -> str | None:
        """Pick a word for the topic."""

    @abstractmethod
    def interpret(self, context: Context, word: str, rng: np.random.Generator) -> Object | None:
        """Pick the context object the word refers to."""

    @abstractmethod
    def state_dict(self) -> dict:
        """Full internal state as plain Python data (for checks and dumps)."""

    @abstractmethod
    def dump_rows(self) -> list[tuple[str, int | None, np.ndarray | None]]:
        """Per-word (word, count, prototype) summary for the state sidecar."""


class KNNLearner(Learner):
    """Sample memory classified by k-nearest-neighbor majority vote.

    Every observation appends exactly |context| samples: one per context
    object without pointing, |context| copies of the pointed topic with it.
    """

    algorithm = "knn"

    def __init__(self, k: int = 30):
        if k < 1:
            raise ValueError(f"k must be >= 1 (got {k})")
        self.k = k
        self.words: list[str] = []
        self._word_ids: dict[str, int] = {}
        self._feats: np.ndarray | None = None
        self._labels: np.ndarray | None = None
        self._n = 0

    def __len__(self) -> int:
        return self._n

    def _word_id(self, word: str) -> int:
        wid = self._word_ids.get(word)
        if wid is None:
            wid = len(self.words)
            self._word_ids[word] = wid
            self.words.append(word)
        return wid

    def _grow(self, extra: int, dims: int) -> None:
        if self._feats is None:
            cap = max(256, extra)
            self._feats = np.empty((cap, dims))
            self._labels = np.empty(cap, dtype=np.int64)
        elif self._n + extra > len(self._feats):
            cap = max(self._n + extra, 2 * len(self._feats))
            feats = np.empty((cap, self._feats.shape[1]))
            labels = np.empty(cap, dtype=np.int64)
            feats[: self._n] = self._feats[: self._n]
            labels[: self._n] = self._labels[: self._n]
            self._feats, self._labels = feats, labels

    def observe(self, context: Context, word: str, pointed: Object | None = None) -> None:
        topic_set(context, pointed)  # validates pointing
        m = len(context)
        if pointed is None:
            rows = context.features
        else:
            # the pointed topic enters once per context slot, weighting the vote
            rows = np.broadcast_to(pointed.features, (m, len(pointed.features)))
        wid = self._word_id(word)
        self._grow(m, rows.shape[1])
        self._feats[self._n : self._n + m] = rows
        self._labels[self._n : self._n + m] = wid
        self._n += m

    def _neighbors(self, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        d = distances_to(self._feats[: self._n], target)
        kk = min(self.k, self._n)
        if kk == self._n:
            sel = np.arange(self._n)
        else:
            sel = np.argpartition(d, kk - 1)[:kk]
            boundary = d[sel].max()
            if np.count_nonzero(d <= boundary) > kk:
                # distance tie at the k-th neighbor: earlier samples win.
                # flatnonzero returns indices in insertion order.
                strict = np.flatnonzero(d < boundary)
                tied = np.flatnonzero(d == boundary)
                sel = np.concatenate([strict, tied[: kk - len(strict)]])
        return sel, d[sel]

    def _vote(self, target: np.ndarray) -> int:
        sel, dist = self._neighbors(target)
        labels = self._labels[sel]
        counts = np.bincount(labels, minlength=len(self.words))
        tied = np.flatnonzero(counts == counts.max())
        if len(tied) == 1:
            return int(tied[0])
        # vote tie: smallest summed neighbor distance, then earliest-learned word
        sums = np.array([dist[labels == w].sum() for w in tied])
        return int(tied[np.argmin(sums)])

    def produce(self, context: Context, topic: Object) -> str | None:
        if self._n == 0:
            return None
        return self.words[self._vote(topic.features)]

    def interpret(self, context: Context, word: str, rng: np.random.Generator) -> Object | None:
        if self._n == 0:
            return None
        wid = self._word_ids.get(word)
        if wid is None:
            return None
        matches = [o for o in context.objects if self._vote(o.features) == wid]
        if not matches:
            return None
        if len(matches) == 1:
            return matches[0]
        return matches[int(rng.integers(len(matches)))]

    def state_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "k": self.k,
            "words": list(self.words),
            "samples": [
                (self.words[self._labels[i]], self._feats[i].tolist()) for i in range(self._n)
            ],
        }

    def dump_rows(self) -> list[tuple[str, int | None, np.ndarray | None]]:
        counts = np.bincount(self._labels[: self._n], minlength=len(self.words))
        return [(w, int(counts[i]), None) for i, w in enumerate(self.words)]


class _PrototypeLearner(Learner):
    """Shared prototype store plus tutor-style production/interpretation."""

    def __init__(self) -> None:
        self.words: list[str] = []
        self._word_ids: dict[str, int] = {}
        self._protos: np.ndarray | None = None
        self._nw = 0

    @property
    def prototypes(self) -> np.ndarray:
        if self._protos is None:
            return np.empty((0, 0))
        return self._protos[: self._nw]

    def prototype_of(self, word: str) -> np.ndarray:
        return self._protos[self._word_ids[word]].copy()

    def _register(self, word: str, dims: int) -> int:
        if self._protos is None:
            self._protos = np.zeros((64, dims))
        elif self._nw == len(self._protos):
            protos = np.zeros((2 * self._nw, dims))
            protos[: self._nw] = self._protos
            self._protos = protos
        wid = self._nw
        self._word_ids[word] = wid
        self.words.append(word)
        self._nw += 1
        return wid

    def produce(self, context: Context, topic: Object) -> str | None:
        if self._nw == 0:
            return None
        return self.words[discriminative_index(self.prototypes, context, topic)]

    def interpret(self, context: Context, word: str, rng: np.random.Generator) -> Object | None:
        wid = self._word_ids.get(word)
        if wid is None:
            return None
        return nearest_object(context, self._protos[wid])

    def dump_rows(self) -> list[tuple[str, int | None, np.ndarray | None]]:
        return [(w, None, self._protos[i].copy()) for i, w in enumerate(self.words)]


class PELearner(_PrototypeLearner):
    """Recency-weighted centroids: each observation pulls the word's
    prototype toward the topic-set mean by a fixed learning rate."""

    algorithm = "pe"

    def __init__(self, alpha: float = 0.05):
        super().__init__()
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must be within [0, 1] (got {alpha})")
        self.alpha = alpha

    def observe(self, context: Context, word: str, pointed: Object | None = None) -> None:
        topic_set(context, pointed)
        feats = _topic_features(context, pointed)
        target = feats.sum(axis=0) / feats.shape[0]
        wid = self._word_ids.get(word)
        if wid is None:
            # first observation uses rate 1, collapsing to the topic-set mean
            wid = self._register(word, len(target))
            self._protos[wid] = target
        else:
            self._protos[wid] = (1.0 - self.alpha) * self._protos[wid] + self.alpha * target

    def state_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "alpha": self.alpha,
            "words": list(self.words),
            "prototypes": self.prototypes.tolist(),
        }


class APLearner(_PrototypeLearner):
    """Equal-weight centroids: keeps every sample ever observed for a word
    and holds the prototype at their exact arithmetic mean."""

    algorithm = "ap"

    def __init__(self) -> None:
        super().__init__()
        self._blocks: list[list[np.ndarray]] = []  # per word, appended sample blocks
        self._sums: np.ndarray | None = None
        self._counts: np.ndarray | None = None

    def observe(self, context: Context, word: str, pointed: Object | None = None) -> None:
        topic_set(context, pointed)
        feats = _topic_features(context, pointed)
        wid = self._word_ids.get(word)
        if wid is None:
            wid = self._register(word, feats.shape[1])
            self._blocks.append([])
            if self._sums is None or len(self._sums) < len(self._protos):
                sums = np.zeros_like(self._protos)
                counts = np.zeros(len(self._protos), dtype=np.int64)
                if self._sums is not None:
                    sums[: len(self._sums)] = self._sums
                    counts[: len(self._counts)] = self._counts
                self._sums, self._counts = sums, counts
        self._blocks[wid].append(feats.copy())
        self._sums[wid] += feats.sum(axis=0)
        self._counts[wid] += len(feats)
        self._protos[wid] = self._sums[wid] / self._counts[wid]

    def samples_for(self, word: str) -> np.ndarray:
        """All stored samples for a word, in observation order."""
        return np.concatenate(self._blocks[self._word_ids[word]], axis=0)

    def sample_count(self, word: str) -> int:
        return int(self._counts[self._word_ids[word]])

    def state_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "words": list(self.words),
            "prototypes": self.prototypes.tolist(),
            "samples": [self.samples_for(w).tolist() for w in self.words],
        }

    def dump_rows(self) -> list[tuple[str, int | None, np.ndarray | None]]:
        return [
            (w, self.sample_count(w), self._protos[i].copy()) for i, w in enumerate(self.words)
        ]


class CWPLearner(_PrototypeLearner):
    """Centroids with co-occurrence weighting: topic-set objects that have
    co-occurred more often with the word pull the prototype harder."""

    algorithm = "cwp"

    def __init__(self, world_size: int, alpha: float = 0.05):
        super().__init__()
        if world_size < 1:
            raise ValueError(f"world_size must be >= 1 (got {world_size})")
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must be within [0, 1] (got {alpha})")
        self.world_size = world_size
        self.alpha = alpha
        self._cc: np.ndarray | None = None  # (words, world_size) co-occurrence counts

    def cooccurrence(self, word: str) -> np.ndarray:
        """Co-occurrence counts of a word with every world object id."""
        return self._cc[self._word_ids[word]].copy()

    def observe(self, context: Context, word: str, pointed: Object | None = None) -> None:
        topic_set(context, pointed)
        feats = _topic_features(context, pointed)
        tids = context.ids if pointed is None else np.array([pointed.id])
        is_new = word not in self._word_ids
        if is_new:
            wid = self._register(word, feats.shape[1])
            if self._cc is None or len(self._cc) < len(self._protos):
                cc = np.zeros((len(self._protos), self.world_size), dtype=np.int64)
                if self._cc is not None:
                    cc[: len(self._cc)] = self._cc
                self._cc = cc
        else:
            wid = self._word_ids[word]
        self._cc[wid, tids] += 1
        counts = self._cc[wid, tids].astype(np.float64)
        beta = counts / counts.sum()
        target = beta @ feats
        if is_new:
            self._protos[wid] = target
        else:
            self._protos[wid] = (1.0 - self.alpha) * self._protos[wid] + self.alpha * target

    def state_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "alpha": self.alpha,
            "words": list(self.words),
            "prototypes": self.prototypes.tolist(),
            "cooccurrence": [self.cooccurrence(w).tolist() for w in self.words],
        }

    def dump_rows(self) -> list[tuple[str, int | None, np.ndarray | None]]:
        return [
            (w, int(self._cc[i].sum()), self._protos[i].copy()) for i, w in enumerate(self.words)
        ]


def make_learner(
    algorithm: str,
    *,
    alpha: float = 0.05,
    k: int = 30,
    world_size: int | None = None,
) -> Learner:
    """Build a fresh learner for one experiment repetition."""
    if algorithm == "knn":
        return KNNLearner(k=k)
    if algorithm == "pe":
        return PELearner(alpha=alpha)
    if algorithm == "ap":
        return APLearner()
    if algorithm == "cwp":
        if world_size is None:
            raise ValueError("cwp requires world_size for its co-occurrence table")
        return CWPLearner(world_size, alpha=alpha)
    raise ValueError(f"algorithm must be one of {ALGORITHMS} (got {algorithm!r})")
