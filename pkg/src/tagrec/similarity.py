"""Cosine similarity between weighted tag profiles and the user-user matrix."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from tagrec.errors import NotFoundError
from tagrec.profile import WeightedTagList


@dataclass(frozen=True)
class CfConfig:
    similarity_threshold: float = 0.95

    def __post_init__(self):
        if not (0.0 < self.similarity_threshold <= 1.0):
            raise ValueError("similarity_threshold must be in (0, 1]")


@dataclass
class SimilarityMatrix:
    users: list[str]
    values: list[list[float]]
    built_at: str = ""

    def index_of(self, user_id: str) -> int:
        try:
            return self.users.index(user_id)
        except ValueError:
            raise NotFoundError(f"user not in matrix: {user_id}") from None

    def get(self, user_a: str, user_b: str) -> float:
        return self.values[self.index_of(user_a)][self.index_of(user_b)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["user_id"] + self.users)
        for user, row in zip(self.users, self.values):
            writer.writerow([user] + [f"{v:.12g}" for v in row])
        return buf.getvalue()


def cosine(u: WeightedTagList, v: WeightedTagList) -> float:
    """Cosine over the sorted union of tags; an absent tag weighs 0.

    Empty or all-zero vectors compare as 0.0 so cold-start users never become
    universal partners.  Sorted iteration pins the floating-point summation
    order, making cosine(u, v) == cosine(v, u) exact.
    """
    dot = 0.0
    norm_u = 0.0
    norm_v = 0.0
    for tag in sorted(set(u.entries) | set(v.entries)):
        wu = u.entries.get(tag, 0.0)
        wv = v.entries.get(tag, 0.0)
        dot += wu * wv
        norm_u += wu * wu
        norm_v += wv * wv
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return dot / (math.sqrt(norm_u) * math.sqrt(norm_v))


def build_matrix(profiles: dict[str, WeightedTagList], built_at: str = "") -> SimilarityMatrix:
    """Batch-build the symmetric user x user matrix.

    The diagonal is pinned to exactly 1.0 for non-empty profiles and each
    (i, j) pair is computed once and mirrored, so symmetry is exact.
    """
    users = sorted(profiles)
    n = len(users)
    values = [[0.0] * n for _ in range(n)]
    for i, ui in enumerate(users):
        nonzero = any(w > 0.0 for w in profiles[ui].entries.values())
        values[i][i] = 1.0 if nonzero else 0.0
        for j in range(i + 1, n):
            s = cosine(profiles[ui], profiles[users[j]])
            values[i][j] = s
            values[j][i] = s
    return SimilarityMatrix(users=users, values=values, built_at=built_at)


def cf_partners(user_id: str, matrix: SimilarityMatrix, config: CfConfig) -> list[tuple[str, float]]:
    """Other users at similarity >= threshold, most similar first, ties by id."""
    i = matrix.index_of(user_id)
    partners = [
        (other, matrix.values[i][j])
        for j, other in enumerate(matrix.users)
        if other != user_id and matrix.values[i][j] >= config.similarity_threshold
    ]
    partners.sort(key=lambda p: (-p[1], p[0]))
    return partners
