"""Recommendation lists: weight-percentile tag groups, threshold matching,
collaborative injection, ranking and capping.

Group membership is relative to the profile's maximum weight.  Matching walks
groups 1 -> 2 -> 3 and the first group reaching its minimum shared-tag count
wins.  Ranking is score-based: a group bonus dominates tag-weight sums so a
group-1 match always outranks a group-2 match, and collaborative items slot
between groups 2 and 3 in proportion to partner similarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from tagrec.errors import ColdStartUnresolvable, EmptyProfileError
from tagrec.profile import IrrelevantTagList, ItemTagSet, WeightedTagList
from tagrec.similarity import CfConfig, SimilarityMatrix, cf_partners

GROUP_BONUS = 1000.0

SOURCE_CONTENT = "content_match"
SOURCE_CF = "cf_partner"


@dataclass(frozen=True)
class GroupingConfig:
    """Threshold-group parameterization; the default is the best sweep row
    (group 1 at >= 70% of max weight, group 2 at >= 40%, minimums 4/5/5)."""

    p1: float = 70.0
    p2: float = 40.0
    m1: int = 4
    m2: int = 5
    m3: int = 5
    list_size: int = 30

    def __post_init__(self):
        if not (0.0 < self.p2 < self.p1 <= 100.0):
            raise ValueError("need 0 < p2 < p1 <= 100")
        if min(self.m1, self.m2, self.m3) < 1:
            raise ValueError("group minimums must be >= 1")
        if self.list_size < 1:
            raise ValueError("list_size must be >= 1")

    def min_for(self, group: int) -> int:
        return (self.m1, self.m2, self.m3)[group - 1]


@dataclass(frozen=True)
class MatchResult:
    group: int
    tags: frozenset[str]


@dataclass(frozen=True)
class RecommendationItem:
    item_id: str
    item_kind: str
    source: str
    matched_group: int | None
    matched_tags: frozenset[str]
    score: float

    def to_json_obj(self) -> dict:
        return {
            "item_id": self.item_id,
            "item_kind": self.item_kind,
            "source": self.source,
            "matched_group": self.matched_group,
            "matched_tags": sorted(self.matched_tags),
            "score": self.score,
        }


@dataclass
class RecommendationList:
    user_id: str
    items: list[RecommendationItem] = field(default_factory=list)
    generated_at: str = ""

    def to_json_obj(self) -> dict:
        return {
            "user_id": self.user_id,
            "generated_at": self.generated_at,
            "items": [item.to_json_obj() for item in self.items],
        }


def assign_groups(profile: WeightedTagList, config: GroupingConfig) -> dict[str, int]:
    """Partition profile tags into groups 1..3 by percent of the max weight."""
    if profile.is_empty():
        raise EmptyProfileError(profile.owner)
    max_weight = max(profile.entries.values())
    assignment = {}
    for tag, weight in profile.entries.items():
        pct = 100.0 * (weight / max_weight) if max_weight > 0 else 0.0
        if pct >= config.p1:
            assignment[tag] = 1
        elif pct >= config.p2:
            assignment[tag] = 2
        else:
            assignment[tag] = 3
    return assignment


def match_item(item: ItemTagSet, assignment: dict[str, int],
               irrelevant: IrrelevantTagList, config: GroupingConfig) -> MatchResult | None:
    """First group (1 -> 2 -> 3) whose shared-tag count reaches its minimum."""
    usable = item.tags - irrelevant.tags
    for group in (1, 2, 3):
        shared = frozenset(t for t in usable if assignment.get(t) == group)
        if len(shared) >= config.min_for(group):
            return MatchResult(group=group, tags=shared)
    return None


def score_content_match(match: MatchResult, profile: WeightedTagList) -> float:
    tag_sum = sum(profile.entries.get(t, 0.0) for t in sorted(match.tags))
    return (3 - match.group) * GROUP_BONUS + tag_sum


def score_cf_item(partner_similarity: float) -> float:
    return partner_similarity * GROUP_BONUS


def generate(user_id: str,
             profiles: dict[str, WeightedTagList],
             irrelevant: dict[str, IrrelevantTagList],
             item_index: dict[tuple[str, str], ItemTagSet],
             borrowed_by_user: dict[str, set[str]],
             matrix: SimilarityMatrix,
             grouping: GroupingConfig,
             cf: CfConfig,
             rated: set[tuple[str, str]] = frozenset(),
             generated_at: str = "") -> RecommendationList:
    """Build one user's ranked list: content matches over the whole catalog
    plus the books borrowed by high-similarity partners, minus anything the
    user already rated, truncated to list_size."""
    profile = profiles.get(user_id)
    if profile is None or profile.is_empty():
        raise ColdStartUnresolvable(user_id)
    user_irrelevant = irrelevant.get(user_id) or IrrelevantTagList(owner=user_id)
    assignment = assign_groups(profile, grouping)

    pool: dict[tuple[str, str], RecommendationItem] = {}
    for key in sorted(item_index):
        if key in rated:
            continue
        item = item_index[key]
        match = match_item(item, assignment, user_irrelevant, grouping)
        if match is None:
            continue
        pool[key] = RecommendationItem(
            item_id=item.item_id,
            item_kind=item.item_kind,
            source=SOURCE_CONTENT,
            matched_group=match.group,
            matched_tags=match.tags,
            score=score_content_match(match, profile),
        )

    for partner, sim in cf_partners(user_id, matrix, cf):
        for code in sorted(borrowed_by_user.get(partner, set())):
            key = (code, "book")
            if key in rated or key not in item_index:
                continue
            candidate = RecommendationItem(
                item_id=code,
                item_kind="book",
                source=SOURCE_CF,
                matched_group=None,
                matched_tags=frozenset(),
                score=score_cf_item(sim),
            )
            existing = pool.get(key)
            if existing is None or candidate.score > existing.score:
                pool[key] = candidate

    ranked = sorted(pool.values(), key=lambda it: (-it.score, it.item_id, it.item_kind))
    return RecommendationList(
        user_id=user_id,
        items=ranked[: grouping.list_size],
        generated_at=generated_at,
    )
