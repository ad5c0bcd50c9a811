import pytest
from hypothesis import given, strategies as st

from tagrec.errors import ColdStartUnresolvable, EmptyProfileError
from tagrec.profile import IrrelevantTagList, ItemTagSet, WeightedTagList
from tagrec.recommend import (
    GROUP_BONUS,
    GroupingConfig,
    assign_groups,
    generate,
    match_item,
    score_cf_item,
    score_content_match,
    MatchResult,
)
from tagrec.similarity import CfConfig, build_matrix

DEFAULT = GroupingConfig()

# realistic student profile: sixteen tags spanning the three weight bands
STUDENT_WEIGHTS = {
    "logic": 0.0662, "languages": 0.0191, "electronic": 0.0514, "computers": 0.0410,
    "teoria": 0.0164, "logica": 0.0637, "computadores": 0.0398, "machine": 0.0140,
    "data": 0.0498, "matematica": 0.0634, "processing": 0.0494, "linear": 0.0846,
    "models": 0.0524, "algebra": 0.0613, "complexity": 0.0098, "computational": 0.0098,
}


def student_profile():
    return WeightedTagList(owner="student", entries=dict(STUDENT_WEIGHTS))


def no_irrelevant(owner="u"):
    return IrrelevantTagList(owner=owner)


def test_assign_groups_max_weight_is_group_one():
    groups = assign_groups(student_profile(), DEFAULT)
    assert groups["linear"] == 1  # 100% of max


def test_assign_groups_low_weight_is_group_three():
    groups = assign_groups(student_profile(), DEFAULT)
    # 0.0098 / 0.0846 = 11.6% of max, below p2=40
    assert groups["computational"] == 3


def test_assign_groups_middle_band():
    groups = assign_groups(student_profile(), DEFAULT)
    # 0.0498 / 0.0846 = 58.9% -> between 40 and 70
    assert groups["data"] == 2


def test_assign_groups_single_tag():
    profile = WeightedTagList(owner="u", entries={"only": 0.01})
    assert assign_groups(profile, DEFAULT) == {"only": 1}


def test_assign_groups_empty_profile_error():
    with pytest.raises(EmptyProfileError):
        assign_groups(WeightedTagList(owner="u"), DEFAULT)


def test_assign_groups_exhaustive_and_exclusive():
    groups = assign_groups(student_profile(), DEFAULT)
    assert set(groups) == set(STUDENT_WEIGHTS)
    assert set(groups.values()) <= {1, 2, 3}


def _assignment(g1=(), g2=(), g3=()):
    out = {}
    for tags, group in ((g1, 1), (g2, 2), (g3, 3)):
        for t in tags:
            out[t] = group
    return out


def test_match_item_group_one():
    assignment = _assignment(g1=["a", "b", "c", "d", "e"])
    item = ItemTagSet("x", "book", frozenset({"a", "b", "c", "d", "zzz"}))
    result = match_item(item, assignment, no_irrelevant(), DEFAULT)
    assert result == MatchResult(group=1, tags=frozenset({"a", "b", "c", "d"}))


def test_match_item_falls_through_to_group_two():
    assignment = _assignment(g1=["a", "b", "c"], g2=["p", "q", "r", "s", "t"])
    item = ItemTagSet("x", "book", frozenset({"a", "b", "c", "p", "q", "r", "s", "t"}))
    result = match_item(item, assignment, no_irrelevant(), DEFAULT)
    assert result is not None and result.group == 2


def test_match_item_irrelevant_tags_do_not_count():
    assignment = _assignment(g1=["a", "b", "c", "d"])
    item = ItemTagSet("x", "book", frozenset({"a", "b", "c", "d"}))
    irrelevant = IrrelevantTagList(owner="u", tags={"a", "b", "c", "d"})
    assert match_item(item, assignment, irrelevant, DEFAULT) is None


def test_match_item_no_match():
    assignment = _assignment(g1=["a"], g2=["b"], g3=["c"])
    item = ItemTagSet("x", "book", frozenset({"zzz"}))
    assert match_item(item, assignment, no_irrelevant(), DEFAULT) is None


def test_score_group_bonus_dominates():
    profile = student_profile()
    g1 = score_content_match(MatchResult(1, frozenset({"computational"})), profile)
    g2 = score_content_match(MatchResult(2, frozenset(STUDENT_WEIGHTS)), profile)
    assert g1 > g2


def test_score_worked_sum():
    profile = student_profile()
    score = score_content_match(MatchResult(1, frozenset({"linear", "logica"})), profile)
    assert score == pytest.approx(2 * GROUP_BONUS + 0.1483, abs=1e-9)


def test_cf_score_sits_between_groups():
    assert GROUP_BONUS < score_cf_item(0.95) + GROUP_BONUS  # above group-3 bonus (0)
    assert score_cf_item(1.0) <= GROUP_BONUS  # below group-2 bonus


def _simple_world(profile_entries, item_tags_by_id, borrowed=None, kind="book"):
    profiles = {"u": WeightedTagList(owner="u", entries=profile_entries)}
    irrelevant = {"u": no_irrelevant("u")}
    item_index = {(iid, kind): ItemTagSet(iid, kind, frozenset(tags))
                  for iid, tags in item_tags_by_id.items()}
    matrix = build_matrix(profiles)
    return profiles, irrelevant, item_index, borrowed or {}, matrix


def test_generate_originating_item_not_suppressed():
    tags = {"t1", "t2", "t3", "t4", "t5"}
    profiles, irrelevant, item_index, borrowed, matrix = _simple_world(
        {t: 0.2 for t in tags}, {"X": tags})
    rec = generate("u", profiles, irrelevant, item_index, {"u": {"X"}}, matrix,
                   DEFAULT, CfConfig())
    assert [it.item_id for it in rec.items] == ["X"]
    assert rec.items[0].source == "content_match"


def test_generate_cf_injection_between_identical_users():
    tags = {f"t{i}" for i in range(5)}
    entries = {t: 0.3 for t in tags}
    profiles = {
        "u1": WeightedTagList(owner="u1", entries=dict(entries)),
        "u2": WeightedTagList(owner="u2", entries=dict(entries)),
    }
    irrelevant = {u: no_irrelevant(u) for u in profiles}
    # the borrowed book's tags are NOT in the profiles: only CF can surface it
    item_index = {("B2", "book"): ItemTagSet("B2", "book", frozenset({"other1", "other2"}))}
    matrix = build_matrix(profiles)
    rec = generate("u1", profiles, irrelevant, item_index, {"u2": {"B2"}}, matrix,
                   DEFAULT, CfConfig())
    assert [(it.item_id, it.source) for it in rec.items] == [("B2", "cf_partner")]
    assert rec.items[0].matched_group is None


def test_generate_excludes_rated_items():
    tags = {"t1", "t2", "t3", "t4"}
    profiles, irrelevant, item_index, borrowed, matrix = _simple_world(
        {t: 0.2 for t in tags}, {"X": tags})
    rec = generate("u", profiles, irrelevant, item_index, {}, matrix, DEFAULT,
                   CfConfig(), rated={("X", "book")})
    assert rec.items == []


def test_generate_cold_start_error():
    profiles = {"u": WeightedTagList(owner="u")}
    matrix = build_matrix(profiles)
    with pytest.raises(ColdStartUnresolvable):
        generate("u", profiles, {}, {}, {}, matrix, DEFAULT, CfConfig())


def test_generate_caps_list_size():
    tags = {"t1", "t2", "t3", "t4"}
    items = {f"I{i:03d}": tags for i in range(40)}
    profiles, irrelevant, item_index, borrowed, matrix = _simple_world(
        {t: 0.2 for t in tags}, items)
    rec = generate("u", profiles, irrelevant, item_index, {}, matrix, DEFAULT, CfConfig())
    assert len(rec.items) == 30
    # ties broken by ascending item id
    assert [it.item_id for it in rec.items] == sorted(items)[:30]


def test_generate_deterministic():
    tags = {"t1", "t2", "t3", "t4"}
    items = {f"I{i:03d}": tags for i in range(10)}
    profiles, irrelevant, item_index, borrowed, matrix = _simple_world(
        {t: 0.2 for t in tags}, items)
    first = generate("u", profiles, irrelevant, item_index, {}, matrix, DEFAULT, CfConfig())
    second = generate("u", profiles, irrelevant, item_index, {}, matrix, DEFAULT, CfConfig())
    assert first.to_json_obj() == second.to_json_obj()


def test_grouping_config_validation():
    with pytest.raises(ValueError):
        GroupingConfig(p1=40, p2=70)
    with pytest.raises(ValueError):
        GroupingConfig(m1=0)
    with pytest.raises(ValueError):
        GroupingConfig(list_size=0)


# -- properties ---------------------------------------------------------

entries_strategy = st.dictionaries(
    st.sampled_from([f"t{i}" for i in range(12)]),
    st.floats(min_value=0.0, max_value=5.0, allow_nan=False),
    min_size=1, max_size=12,
)
config_strategy = st.builds(
    GroupingConfig,
    p1=st.sampled_from([90.0, 85.0, 80.0, 70.0]),
    p2=st.sampled_from([60.0, 55.0, 50.0, 40.0]),
    m1=st.integers(1, 4), m2=st.integers(1, 5), m3=st.integers(1, 6),
)


@given(entries_strategy, config_strategy)
def test_every_tag_in_exactly_one_group(entries, config):
    profile = WeightedTagList(owner="u", entries=entries)
    groups = assign_groups(profile, config)
    assert set(groups) == set(entries)
    max_w = max(entries.values())
    for tag, group in groups.items():
        pct = 100.0 * entries[tag] / max_w if max_w > 0 else 0.0
        if group == 1:
            assert pct >= config.p1
        elif group == 2:
            assert config.p2 <= pct < config.p1
        else:
            assert pct < config.p2


@given(entries_strategy,
       st.frozensets(st.sampled_from([f"t{i}" for i in range(12)]), max_size=12),
       st.integers(1, 4), st.integers(1, 5), st.integers(1, 6),
       st.sampled_from([1, 2, 3]))
def test_raising_minimum_shrinks_group_matches(entries, item_tags, m1, m2, m3, raised):
    profile = WeightedTagList(owner="u", entries=entries)
    base_cfg = GroupingConfig(m1=m1, m2=m2, m3=m3)
    bumped = {1: {"m1": m1 + 1}, 2: {"m2": m2 + 1}, 3: {"m3": m3 + 1}}[raised]
    raised_cfg = GroupingConfig(m1=bumped.get("m1", m1), m2=bumped.get("m2", m2),
                                m3=bumped.get("m3", m3))
    assignment = assign_groups(profile, base_cfg)
    item = ItemTagSet("x", "book", item_tags)
    before = match_item(item, assignment, no_irrelevant(), base_cfg)
    after = match_item(item, assignment, no_irrelevant(), raised_cfg)
    if after is not None and after.group == raised:
        assert before is not None and before.group == raised
