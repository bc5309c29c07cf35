import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trustmarket.errors import SelfRating, StaleTimestamp, UnknownAccount
from trustmarket.ratings import Rating, RatingStore, normalize_scope

from conftest import record


def rating(rater, ratee, value=1, cost=100.0, at=1, scope="laptops"):
    return Rating(rater=rater, ratee=ratee, scope=scope, value=value,
                  cost=cost, at=at)


# ------------------------------------------------------------------
# basic semantics
# ------------------------------------------------------------------

def test_scope_normalized():
    assert normalize_scope("  Laptops ") == "laptops"
    assert rating("a", "b", scope=" CARS ").scope == "cars"
    with pytest.raises(ValueError):
        normalize_scope("   ")


def test_value_must_be_tri_valued():
    with pytest.raises(ValueError):
        rating("a", "b", value=2)
    with pytest.raises(ValueError):
        rating("a", "b", cost=-1.0)


def test_latest_replaces_prior(store):
    store.record(rating("a", "b", value=1, at=1))
    store.record(rating("a", "b", value=-1, at=2))
    latest = store.latest_ratings_for("b")
    assert len(store) == 1
    assert [r.value for r in latest] == [-1]


def test_distinct_raters_keep_distinct_entries(store):
    store.record(rating("a", "b", at=1))
    store.record(rating("c", "b", at=2))
    assert len(store.latest_ratings_for("b")) == 2


def test_distinct_scopes_keep_distinct_entries(store):
    store.record(rating("a", "b", at=1, scope="laptops"))
    store.record(rating("a", "b", at=2, scope="cars"))
    assert len(store.latest_ratings_for("b")) == 2
    assert len(store.latest_ratings_for("b", "cars")) == 1


def test_self_rating_rejected(store):
    with pytest.raises(SelfRating):
        store.record(rating("a", "a"))


def test_stale_timestamp_rejected(store):
    store.record(rating("a", "b", at=5))
    with pytest.raises(StaleTimestamp):
        store.record(rating("a", "b", at=5))
    with pytest.raises(StaleTimestamp):
        store.record(rating("a", "b", at=4))


def test_registry_enforcement(market):
    registry, store, ids = market
    record(store, registry, ids, "b1", "seller", 1, 100.0, 1)
    with pytest.raises(UnknownAccount):
        store.record(rating("ghost", ids["seller"], at=2), registry=registry)


def test_revision_counts_mutations(store):
    assert store.revision == 0
    store.record(rating("a", "b", at=1))
    store.record(rating("a", "b", at=2))
    assert store.revision == 2


def test_unknown_ratee_queries_empty(store):
    assert store.latest_ratings_for("nobody") == []
    assert store.latest_ratings_for("nobody", "cars") == []


# ------------------------------------------------------------------
# pair-global replacement switch
# ------------------------------------------------------------------

def test_pair_global_replacement_erases_other_scope():
    store = RatingStore(pair_global_replacement=True)
    store.record(rating("a", "b", at=1, scope="laptops"))
    store.record(rating("a", "b", at=2, scope="cars"))
    latest = store.latest_ratings_for("b")
    assert [r.scope for r in latest] == ["cars"]


def test_pair_global_stale_is_per_pair():
    store = RatingStore(pair_global_replacement=True)
    store.record(rating("a", "b", at=5, scope="laptops"))
    with pytest.raises(StaleTimestamp):
        store.record(rating("a", "b", at=5, scope="cars"))


# ------------------------------------------------------------------
# baseline aggregate
# ------------------------------------------------------------------

def test_ebay_score_counts():
    store = RatingStore()
    values = [1, 1, 1, -1, 0]
    for i, (who, value) in enumerate(zip("cdefg", values)):
        store.record(rating(who, "b", value=value, at=i + 1))
    score = store.ebay_score("b")
    assert score.net == 2
    assert score.percent_positive == pytest.approx(3 / 4)
    assert score.counts == (3, 1, 1)


def test_ebay_score_neutral_convention():
    store = RatingStore()
    for i, (who, value) in enumerate(zip("cdefg", [1, 1, 1, -1, 0])):
        store.record(rating(who, "b", value=value, at=i + 1))
    assert store.ebay_score("b", include_neutral=True).percent_positive \
        == pytest.approx(3 / 5)


def test_ebay_score_empty():
    score = RatingStore().ebay_score("b")
    assert score.net == 0
    assert score.percent_positive is None


def test_ebay_score_all_positive():
    store = RatingStore()
    for i, who in enumerate("cdefgh"):
        store.record(rating(who, "b", value=1, at=i + 1))
    score = store.ebay_score("b")
    assert score.net == 6
    assert score.percent_positive == 1.0


def test_ebay_net_order_invariant_over_distinct_keys():
    events = [rating(who, "b", value=v, at=i + 1)
              for i, (who, v) in enumerate(zip("cdefgh", [1, -1, 1, 0, 1, -1]))]
    rng = random.Random(7)
    nets = set()
    for _ in range(20):
        shuffled = events[:]
        rng.shuffle(shuffled)
        store = RatingStore()
        for event in shuffled:
            store.record(event)
        nets.add(store.ebay_score("b").net)
    assert nets == {1}


# ------------------------------------------------------------------
# latest-only property against a brute-force oracle
# ------------------------------------------------------------------

event_strategy = st.lists(
    st.tuples(st.sampled_from("abcd"), st.sampled_from("efgh"),
              st.sampled_from(["laptops", "cars"]),
              st.sampled_from([1, 0, -1]),
              st.integers(min_value=1, max_value=60)),
    max_size=40)


@given(event_strategy)
def test_store_matches_max_timestamp_oracle(events):
    store = RatingStore()
    oracle: dict = {}
    for rater, ratee, scope, value, at in events:
        candidate = Rating(rater=rater, ratee=ratee, scope=scope,
                           value=value, cost=50.0, at=at)
        key = (rater, ratee, scope)
        try:
            store.record(candidate)
        except StaleTimestamp:
            assert key in oracle and oracle[key].at >= at
            continue
        oracle[key] = candidate
    assert store.snapshot() == oracle
    for ratee in "efgh":
        expected = sorted((r for r in oracle.values() if r.ratee == ratee),
                          key=lambda r: (r.rater, r.scope))
        assert store.latest_ratings_for(ratee) == expected
