"""Latest-rating-only feedback store, partitioned by product scope.

Each (rater, ratee, scope) key holds at most one rating: recording a newer
one replaces the old outright, which is what lets a later deal repair a
bad mark.  Scopes partition reputation so a laptop seller starts from
scratch in the car category.  A pair-global mode collapses the key to
(rater, ratee) for experiments with cross-scope replacement.
"""

from collections import defaultdict
from dataclasses import dataclass
from enum import IntEnum

from .errors import SelfRating, StaleTimestamp, UnknownAccount


class Feedback(IntEnum):
    POSITIVE = 1
    NEUTRAL = 0
    NEGATIVE = -1


def normalize_scope(scope: str) -> str:
    normalized = scope.strip().lower()
    if not normalized:
        raise ValueError("scope must be a non-empty category name")
    return normalized


@dataclass(frozen=True)
class Rating:
    """One party's latest feedback about another, within one scope.

    `cost` is the currency amount of the rated transaction and `at` a
    logical timestamp (monotone simulation/ledger clock, not wall time).
    """

    rater: str
    ratee: str
    scope: str
    value: int
    cost: float
    at: int

    def __post_init__(self):
        if self.value not in (1, 0, -1):
            raise ValueError(f"rating value must be +1, 0 or -1, got {self.value}")
        if self.cost < 0:
            raise ValueError(f"cost must be non-negative, got {self.cost}")
        object.__setattr__(self, "scope", normalize_scope(self.scope))


@dataclass(frozen=True)
class EbayScore:
    """Classic net-score aggregate over a ratee's latest ratings."""

    net: int
    percent_positive: float | None
    positive: int
    neutral: int
    negative: int

    @property
    def counts(self) -> tuple:
        return (self.positive, self.neutral, self.negative)


class RatingStore:
    """Holds the single latest rating per key, with a revision counter.

    Single-writer, many-reader: the revision counter identifies snapshots
    and drives cache invalidation in the trust engine.
    """

    def __init__(self, pair_global_replacement: bool = False):
        self._by_key: dict[tuple, Rating] = {}
        self._by_ratee: dict[str, set] = defaultdict(set)
        self._pair_latest: dict[tuple, tuple] = {}   # (rater, ratee) -> live key
        self._pair_global = pair_global_replacement
        self.revision = 0

    def __len__(self) -> int:
        return len(self._by_key)

    @property
    def pair_global_replacement(self) -> bool:
        return self._pair_global

    def record(self, rating: Rating, registry=None) -> None:
        """Insert or replace the latest rating for the rating's key.

        With a registry supplied, both parties must be registered.  The
        timestamp must be strictly newer than whatever the key (or, in
        pair-global mode, the pair) already holds.
        """
        if rating.rater == rating.ratee:
            raise SelfRating(f"{rating.rater} cannot rate itself")
        if registry is not None:
            for account_id in (rating.rater, rating.ratee):
                if account_id not in registry:
                    raise UnknownAccount(f"no account {account_id!r}")
        pair = (rating.rater, rating.ratee)
        key = (rating.rater, rating.ratee, rating.scope)
        if self._pair_global:
            prior_key = self._pair_latest.get(pair)
            if prior_key is not None:
                prior = self._by_key[prior_key]
                if prior.at >= rating.at:
                    raise StaleTimestamp(
                        f"rating at t={rating.at} not newer than stored t={prior.at} "
                        f"for pair {pair}")
                del self._by_key[prior_key]
                self._by_ratee[rating.ratee].discard(prior_key)
        else:
            prior = self._by_key.get(key)
            if prior is not None and prior.at >= rating.at:
                raise StaleTimestamp(
                    f"rating at t={rating.at} not newer than stored t={prior.at} "
                    f"for key {key}")
        self._by_key[key] = rating
        self._by_ratee[rating.ratee].add(key)
        self._pair_latest[pair] = key
        self.revision += 1

    def latest_ratings_for(self, ratee: str, scope: str | None = None) -> list:
        """Latest rating per rater for `ratee`, in one scope or across all.

        Sorted by (rater, scope) so iteration order is deterministic.
        """
        wanted = None if scope is None else normalize_scope(scope)
        out = [self._by_key[key] for key in self._by_ratee.get(ratee, ())
               if wanted is None or key[2] == wanted]
        out.sort(key=lambda r: (r.rater, r.scope))
        return out

    def ebay_score(self, ratee: str, include_neutral: bool = False) -> EbayScore:
        """Net positive-minus-negative score over all scopes.

        percent_positive is pos/(pos+neg), or pos/(pos+neu+neg) when
        neutrals are configured into the denominator; absent when the
        denominator is zero.
        """
        pos = neu = neg = 0
        for rating in self.latest_ratings_for(ratee):
            if rating.value > 0:
                pos += 1
            elif rating.value < 0:
                neg += 1
            else:
                neu += 1
        denom = pos + neg + (neu if include_neutral else 0)
        percent = pos / denom if denom else None
        return EbayScore(net=pos - neg, percent_positive=percent,
                         positive=pos, neutral=neu, negative=neg)

    def snapshot(self) -> dict:
        """Copy of the key -> rating map, for comparison and replay checks."""
        return dict(self._by_key)


__all__ = ["Feedback", "Rating", "RatingStore", "EbayScore", "normalize_scope"]
