"""Append-only JSONL event log and deterministic state replay.

One JSON object per line, UTF-8, strictly increasing sequence numbers.
A single process owns the log for writing (advisory lock around each
append); any number of readers may scan it.  Replay feeds the events
back through the registry and rating store: structural damage stops the
scan with the offending line number, while domain rejections (duplicate
identity, stale rating and so on) are collected per event exactly as
the original writer would have seen them.
"""

import fcntl
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorruptLog, TrustMarketError
from .identity import CredentialSet, Registry
from .ratings import Rating, RatingStore

KIND_REGISTER = "register"
KIND_LISTING = "listing"
KIND_DEAL = "deal"
KIND_RATING = "rating"
KINDS = (KIND_REGISTER, KIND_LISTING, KIND_DEAL, KIND_RATING)


@dataclass(frozen=True)
class EventRecord:
    seq: int
    kind: str
    at: int
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {"seq": self.seq, "kind": self.kind, "at": self.at,
             "payload": self.payload},
            sort_keys=True, separators=(",", ":"))


def _parse_line(line: str, line_no: int) -> EventRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CorruptLog(f"not valid JSON ({exc.msg})", line_no) from exc
    if not isinstance(data, dict):
        raise CorruptLog("record is not an object", line_no)
    try:
        seq = data["seq"]
        kind = data["kind"]
        at = data["at"]
        payload = data["payload"]
    except KeyError as exc:
        raise CorruptLog(f"missing field {exc.args[0]!r}", line_no) from exc
    if not isinstance(seq, int) or not isinstance(at, int):
        raise CorruptLog("seq and at must be integers", line_no)
    if kind not in KINDS:
        raise CorruptLog(f"unknown kind {kind!r}", line_no)
    if not isinstance(payload, dict):
        raise CorruptLog("payload must be an object", line_no)
    return EventRecord(seq=seq, kind=kind, at=at, payload=payload)


class EventLog:
    """Reader/writer handle on one log file.

    Appends take an exclusive advisory lock for the duration of the
    write, so a stray second writer blocks instead of interleaving.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._last_seq = 0
        if self.path.exists():
            for _, record in self.scan():
                self._last_seq = record.seq

    def scan(self):
        """Yield (line_no, record) pairs, validating structure."""
        if not self.path.exists():
            return
        last_seq = 0
        with open(self.path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, 1):
                if not line.strip():
                    raise CorruptLog("blank line", line_no)
                record = _parse_line(line, line_no)
                if record.seq <= last_seq:
                    raise CorruptLog(
                        f"sequence {record.seq} not greater than previous "
                        f"{last_seq}", line_no)
                last_seq = record.seq
                yield line_no, record

    def records(self):
        for _, record in self.scan():
            yield record

    @property
    def last_seq(self) -> int:
        return self._last_seq

    def append(self, kind: str, payload: dict, at: int | None = None) -> EventRecord:
        if kind not in KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        seq = self._last_seq + 1
        record = EventRecord(seq=seq, kind=kind,
                             at=seq if at is None else at, payload=payload)
        with open(self.path, "a", encoding="utf-8") as handle:
            fcntl.flock(handle.fileno(), fcntl.LOCK_EX)
            try:
                handle.write(record.to_json() + "\n")
                handle.flush()
            finally:
                fcntl.flock(handle.fileno(), fcntl.LOCK_UN)
        self._last_seq = seq
        return record


# ------------------------------------------------------------------
# replay
# ------------------------------------------------------------------

@dataclass
class MarketState:
    """Registry and store reconstructed from a log, plus what bounced."""

    registry: Registry = field(default_factory=Registry)
    store: RatingStore = field(default_factory=RatingStore)
    rejections: list = field(default_factory=list)   # (line_no, seq, message)
    last_seq: int = 0

    def describe(self) -> dict:
        """Canonical snapshot for state-equality comparisons."""
        ratings = {
            "|".join(key): (r.value, r.cost, r.at)
            for key, r in self.store.snapshot().items()}
        accounts = {
            account_id: account.tier.label
            for account_id, account in sorted(self.registry.accounts.items())}
        return {"accounts": accounts, "revision": self.store.revision,
                "ratings": dict(sorted(ratings.items())),
                "rejections": list(self.rejections)}


def apply_event(record: EventRecord, state: MarketState, line_no: int = 0):
    """Feed one event into the state; returns the new account on a
    successful registration, else None.

    Raises domain errors for the caller to collect; malformed payloads
    count as structural damage.
    """
    try:
        if record.kind == KIND_REGISTER:
            credentials = CredentialSet.from_dict(record.payload["credentials"])
            return state.registry.register(
                credentials,
                is_seller=record.payload.get("is_seller", True),
                is_buyer=record.payload.get("is_buyer", True))
        if record.kind == KIND_RATING:
            rating = Rating(
                rater=record.payload["rater"],
                ratee=record.payload["ratee"],
                scope=record.payload["scope"],
                value=record.payload["value"],
                cost=record.payload["cost"],
                at=record.payload.get("at", record.at))
            state.store.record(rating, registry=state.registry)
            return None
        # listing and deal events are informational trace, no state
        return None
    except TrustMarketError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptLog(f"malformed {record.kind} payload: {exc}",
                         line_no) from exc


def replay(path) -> MarketState:
    """Rebuild market state from a log, collecting domain rejections."""
    state = MarketState()
    log = EventLog(path)
    for line_no, record in log.scan():
        try:
            apply_event(record, state, line_no)
        except CorruptLog:
            raise
        except TrustMarketError as exc:
            state.rejections.append((line_no, record.seq, str(exc)))
        state.last_seq = record.seq
    return state


__all__ = [
    "EventRecord", "EventLog", "MarketState", "apply_event", "replay",
    "KIND_REGISTER", "KIND_LISTING", "KIND_DEAL", "KIND_RATING", "KINDS",
]
