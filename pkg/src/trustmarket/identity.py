"""Tiered credential classification and duplicate-proof registration.

A registration request carries up to three cumulative credential blocks
(personal, business, evidence).  The longest fully complete prefix decides
the profile tier: personal only is Low, personal+business is Medium, all
three is High.  Business identity strings (national id, bank/card number)
are normalized and held unique across all live accounts, so the same
person cannot operate parallel identities, and a verified tier earns a
configurable initial trust score that gives brand-new sellers a non-zero
starting point.
"""

from dataclasses import dataclass, field
from enum import IntEnum
import re

from .errors import DuplicateIdentity, IncompleteCredentials, UnknownAccount


class ProfileTier(IntEnum):
    """Low < Medium < High, by credential completeness."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_label(cls, text: str) -> "ProfileTier":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown profile tier {text!r}") from None


@dataclass(frozen=True)
class PersonalDetails:
    full_name: str = ""
    address: str = ""
    phone: str = ""
    city: str = ""
    country: str = ""

    def complete(self) -> bool:
        return all(v.strip() for v in (self.full_name, self.address,
                                       self.phone, self.city, self.country))


@dataclass(frozen=True)
class BusinessDetails:
    national_id: str = ""        # national id or driving licence number
    bank_or_card: str = ""       # bank account or credit card number
    business_phone: str = ""
    business_address: str = ""

    def complete(self) -> bool:
        return all(v.strip() for v in (self.national_id, self.bank_or_card,
                                       self.business_phone, self.business_address))


@dataclass(frozen=True)
class EvidenceDetails:
    reference_account: str = ""       # reference marketplace account
    id_document: str = ""             # token for the scanned id/licence
    registration_document: str = ""   # token for the company registration scan
    signed_declaration: bool = False

    def complete(self) -> bool:
        return (all(v.strip() for v in (self.reference_account, self.id_document,
                                        self.registration_document))
                and self.signed_declaration)


@dataclass(frozen=True)
class CredentialSet:
    """Up to three cumulative blocks; later blocks require earlier ones."""

    personal: PersonalDetails | None = None
    business: BusinessDetails | None = None
    evidence: EvidenceDetails | None = None

    def __post_init__(self):
        if self.evidence is not None and self.business is None:
            raise ValueError("evidence block requires a business block")
        if self.business is not None and self.personal is None:
            raise ValueError("business block requires a personal block")

    def to_dict(self) -> dict:
        out: dict = {}
        if self.personal is not None:
            out["personal"] = vars(self.personal).copy()
        if self.business is not None:
            out["business"] = vars(self.business).copy()
        if self.evidence is not None:
            out["evidence"] = vars(self.evidence).copy()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CredentialSet":
        personal = PersonalDetails(**data["personal"]) if "personal" in data else None
        business = BusinessDetails(**data["business"]) if "business" in data else None
        evidence = EvidenceDetails(**data["evidence"]) if "evidence" in data else None
        return cls(personal=personal, business=business, evidence=evidence)


_NOT_ALNUM = re.compile(r"[^0-9a-z]+")


def normalize_identity(value: str) -> str:
    """Trim, case-fold and strip separators, so "AB-12 34" == "ab1234"."""
    return _NOT_ALNUM.sub("", value.strip().casefold())


def classify_profile(credentials: CredentialSet) -> ProfileTier:
    """Map a credential set to its profile tier.

    The tier is the longest complete prefix of (personal, business,
    evidence).  An incomplete or missing block ends the prefix; anything
    short of a complete personal block is rejected outright, since that
    block is the minimum needed to operate at all.
    """
    personal = credentials.personal
    if personal is None or not personal.complete():
        raise IncompleteCredentials(
            "a complete personal-details block is the minimum to register")
    tier = ProfileTier.LOW
    if credentials.business is not None and credentials.business.complete():
        tier = ProfileTier.MEDIUM
        if credentials.evidence is not None and credentials.evidence.complete():
            tier = ProfileTier.HIGH
    return tier


def _default_initial_trust() -> dict:
    return {ProfileTier.LOW: 0.0, ProfileTier.MEDIUM: 0.15, ProfileTier.HIGH: 0.30}


@dataclass(frozen=True)
class PolicyConfig:
    """Initial trust granted per tier; must be monotone in the tier order."""

    initial_trust: dict = field(default_factory=_default_initial_trust)

    def __post_init__(self):
        table = self.initial_trust
        for tier in ProfileTier:
            if tier not in table:
                raise ValueError(f"initial_trust missing tier {tier.label}")
            score = table[tier]
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"initial_trust[{tier.label}] out of [0,1]: {score}")
        if not (table[ProfileTier.LOW] <= table[ProfileTier.MEDIUM]
                <= table[ProfileTier.HIGH]):
            raise ValueError("initial_trust must be monotone Low <= Medium <= High")


DEFAULT_POLICY = PolicyConfig()


def initial_trust(tier: ProfileTier, config: PolicyConfig = DEFAULT_POLICY) -> float:
    """Starting trust score in [0,1] for a freshly verified account."""
    return config.initial_trust[tier]


@dataclass
class Account:
    account_id: str
    credentials: CredentialSet
    tier: ProfileTier
    registered_at: int
    is_seller: bool = True
    is_buyer: bool = True


class Registry:
    """Account registry with uniqueness indexes over identity strings.

    Single-writer, many-reader: all mutations go through one writer;
    concurrent readers see a consistent snapshot between writes.
    """

    def __init__(self):
        self.accounts: dict[str, Account] = {}
        self._by_national_id: dict[str, str] = {}
        self._by_bank_or_card: dict[str, str] = {}
        self._seq = 0

    def __contains__(self, account_id: str) -> bool:
        return account_id in self.accounts

    def __len__(self) -> int:
        return len(self.accounts)

    def get(self, account_id: str) -> Account:
        try:
            return self.accounts[account_id]
        except KeyError:
            raise UnknownAccount(f"no account {account_id!r}") from None

    def register(self, credentials: CredentialSet, *, is_seller: bool = True,
                 is_buyer: bool = True) -> Account:
        """Classify, enforce identity uniqueness, and append a new account.

        Identity strings are indexed even when the business block is
        incomplete, so a half-filled block cannot smuggle a reused id past
        the duplicate check.  Rejected requests leave the registry (and
        the id sequence) untouched.
        """
        tier = classify_profile(credentials)
        nid = bank = None
        if credentials.business is not None:
            nid = normalize_identity(credentials.business.national_id) or None
            bank = normalize_identity(credentials.business.bank_or_card) or None
        if nid is not None and nid in self._by_national_id:
            raise DuplicateIdentity(
                f"national id already registered to {self._by_national_id[nid]}")
        if bank is not None and bank in self._by_bank_or_card:
            raise DuplicateIdentity(
                f"bank/card already registered to {self._by_bank_or_card[bank]}")
        self._seq += 1
        account = Account(
            account_id=f"A{self._seq:06d}",
            credentials=credentials,
            tier=tier,
            registered_at=self._seq,
            is_seller=is_seller,
            is_buyer=is_buyer,
        )
        self.accounts[account.account_id] = account
        if nid is not None:
            self._by_national_id[nid] = account.account_id
        if bank is not None:
            self._by_bank_or_card[bank] = account.account_id
        return account

    def national_ids(self) -> set:
        return set(self._by_national_id)

    def bank_or_cards(self) -> set:
        return set(self._by_bank_or_card)


__all__ = [
    "ProfileTier", "PersonalDetails", "BusinessDetails", "EvidenceDetails",
    "CredentialSet", "PolicyConfig", "DEFAULT_POLICY", "Account", "Registry",
    "classify_profile", "initial_trust", "normalize_identity",
]
