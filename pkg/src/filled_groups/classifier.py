"""Decide whether a group is filled.

Rules are tried in this order, each recorded in the verdict's rule chain:

1. order <= 32: membership in the table of known filled groups (a miss is
   followed by the first of rules 2-6 that also excludes G, as a citation);
2. odd order -> not filled (the filled groups of odd order are C3, C5);
3. elementary abelian 2-group -> filled;
4. order 2^k with k > 7 -> not filled;
5. order 2^k p (k > 0, p an odd prime) -> not filled (optional);
6. abelian, dihedral or generalised quaternion -> not filled;
7. for each proper non-trivial normal subgroup N: index 3, or index 5 with
   an element of order 5 outside N -> not filled; G/N not filled -> not filled;
8. random search for a non-filling set;
9. exhaustive search.

Two test modes skip the shortcuts: ``table_bypass`` sends groups of order at
most 32 (including quotients met in step 7) straight to the search steps, and
``pure_search`` does so at every order.
"""

from __future__ import annotations

import hashlib
import threading
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .elemset import ElemSet
from .errors import ExhaustiveCapExceeded, OrderOutOfRange
from .groups import FiniteGroup, build_group, fingerprint, normal_subgroups, quotient, structure_predicates
from .search import SearchConfig, Verdict, exhaustive_filled_check, random_nonfilling_lmpfs

TABLE_MAX_ORDER = 32

KNOWN_FILLED_TABLE: tuple[str, ...] = (
    "EA(2)",
    "EA(4)",
    "EA(8)",
    "EA(16)",
    "EA(32)",
    "C(3)",
    "C(5)",
    "D(6)",
    "D(8)",
    "D(10)",
    "D(12)",
    "D(14)",
    "D(8)xC(2)",
    "D(22)",
    "ESM(32)",
)


def _signature(group: FiniteGroup) -> tuple:
    """Isomorphism invariant that separates the table entries from every other group of order <= 32.

    The order-16 and order-32 entries are pinned down by their involution
    counts among groups with the same centre size and class sizes; the
    extraspecial flag plus the involution count fixes the type at order 32.
    """
    return (fingerprint(group), structure_predicates(group))


@lru_cache(maxsize=None)
def _table_signatures() -> dict[tuple, str]:
    return {_signature(build_group(spec)): spec for spec in KNOWN_FILLED_TABLE}


def known_filled_members(order: int) -> list[str]:
    """Table entries of the given order."""
    if not 1 <= order <= TABLE_MAX_ORDER:
        raise OrderOutOfRange(f"the table covers orders 1..{TABLE_MAX_ORDER}, not {order}")
    return [spec for spec in KNOWN_FILLED_TABLE if build_group(spec).order == order]


def table_match(group: FiniteGroup) -> str | None:
    """The table entry isomorphic to ``group`` (decided structurally), if any."""
    if group.order > TABLE_MAX_ORDER:
        raise OrderOutOfRange(f"the table covers orders up to {TABLE_MAX_ORDER}")
    if group.order == 1:
        return None
    return _table_signatures().get(_signature(group))


@dataclass(frozen=True)
class ClassifierFlags:
    use_2kp_shortcut: bool = True
    exhaustive_opt_in: bool = False
    budgets: SearchConfig = field(default_factory=SearchConfig)
    table_bypass: bool = False
    pure_search: bool = False
    attach_witness: bool = False

    def search_config(self) -> SearchConfig:
        if self.exhaustive_opt_in and not self.budgets.exhaustive_opt_in:
            return replace(self.budgets, exhaustive_opt_in=True)
        return self.budgets

    def memo_key(self) -> tuple:
        return (self.use_2kp_shortcut, self.table_bypass, self.pure_search, self.attach_witness, self.search_config())


def _odd_prime(p: int) -> bool:
    return p > 2 and all(p % d for d in range(3, int(p**0.5) + 1, 2))


def _split_2kp(n: int) -> tuple[int, int]:
    k = (n & -n).bit_length() - 1
    return k, n >> k


class _Memo:
    """Verdicts keyed by cheap fingerprint, confirmed by an exact table digest."""

    def __init__(self):
        self._lock = threading.Lock()
        self._data: dict[tuple, list[tuple[str, Verdict]]] = {}
        self.hits = 0
        self.collisions = 0

    @staticmethod
    def digest(group: FiniteGroup) -> str:
        return hashlib.sha1(np.ascontiguousarray(group.table).tobytes()).hexdigest()

    def get(self, key: tuple, group: FiniteGroup) -> Verdict | None:
        with self._lock:
            bucket = self._data.get(key)
            if not bucket:
                return None
            d = self.digest(group)
            for dig, verdict in bucket:
                if dig == d:
                    self.hits += 1
                    return verdict
            self.collisions += 1
            return None

    def put(self, key: tuple, group: FiniteGroup, verdict: Verdict) -> None:
        with self._lock:
            self._data.setdefault(key, []).append((self.digest(group), verdict))

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self.hits = self.collisions = 0


MEMO = _Memo()


def _search(group: FiniteGroup, flags: ClassifierFlags, chain: list[str], stats: dict) -> Verdict:
    cfg = flags.search_config()
    witness = random_nonfilling_lmpfs(group, cfg, stats)
    if witness is not None:
        return Verdict(False, witness, chain + ["nfs-witness"], stats)
    chain = chain + ["nfs-exhausted"]
    try:
        ex = exhaustive_filled_check(group, cfg)
    except ExhaustiveCapExceeded as exc:
        stats["undecided_reason"] = str(exc)
        return Verdict(None, None, chain + ["undecided-at-budget"], stats)
    stats.update({f"exhaustive_{k}": v for k, v in ex.stats.items()})
    return Verdict(ex.filled, ex.witness, chain + ex.rule_chain, stats)


def _attach_witness(group: FiniteGroup, verdict: Verdict, flags: ClassifierFlags) -> Verdict:
    if verdict.filled is not False or verdict.witness is not None:
        return verdict
    cfg = flags.search_config()
    witness = random_nonfilling_lmpfs(group, cfg, verdict.stats)
    tag = "witness:nfs"
    if witness is None:
        try:
            ex = exhaustive_filled_check(group, cfg)
        except ExhaustiveCapExceeded:
            verdict.rule_chain.append("witness:unavailable")
            return verdict
        if ex.filled:
            raise AssertionError(f"{group.spec_string}: rule chain {verdict.rule_chain} contradicts exhaustive search")
        witness, tag = ex.witness, "witness:exhaustive"
    verdict.witness = witness
    verdict.rule_chain.append(tag)
    return verdict


def _rebind(verdict: Verdict, group: FiniteGroup) -> Verdict:
    """Copy of a memoized verdict whose witness is bound to ``group`` (same table, maybe another object)."""
    witness = verdict.witness
    if witness is not None and witness.group is not group:
        witness = ElemSet(group, witness.bits)
    return replace(
        verdict,
        witness=witness,
        rule_chain=list(verdict.rule_chain),
        stats=dict(verdict.stats),
        details=dict(verdict.details),
    )


def classify_filled(group: FiniteGroup, flags: ClassifierFlags = ClassifierFlags(), memo: _Memo | None = MEMO) -> Verdict:
    """Filled / not filled / undecided-at-budget, with the chain of rules that decided it."""
    key = (fingerprint(group), flags.memo_key())
    if memo is not None:
        hit = memo.get(key, group)
        if hit is not None:
            return _rebind(hit, group)
    t0 = time.monotonic()
    verdict = _classify(group, flags, memo)
    if flags.attach_witness:
        verdict = _attach_witness(group, verdict, flags)
    verdict.stats.setdefault("elapsed", time.monotonic() - t0)
    if memo is not None:
        memo.put(key, group, _rebind(verdict, group))
    return verdict


def _structural_negative(group: FiniteGroup, flags: ClassifierFlags) -> str | None:
    """First of the order/structure rules that excludes a group that is not elementary abelian."""
    n = group.order
    if n % 2:
        return "odd-order"
    k, p = _split_2kp(n)
    if p == 1 and k > 7:
        return "2^k,k>7"
    if flags.use_2kp_shortcut and k > 0 and _odd_prime(p):
        return "2^k*p"
    pred = structure_predicates(group)
    if pred.is_abelian:
        return "abelian"
    if pred.is_dihedral:
        return "dihedral"
    if pred.is_generalized_quaternion:
        return "generalized-quaternion"
    return None


def _classify(group: FiniteGroup, flags: ClassifierFlags, memo: _Memo | None) -> Verdict:
    n = group.order
    stats: dict = {}
    if n == 1:
        return Verdict(True, None, ["trivial-group"], stats)
    if flags.pure_search:
        return _search(group, flags, ["pure-search"], stats)
    if n <= TABLE_MAX_ORDER:
        if flags.table_bypass:
            return _search(group, flags, ["table-bypass"], stats)
        match = table_match(group)
        verdict = Verdict(match is not None, None, ["table"], stats)
        if match is not None:
            verdict.details["table_entry"] = match
        else:
            # the table decides; a structural rule that also excludes G is cited after it
            reason = _structural_negative(group, flags)
            if reason is not None:
                verdict.rule_chain.append(reason)
        return verdict
    if structure_predicates(group).is_elementary_abelian_2:
        return Verdict(True, None, ["elementary-abelian"], stats)
    reason = _structural_negative(group, flags)
    if reason is not None:
        return Verdict(False, None, [reason], stats)

    chain = ["normal-subgroups"]
    order5 = group.elem_order == 5
    undecided_quotients = 0
    for normal in normal_subgroups(group):
        size = len(normal)
        if size in (1, n):
            continue
        index = n // size
        if index == 3:
            return Verdict(False, None, chain + ["normal-index-3"], stats, {"normal_subgroup": normal.indices()})
        if index == 5 and not np.all(normal.mask()[order5]):
            return Verdict(False, None, chain + ["normal-index-5"], stats, {"normal_subgroup": normal.indices()})
        sub = classify_filled(quotient(group, normal), flags, memo)
        if sub.filled is False:
            return Verdict(
                False,
                None,
                chain + [f"quotient-not-filled:|N|={size}"],
                stats,
                {"normal_subgroup": normal.indices(), "quotient_rule_chain": list(sub.rule_chain)},
            )
        if sub.filled is None:
            undecided_quotients += 1
    if undecided_quotients:
        stats["undecided_quotients"] = undecided_quotients
    return _search(group, flags, chain + ["quotients-filled"], stats)


def classify_spec(spec: str, flags: ClassifierFlags = ClassifierFlags()) -> Verdict:
    return classify_filled(build_group(spec), flags)


__all__ = [
    "ClassifierFlags",
    "KNOWN_FILLED_TABLE",
    "MEMO",
    "classify_filled",
    "classify_spec",
    "known_filled_members",
    "table_match",
]
