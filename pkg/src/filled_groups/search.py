"""Searches for locally maximal product-free sets that do not fill the group.

* ``random_nonfilling_lmpfs``: random greedy growth with restarts.
* ``exhaustive_filled_check``: every locally maximal product-free set is
  examined, via a direct check of all sets of size 1 and 2 followed by
  recursive extension of one representative triple per automorphism orbit.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .automorphisms import Automorphisms, automorphism_group
from .elemset import ElemSet, indices_to_bits
from .errors import ExhaustiveCapExceeded, GroupMismatch, PreconditionViolated
from .groups import FiniteGroup, involution_restriction_center
from .kernels import MODE_ALL, MODE_FIRST, MODE_NONFILLING, kernel_for, stream_state
from .pfs import WitnessReport, verify_set

DEFAULT_EXHAUSTIVE_CAP = 128
OPT_IN_ORDER = 64


@dataclass(frozen=True)
class SearchConfig:
    rng_seed: int = 0
    max_restarts: int = 10_000
    time_budget: float = 60.0
    involution_seed: Literal["auto", "on", "off"] = "auto"
    parallel_width: int = 1
    orbit_reduction: bool = True
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    exhaustive_opt_in: bool = False
    backend: str | None = None

    def __post_init__(self):
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be at least 1")
        if not self.time_budget > 0:
            raise ValueError("time_budget must be positive")
        if self.involution_seed not in ("auto", "on", "off"):
            raise ValueError("involution_seed must be auto, on or off")
        if self.parallel_width < 1:
            raise ValueError("parallel_width must be at least 1")
        if not 0 <= self.rng_seed < 1 << 64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")


@dataclass
class Verdict:
    """Outcome of a filledness decision.

    ``filled`` is None when the budget ran out before a decision. ``details``
    carries rule-specific data such as the normal subgroup used for a
    quotient step.
    """

    filled: bool | None
    witness: ElemSet | None = None
    rule_chain: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.filled is None:
            return "undecided"
        return "filled" if self.filled else "not-filled"


def verify_witness(group: FiniteGroup, s: ElemSet) -> WitnessReport:
    if s.group is not group:
        raise GroupMismatch("set is bound to a different group")
    return verify_set(s)


def _checked_witness(group: FiniteGroup, members) -> ElemSet:
    s = ElemSet.from_indices(group, members)
    if not verify_set(s).is_nonfilling_lmpfs:  # the kernels are trusted only after this check
        raise AssertionError(f"search produced an invalid witness {s!r}")
    return s


def involution_restriction(group: FiniteGroup, mode: str) -> int | None:
    """The central involution z to restrict to, or None.

    ``auto`` restricts whenever G has exponent 4 and all elements of order 4
    square to one central involution z; then every non-filling locally
    maximal product-free set contains z and consists of involutions.
    """
    if mode == "off":
        return None
    z = involution_restriction_center(group)
    if mode == "on" and z is None:
        raise PreconditionViolated(
            f"{group.spec_string}: involution restriction needs exponent 4 with all order-4 elements squaring to one central involution"
        )
    return z


def random_nonfilling_lmpfs(group: FiniteGroup, cfg: SearchConfig = SearchConfig(), stats: dict | None = None) -> ElemSet | None:
    """Random greedy search; None when the restart or time budget is exhausted."""
    if group.order < 2:
        raise PreconditionViolated("group must have at least two elements")
    z = involution_restriction(group, cfg.involution_seed)
    start = [z] if z is not None else []
    kernel = kernel_for(group, cfg.backend)
    deadline = time.monotonic() + cfg.time_budget
    t0 = time.monotonic()
    found = None
    restarts = 0
    for r in range(cfg.max_restarts):
        if r and time.monotonic() > deadline:
            break
        restarts += 1
        members, fills = kernel.greedy(start, stream_state(cfg.rng_seed, r))
        if not fills:
            found = _checked_witness(group, members)
            break
    if stats is not None:
        stats["restarts"] = stats.get("restarts", 0) + restarts
        stats["nfs_seconds"] = stats.get("nfs_seconds", 0.0) + time.monotonic() - t0
    return found


# ---------------------------------------------------------------------------
# orbit representatives


def product_free_triples(group: FiniteGroup, within: np.ndarray | None = None, containing: int | None = None) -> np.ndarray:
    """All product-free 3-sets as rows (a < b < c), in lexicographic order."""
    n = group.order
    pool = np.arange(1, n) if within is None else np.flatnonzero(within)
    pool = pool[pool != 0]
    if containing is not None:
        rest = pool[pool != containing]
        i, j = np.triu_indices(len(rest), 1)
        trip = np.sort(np.stack([np.full(i.size, containing), rest[i], rest[j]], axis=1), axis=1)
    else:
        m = len(pool)
        if m < 3:
            return np.zeros((0, 3), dtype=np.intp)
        idx = np.array(np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")).reshape(3, -1)
        keep = (idx[0] < idx[1]) & (idx[1] < idx[2])
        trip = pool[idx[:, keep]].T
    if trip.size == 0:
        return np.zeros((0, 3), dtype=np.intp)
    t = group.table
    bad = np.zeros(len(trip), dtype=bool)
    for p in range(3):
        for q in range(3):
            prod = t[trip[:, p], trip[:, q]]
            bad |= (prod == trip[:, 0]) | (prod == trip[:, 1]) | (prod == trip[:, 2])
    trip = trip[~bad]
    order = np.lexsort((trip[:, 2], trip[:, 1], trip[:, 0]))
    return trip[order].astype(np.intp)


def _orbit_reps(triples: np.ndarray, perms: list[np.ndarray], n: int) -> np.ndarray:
    if len(triples) == 0 or not perms:
        return triples
    codes = (triples[:, 0] * n + triples[:, 1]) * n + triples[:, 2]
    rows, cols = [], []
    base = np.arange(len(triples))
    for perm in perms:
        img = np.sort(perm[triples], axis=1)
        img_codes = (img[:, 0] * n + img[:, 1]) * n + img[:, 2]
        pos = np.searchsorted(codes, img_codes)
        if np.any(pos >= len(codes)) or np.any(codes[np.minimum(pos, len(codes) - 1)] != img_codes):
            raise ValueError("triple family is not invariant under the automorphisms")
        rows.append(base)
        cols.append(pos)
    r, c = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(len(triples),) * 2)
    _, labels = connected_components(graph, directed=True, connection="weak")
    first = np.full(labels.max() + 1, len(triples))
    np.minimum.at(first, labels, base)  # triples are sorted, so the first index is the lex-least member
    return triples[np.sort(first)]


def orbit_representatives_triples(
    group: FiniteGroup,
    auts: Automorphisms | None,
    within: np.ndarray | None = None,
    containing: int | None = None,
) -> list[ElemSet]:
    """Lexicographically least member of each automorphism orbit of product-free triples.

    ``auts=None`` disables the reduction and returns every triple. Orbits are
    computed from ``auts.generators``, which generate the whole automorphism
    group even when the full list was not stored. ``within``/``containing``
    restrict to triples inside an automorphism-invariant set and through a
    fixed characteristic element.
    """
    triples = product_free_triples(group, within, containing)
    reps = _orbit_reps(triples, auts.generators if auts is not None else [], group.order)
    return [ElemSet.from_indices(group, row) for row in reps.tolist()]


# ---------------------------------------------------------------------------
# exhaustive search


def _small_sets(group: FiniteGroup) -> list[tuple[int, ...]]:
    """Product-free sets of size 1 and 2, singletons first, each in lexicographic order."""
    t = group.table
    out: list[tuple[int, ...]] = [(a,) for a in range(1, group.order)]
    for a in range(1, group.order):
        for b in range(a + 1, group.order):
            s = (a, b)
            if any(int(t[p, q]) in s for p in s for q in s):
                continue
            out.append(s)
    return out


def _small_set_phase(group: FiniteGroup, kernel, collect_all: bool) -> tuple[list[tuple[int, ...]], int]:
    full = (1 << group.order) - 1
    found = []
    lm = 0
    for s in _small_sets(group):
        cover, block = kernel.analyze(s)
        if block == full:
            lm += 1
            if cover != full:
                found.append(s)
                if not collect_all:
                    break
    return found, lm


def _extend_worker(payload):
    group, backend, start, mode, allowed = payload
    kernel = kernel_for(group, backend)
    stopped, records, nodes, leaves, lm = kernel.extend(start, mode, allowed)
    return [r[0] for r in records if not r[1]], nodes, lm


def _check_cap(group: FiniteGroup, cfg: SearchConfig) -> None:
    n = group.order
    if n > cfg.exhaustive_cap:
        raise ExhaustiveCapExceeded(f"order {n} exceeds the exhaustive cap {cfg.exhaustive_cap}")
    if n >= OPT_IN_ORDER and not cfg.exhaustive_opt_in:
        raise ExhaustiveCapExceeded(f"exhaustive search at order {n} requires exhaustive_opt_in")


def _triple_plan(group: FiniteGroup, cfg: SearchConfig):
    z = involution_restriction(group, cfg.involution_seed)
    allowed_mask = group.elem_order == 2 if z is not None else None
    auts = automorphism_group(group) if cfg.orbit_reduction else None
    reps = orbit_representatives_triples(group, auts, within=allowed_mask, containing=z)
    allowed = indices_to_bits(np.flatnonzero(allowed_mask).tolist()) if allowed_mask is not None else None
    return z, auts, reps, allowed


def exhaustive_filled_check(group: FiniteGroup, cfg: SearchConfig = SearchConfig()) -> Verdict:
    """Decide filledness by examining every locally maximal product-free set.

    Returns the first non-filling set met (small sets first, then triples in
    lexicographic order of their orbit representatives). With
    ``parallel_width > 1`` every representative is searched and the
    lexicographically least witness is returned.
    """
    _check_cap(group, cfg)
    t0 = time.monotonic()
    kernel = kernel_for(group, cfg.backend)
    stats: dict = {"small_sets_lm": 0, "orbits": 0, "orbits_examined": 0, "sets_extended": 0, "lm_sets": 0}
    chain = ["exhaustive:small-sets"]
    found, stats["small_sets_lm"] = _small_set_phase(group, kernel, collect_all=False)
    if found:
        stats["elapsed"] = time.monotonic() - t0
        return Verdict(False, _checked_witness(group, found[0]), chain + ["exhaustive-witness"], stats)

    z, auts, reps, allowed = _triple_plan(group, cfg)
    chain.append("exhaustive:triples")
    if z is not None:
        chain.append("involution-restriction")
        stats["restricted_to"] = int(z)
    if auts is not None:
        chain.append("orbit-reduction")
        stats["automorphisms"] = auts.size
    stats["orbits"] = len(reps)

    witness = None
    starts = [r.indices() for r in reps]
    if cfg.parallel_width > 1 and len(starts) > 1:
        payloads = [(group, cfg.backend, s, MODE_FIRST, allowed) for s in starts]
        with ProcessPoolExecutor(max_workers=cfg.parallel_width) as pool:
            results = list(pool.map(_extend_worker, payloads))
        candidates = []
        for nonfilling, nodes, lm in results:
            stats["sets_extended"] += nodes
            stats["lm_sets"] += lm
            candidates.extend(nonfilling)
        stats["orbits_examined"] = len(starts)
        if candidates:
            witness = min(candidates)
    else:
        for s in starts:
            stopped, records, nodes, leaves, lm = kernel.extend(s, MODE_FIRST, allowed)
            stats["orbits_examined"] += 1
            stats["sets_extended"] += nodes
            stats["lm_sets"] += lm
            if stopped:
                witness = records[-1][0]
                break
    stats["elapsed"] = time.monotonic() - t0
    if witness is not None:
        return Verdict(False, _checked_witness(group, witness), chain + ["exhaustive-witness"], stats)
    return Verdict(True, None, chain + ["exhaustive-filled"], stats)


def all_nonfilling_lmpfs(group: FiniteGroup, cfg: SearchConfig = SearchConfig()) -> set[tuple[int, ...]]:
    """Every non-filling locally maximal product-free set, as sorted index tuples.

    Runs the same two phases as ``exhaustive_filled_check`` without stopping
    at the first hit. With orbit reduction the sets found from the
    representatives are closed under the automorphism group (which must then
    be stored in full).
    """
    _check_cap(group, cfg)
    kernel = kernel_for(group, cfg.backend)
    small, _ = _small_set_phase(group, kernel, collect_all=True)
    found = set(small)
    z, auts, reps, allowed = _triple_plan(group, cfg)
    for r in reps:
        _, records, *_ = kernel.extend(r.indices(), MODE_NONFILLING, allowed)
        found.update(rec[0] for rec in records)
    if auts is not None:
        if not auts.complete:
            raise ExhaustiveCapExceeded("closing under automorphisms needs the full automorphism list")
        found = {tuple(sorted(int(p[i]) for i in s)) for s in found for p in auts.perms}
    return found


def lmpfs_representatives(group: FiniteGroup, cfg: SearchConfig = SearchConfig()) -> list[tuple[tuple[int, ...], bool]]:
    """Every locally maximal product-free set met by the exhaustive search tree, with its fills flag.

    Sets of size 1 and 2 are listed directly; larger ones are the leaves of
    the same triple-extension tree that ``exhaustive_filled_check`` walks
    (one triple per automorphism orbit, involution restriction per
    ``cfg.involution_seed``), but without stopping at the first non-filling
    leaf. Pass ``involution_seed="off"`` to reach an automorphic image of
    every locally maximal product-free set of size >= 3.
    """
    _check_cap(group, cfg)
    kernel = kernel_for(group, cfg.backend)
    full = (1 << group.order) - 1
    out = []
    for s in _small_sets(group):
        cover, block = kernel.analyze(s)
        if block == full:
            out.append((s, cover == full))
    _, _, reps, allowed = _triple_plan(group, cfg)
    for r in reps:
        _, records, *_ = kernel.extend(r.indices(), MODE_ALL, allowed)
        out.extend((tuple(m), bool(f)) for m, f in records)
    return out
