"""Explicit non-filling locally maximal product-free sets.

* dihedral groups D(2n), n odd and at least 13: five arithmetic families;
* the 7-element set in D(44);
* extraspecial groups of order at least 512: S = X u Ua u Ub;
* E*C4 groups: any greedy maximal extension of {c^2}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .elemset import ElemSet
from .errors import DomainError, FrameTooSmall, NotCentralProductC4, PreconditionViolated
from .groups import ExtraspecialFrame, FiniteGroup, build_group, generated_subgroup_mask
from .kernels import kernel_for, stream_state
from .pfs import WitnessReport, inverse_set, product_set, verify_set

# n mod 10 -> (offset c with k = (n + c) / 5, family label, set name, least admissible k)
_DIHEDRAL_FAMILIES = {
    1: (4, "5k-4", "W", 5),
    3: (2, "5k-2", "S", 3),
    5: (0, "5k", "S", 3),
    7: (-2, "5k+2", "U", 3),
    9: (6, "5k-6", "V", 5),
}


@dataclass(frozen=True)
class DihedralWitnessPlan:
    """Exponents i of x^i and j of x^j*y in the witness for D(2n).

    ``source`` is "printed" when the family's reference set is used and
    "corrected" when that set fails verification and a repaired set of the
    same shape is used instead (see ``printed_dihedral_plan``).
    """

    n: int
    k: int
    family: str
    set_name: str
    rotation_exponents: tuple[int, ...]
    reflection_exponents: tuple[int, ...]
    source: str = "printed"


def _progressions(name: str, k: int) -> tuple[range, range]:
    if name in ("S", "V"):
        return range(k, 3 * k - 1, 2), range(0, k)
    if name == "U":
        return range(k - 2, 3 * k - 1, 2), range(0, k - 2)
    return range(k - 2, 3 * k - 3, 2), range(0, k - 2)  # W


def printed_dihedral_plan(n: int) -> DihedralWitnessPlan:
    """The reference set for the family covering n (may fail to verify)."""
    if n % 2 == 0 or n < 13:
        raise DomainError(f"dihedral witnesses need an odd n >= 13, got {n}")
    c, family, name, k_min = _DIHEDRAL_FAMILIES[n % 10]
    k = (n + c) // 5
    if k % 2 == 0 or k < k_min:
        raise AssertionError(f"family arithmetic broke for n={n}")
    rot, ref = _progressions(name, k)
    return DihedralWitnessPlan(n, k, family, name, tuple(rot), tuple(ref))


def dihedral_plan(n: int) -> DihedralWitnessPlan:
    """Which family covers n, and the exponents of the set that is returned.

    Two reference sets do not verify and are replaced by sets of the same
    shape: the 5k-6 set V (never product-free: its rotation products wrap
    onto its own rotations) becomes {x^(k-2), x^k, ..., x^(3k-6); y, ...,
    x^(k-3)y}, and the 5k+2 set U at k = 3 (n = 17, not locally maximal:
    x^16 can be added) becomes {x^3, x^5, x^7, x^9; y, xy, x^2y}.
    """
    plan = printed_dihedral_plan(n)
    k = plan.k
    if plan.set_name == "V":
        return replace(plan, rotation_exponents=tuple(range(k - 2, 3 * k - 5, 2)),
                       reflection_exponents=tuple(range(0, k - 2)), source="corrected")
    if plan.set_name == "U" and k == 3:
        return replace(plan, rotation_exponents=tuple(range(k, 3 * k + 1, 2)),
                       reflection_exponents=tuple(range(0, k)), source="corrected")
    return plan


def dihedral_set(group: FiniteGroup, plan: DihedralWitnessPlan) -> ElemSet:
    """The set described by ``plan`` inside ``group`` = D(2n), without verification."""
    return _dihedral_elements(group, plan.rotation_exponents, plan.reflection_exponents)


def _dihedral_elements(group: FiniteGroup, rot: tuple[int, ...], ref: tuple[int, ...]) -> ElemSet:
    x, y = group.index_of("x"), group.index_of("y")
    idx = [group.power(x, i) for i in rot] + [group.mul(group.power(x, j), y) for j in ref]
    return ElemSet.from_indices(group, idx)


def dihedral_witness(n: int) -> ElemSet:
    """Non-filling locally maximal product-free set in D(2n) for odd n >= 13.

    The set is verified; for the reference S and U sets, x^(3k) is also
    checked to lie outside S u SS.
    """
    plan = dihedral_plan(n)
    group = build_group(f"D({2 * n})")
    s = dihedral_set(group, plan)
    report = verify_set(s)
    if not report.is_nonfilling_lmpfs:
        raise AssertionError(f"dihedral witness for n={n} failed verification: {report}")
    excluded = group.power(group.index_of("x"), 3 * plan.k)
    if plan.source == "printed" and plan.set_name in ("S", "U") and excluded in (s | product_set(s, s)):
        raise AssertionError(f"x^{3 * plan.k} lies in S u SS for n={n}")
    return s


def d44_witness() -> ElemSet:
    """The 7-element set {x^2, x^5, x^8, x^18, x^21, x^5 y, x^16 y} in D(44)."""
    group = build_group("D(44)")
    s = _dihedral_elements(group, (2, 5, 8, 18, 21), (5, 16))
    report = verify_set(s)
    if not report.is_nonfilling_lmpfs:
        raise AssertionError(f"D(44) witness failed verification: {report}")
    return s


def excluded_element(s: ElemSet) -> int | None:
    """Least non-identity element outside S u SS (None if S fills)."""
    cover = (s | product_set(s, s)).bits | 1
    rest = ((1 << s.group.order) - 1) & ~cover
    return (rest & -rest).bit_length() - 1 if rest else None


# ---------------------------------------------------------------------------
# extraspecial groups


@dataclass(frozen=True)
class ExtraspecialParts:
    """Pieces of the extraspecial construction, kept for inspection and tests."""

    E: ElemSet
    K: ElemSet
    U: ElemSet
    X: ElemSet
    S: ElemSet


def _frame_of(obj: FiniteGroup | ExtraspecialFrame) -> ExtraspecialFrame:
    if isinstance(obj, ExtraspecialFrame):
        return obj
    if obj.frame is None:
        raise PreconditionViolated(f"{obj.spec_string} was not built with a generator frame")
    return obj.frame


def extraspecial_parts(frame: FiniteGroup | ExtraspecialFrame) -> ExtraspecialParts:
    frame = _frame_of(frame)
    g = frame.group
    if frame.c4_gen is not None:
        raise PreconditionViolated("frame is an E*C4 group, not extraspecial")
    if g.order <= 128 or frame.Q_gens is None or len(frame.H_gens) < 2:
        raise FrameTooSmall(f"the construction needs order at least 512, got {g.order}")
    alpha, beta = frame.K_gens
    a, b = frame.Q_gens
    z = frame.z
    ds = [0, alpha, beta, g.mul(alpha, beta)]
    h_choices = [[0, ai, bi, g.mul(ai, bi)] for ai, bi in frame.H_gens]
    u = []
    for d in ds:
        for hs in itertools.product(*h_choices):
            x = d
            for h in hs:
                x = g.mul(x, h)
            if g.elem_order[x] == 4:
                u.append(x)
    U = ElemSet.from_indices(g, u)
    if frame.K_kind == "D8":
        X = ElemSet.from_indices(g, [z, g.mul(z, beta), g.mul(z, g.mul(alpha, beta))])
    else:
        X = ElemSet.from_indices(g, [z])
    Ua = ElemSet.from_indices(g, [g.mul(x, a) for x in U])
    Ub = ElemSet.from_indices(g, [g.mul(x, b) for x in U])
    K = ElemSet.from_mask(g, generated_subgroup_mask(g, frame.K_gens))
    E = ElemSet.from_mask(g, generated_subgroup_mask(g, [alpha, beta, *itertools.chain(*frame.H_gens)]))
    return ExtraspecialParts(E, K, U, X, X | Ua | Ub)


def extraspecial_witness(frame: FiniteGroup | ExtraspecialFrame) -> ElemSet:
    """S = X u Ua u Ub for an extraspecial group of order >= 512, with its structural checks."""
    frame = _frame_of(frame)
    parts = extraspecial_parts(frame)
    g = frame.group
    U, E, K, S = parts.U, parts.E, parts.K, parts.S
    U_inv = inverse_set(U)
    order4_in_E = ElemSet.from_mask(g, E.mask() & (g.elem_order == 4))
    z_set = ElemSet.from_indices(g, [frame.z])
    checks = {
        "U and U^-1 disjoint": U.isdisjoint(U_inv),
        "U u U^-1 = order-4 elements of E": (U | U_inv) == order4_in_E,
        "E \\ K inside UUz": (E - K) <= product_set(product_set(U, U), z_set),
        "a not in S u SS": frame.Q_gens[0] not in (S | product_set(S, S)),
        "|S| = |X| + 2|U|": len(S) == len(parts.X) + 2 * len(U),
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise AssertionError(f"extraspecial construction failed: {failed}")
    report = verify_set(S)
    if not report.is_nonfilling_lmpfs:
        raise AssertionError(f"extraspecial witness failed verification: {report}")
    return S


def central_c4_witness(frame: FiniteGroup | ExtraspecialFrame, seed: int = 0) -> ElemSet:
    """Grow {c^2} by seeded random addable elements until locally maximal (E*C4 groups)."""
    if isinstance(frame, FiniteGroup) and frame.frame is None:
        raise NotCentralProductC4(f"{frame.spec_string} was not built as an E*C4 group")
    frame = _frame_of(frame)
    if frame.c4_gen is None:
        raise NotCentralProductC4(f"{frame.group.spec_string} has no central C4 generator")
    g = frame.group
    c = frame.c4_gen
    z = g.mul(c, c)
    members, fills = kernel_for(g).greedy([z], stream_state(seed, 0))
    s = ElemSet.from_indices(g, members)
    if not np.all(g.elem_order[s.as_array()] == 2):
        raise AssertionError("greedy extension of {c^2} picked an element of order 4")
    if c in (s | product_set(s, s)):
        raise AssertionError("c lies in S u SS")
    report = verify_set(s)
    if not report.is_nonfilling_lmpfs:
        raise AssertionError(f"E*C4 witness failed verification: {report}")
    return s


def witness_record(s: ElemSet, excluded: int | None = None, **extra) -> dict:
    """JSON-ready description: group, set labels, checks and an element missing from S u SS."""
    report: WitnessReport = verify_set(s)
    if excluded is None:
        excluded = excluded_element(s)
    g = s.group
    record = {
        "group_spec": g.spec_string,
        "set": s.labels(),
        "checks": report.as_dict(),
        "excluded_element": g.labels[excluded] if excluded is not None else None,
    }
    record.update(extra)
    return record
