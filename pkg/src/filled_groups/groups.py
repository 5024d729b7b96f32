"""Finite groups as immutable multiplication tables.

Every group is a dense Cayley table over indices ``0..n-1`` with the
identity at index 0. Constructors cover the atoms of the group-spec grammar
(cyclic, dihedral, generalized quaternion, elementary abelian, extraspecial,
extraspecial-times-C4) plus direct and central products.
"""

from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .elemset import ElemSet, mask_to_bits
from .errors import NotNormal, NotSubgroup, OrderCapExceeded, SpecDomainError
from .specs import Atom, GroupSpec, Product, canonical, parse_group_spec, spec_order

DEFAULT_ORDER_CAP = 4096
# Tables up to this order are checked for associativity on every triple.
EXHAUSTIVE_ASSOC_LIMIT = 512
ASSOC_SAMPLES = 100_000


class FiniteGroup:
    """Immutable multiplication-table group.

    Attributes are plain numpy arrays marked read-only: ``table[g, h]`` is the
    index of ``g*h``, ``inv[g]`` the inverse and ``elem_order[g]`` the order.
    ``labels[g]`` is a reduced word in the constructor generators; index order
    is the total order used wherever the search needs "f > x".
    """

    def __init__(
        self,
        table: np.ndarray,
        labels: Sequence[str],
        spec_string: str,
        *,
        central_involution: int | None = None,
        verify: bool = True,
    ):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise ValueError("table must be a non-empty square array")
        if len(labels) != n or len(set(labels)) != n:
            raise ValueError("labels must be unique, one per element")
        if verify:
            _check_table(table)
        table.flags.writeable = False
        self.order = n
        self.table = table
        self.labels = tuple(labels)
        self.spec_string = spec_string
        self.central_involution = central_involution
        self.frame: ExtraspecialFrame | None = None
        # coset map from the parent group when built by quotient()
        self.projection: np.ndarray | None = None

        inv = np.argmax(table == 0, axis=1).astype(np.int32)
        if verify and not (np.all(table[np.arange(n), inv] == 0) and np.all(table[inv, np.arange(n)] == 0)):
            raise ValueError("table has elements without two-sided inverses")
        inv.flags.writeable = False
        self.inv = inv
        self.elem_order = _element_orders(table)
        self.squares = table[np.arange(n), np.arange(n)].copy()
        self.squares.flags.writeable = False
        self._index = {label: i for i, label in enumerate(self.labels)}
        self._kernels: dict[str, object] = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.spec_string!r}, order={self.order})"

    def __reduce__(self):
        return (_rebuild_group, (np.array(self.table), self.labels, self.spec_string, self.central_involution))

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def power(self, g: int, k: int) -> int:
        result = 0
        for _ in range(k % int(self.elem_order[g])):
            result = int(self.table[result, g])
        return result

    def index_of(self, item: int | str) -> int:
        """Resolve an element given either as an index or as a label."""
        if isinstance(item, (int, np.integer)) and not isinstance(item, bool):
            if not 0 <= item < self.order:
                raise ValueError(f"index {item} outside group of order {self.order}")
            return int(item)
        if isinstance(item, str):
            key = item.replace(" ", "")
            if key in self._index:
                return self._index[key]
            if key.lstrip("-").isdigit():
                return self.index_of(int(key))
            raise ValueError(f"unknown element label {item!r} in {self.spec_string}")
        raise TypeError(f"cannot interpret {item!r} as an element")

    def elemset(self, items: Iterable[int | str] = ()) -> ElemSet:
        return ElemSet.from_items(self, items)

    @functools.cached_property
    def exponent(self) -> int:
        return functools.reduce(math.lcm, (int(o) for o in np.unique(self.elem_order)), 1)

    @functools.cached_property
    def conjugation(self) -> np.ndarray:
        """``conjugation[h, g] = h g h^-1``."""
        conj = self.table[self.table, self.inv[:, None]]
        conj.flags.writeable = False
        return conj

    @functools.cached_property
    def class_of(self) -> np.ndarray:
        """Class id of every element; ids follow the smallest member index."""
        ids = np.full(self.order, -1, dtype=np.int32)
        next_id = 0
        for g in range(self.order):
            if ids[g] < 0:
                ids[np.unique(self.conjugation[:, g])] = next_id
                next_id += 1
        ids.flags.writeable = False
        return ids

    @functools.cached_property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.class_of)[self.class_of]

    @functools.cached_property
    def center_mask(self) -> np.ndarray:
        mask = np.all(self.table == self.table.T, axis=1)
        mask.flags.writeable = False
        return mask


def _rebuild_group(table, labels, spec_string, central_involution):
    return FiniteGroup(table, labels, spec_string, central_involution=central_involution, verify=False)


def _check_table(table: np.ndarray) -> None:
    n = table.shape[0]
    ar = np.arange(n)
    if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
        raise ValueError("identity must be index 0")
    if not (np.all(np.sort(table, axis=1) == ar) and np.all(np.sort(table, axis=0) == ar[:, None])):
        raise ValueError("table is not a Latin square")
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        for a in range(n):
            # (a*b)*c against a*(b*c) for all b, c
            if not np.array_equal(table[table[a]], table[a][table]):
                raise ValueError("table is not associative")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
        if not np.array_equal(table[table[a, b], c], table[a, table[b, c]]):
            raise ValueError("table is not associative")


def _element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ar = np.arange(n)
    orders = np.zeros(n, dtype=np.int32)
    power = ar.copy()
    pending = np.ones(n, dtype=bool)
    k = 1
    while pending.any():
        done = pending & (power == 0)
        orders[done] = k
        pending &= ~done
        power = table[power, ar]
        k += 1
    orders.flags.writeable = False
    return orders


# ---------------------------------------------------------------------------
# constructors


def _power_word(gen: str, k: int) -> str:
    if k == 0:
        return "1"
    return gen if k == 1 else f"{gen}^{k}"


def _join_words(*parts: str) -> str:
    return "*".join(p for p in parts if p != "1") or "1"


def cyclic(n: int, gen: str = "x") -> FiniteGroup:
    i = np.arange(n)
    table = (i[:, None] + i[None, :]) % n
    labels = [_power_word(gen, k) for k in range(n)]
    return FiniteGroup(table, labels, f"C({n})", central_involution=n // 2 if n % 2 == 0 else None)


def dihedral(order: int, gens: tuple[str, str] = ("x", "y")) -> FiniteGroup:
    """D_{2m} = <x, y | x^m = y^2 = 1, xy = yx^-1>; index of x^i y^e is i + m*e."""
    m = order // 2
    i = np.arange(order)
    rot, ref = i % m, i // m
    sign = 1 - 2 * ref
    r = (rot[:, None] + sign[:, None] * rot[None, :]) % m
    e = ref[:, None] ^ ref[None, :]
    x, y = gens
    labels = [_join_words(_power_word(x, int(rot[k])), y if ref[k] else "1") for k in range(order)]
    return FiniteGroup(r + m * e, labels, f"D({order})", central_involution=m // 2 if m % 2 == 0 else None)


def quaternion(order: int, gens: tuple[str, str] = ("x", "y")) -> FiniteGroup:
    """Q_{4n} = <x, y | x^{2n} = 1, y^2 = x^n, yxy^-1 = x^-1>; index of x^i y^e is i + 2n*e."""
    n = order // 4
    m = 2 * n
    i = np.arange(order)
    rot, ref = i % m, i // m
    sign = 1 - 2 * ref
    r = (rot[:, None] + sign[:, None] * rot[None, :] + n * (ref[:, None] & ref[None, :])) % m
    e = ref[:, None] ^ ref[None, :]
    x, y = gens
    labels = [_join_words(_power_word(x, int(rot[k])), y if ref[k] else "1") for k in range(order)]
    return FiniteGroup(r + m * e, labels, f"Q({order})", central_involution=n)


def elementary_abelian(order: int) -> FiniteGroup:
    k = order.bit_length() - 1
    i = np.arange(order)
    labels = [_join_words(*(f"e{b + 1}" if g >> b & 1 else "1" for b in range(k))) for g in range(order)]
    return FiniteGroup(i[:, None] ^ i[None, :], labels, f"EA({order})", central_involution=1 if order > 1 else None)


def direct_product(
    a: FiniteGroup, b: FiniteGroup, *, words: bool = False, spec_string: str | None = None, verify: bool = True
) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """A x B with (g, h) at index g*|B| + h; also returns both embeddings."""
    na, nb = a.order, b.order
    table = (a.table[:, None, :, None].astype(np.int64) * nb + b.table[None, :, None, :]).reshape(na * nb, na * nb)
    if words:
        labels = [_join_words(la, lb) for la in a.labels for lb in b.labels]
    else:
        labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    if a.central_involution is not None:
        z = a.central_involution * nb
    elif b.central_involution is not None:
        z = b.central_involution
    else:
        z = None
    group = FiniteGroup(
        table,
        labels,
        spec_string or f"{a.spec_string}x{b.spec_string}",
        central_involution=z,
        verify=verify,
    )
    return group, np.arange(na) * nb, np.arange(nb)


def central_product(
    a: FiniteGroup, b: FiniteGroup, *, words: bool = False, spec_string: str | None = None
) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    """(A x B) / <(z_A, z_B)> for the designated central involutions z_A, z_B."""
    za, zb = a.central_involution, b.central_involution
    if za is None or zb is None:
        raise SpecDomainError(
            f"central product needs a designated central involution in both "
            f"{a.spec_string} and {b.spec_string}"
        )
    for grp, z in ((a, za), (b, zb)):
        if not grp.center_mask[z] or grp.elem_order[z] != 2:
            raise SpecDomainError(f"designated element of {grp.spec_string} is not a central involution")
    prod, emb_a, emb_b = direct_product(a, b, words=words, verify=False)
    diag = np.array([0, za * b.order + zb])
    table, reps, proj = _coset_table(prod, diag)
    group = FiniteGroup(
        table,
        [prod.labels[r] for r in reps],
        spec_string or f"{a.spec_string}*{b.spec_string}",
        central_involution=int(proj[za * b.order]),
    )
    return group, proj[emb_a], proj[emb_b]


@dataclass(frozen=True)
class ExtraspecialFrame:
    """An extraspecial (or E*C4) group with named structural generators.

    ``K_gens`` = (alpha, beta) generate K (D8 or Q8 per ``K_kind``),
    ``H_gens`` = [(a_i, b_i)] the Q8 factors H_i and ``Q_gens`` = (a, b) the
    last Q8 factor; ``c4_gen`` is the generator of the central C4 for E*C4.
    """

    group: FiniteGroup = field(repr=False)
    z: int
    K_gens: tuple[int, int]
    H_gens: tuple[tuple[int, int], ...]
    Q_gens: tuple[int, int] | None
    K_kind: str
    c4_gen: int | None = None

    @property
    def half_rank(self) -> int:
        """n in |G| = 2^(2n+5); meaningful only when a Q factor exists."""
        return len(self.H_gens)


def extraspecial(order: int, sign: int) -> FiniteGroup:
    """Extraspecial group of ``order`` = 2^(2m+1) and type ``sign`` (+1 or -1).

    Built as K * H_1 * ... * H_{m-2} * Q with every H_i and Q a copy of Q8 and
    K chosen as D8 or Q8 so the central product has the requested type
    (D8 counts as +, Q8 as -, and types multiply).
    """
    m = (order.bit_length() - 1) // 2
    k_kind = "D8" if (-1) ** (m - 1) == sign else "Q8"
    make_k = dihedral if k_kind == "D8" else quaternion
    group = make_k(8, ("r", "s"))
    alpha, beta = group.index_of("r"), group.index_of("s")
    h_gens: list[tuple[int, int]] = []
    q_gens = None
    factor_names = [(f"a{i + 1}", f"b{i + 1}") for i in range(m - 2)] + ([("a", "b")] if m >= 2 else [])
    for pos, names in enumerate(factor_names):
        factor = quaternion(8, names)
        group, emb_old, emb_new = central_product(group, factor, words=True)
        alpha, beta = int(emb_old[alpha]), int(emb_old[beta])
        h_gens = [(int(emb_old[x]), int(emb_old[y])) for x, y in h_gens]
        new = (int(emb_new[factor.index_of(names[0])]), int(emb_new[factor.index_of(names[1])]))
        if pos == len(factor_names) - 1:
            q_gens = new
        else:
            h_gens.append(new)
    kind = "ESP" if sign > 0 else "ESM"
    group = _respec(group, f"{kind}({order})")
    z = int(group.table[alpha, alpha])
    group.frame = ExtraspecialFrame(group, z, (alpha, beta), tuple(h_gens), q_gens, k_kind)
    return group


def extraspecial_c4(order: int) -> FiniteGroup:
    """E * C4 with E extraspecial of order ``order/2`` and C4 = <c>, c^2 = z."""
    inner = extraspecial(order // 2, +1)
    f = inner.frame
    group, emb_e, emb_c = central_product(inner, cyclic(4, "c"), words=True, spec_string=f"ESC4({order})")
    remap = lambda pair: (int(emb_e[pair[0]]), int(emb_e[pair[1]]))  # noqa: E731
    group.frame = ExtraspecialFrame(
        group,
        int(emb_e[f.z]),
        remap(f.K_gens),
        tuple(remap(p) for p in f.H_gens),
        remap(f.Q_gens) if f.Q_gens else None,
        f.K_kind,
        c4_gen=int(emb_c[1]),
    )
    return group


def _respec(group: FiniteGroup, spec_string: str) -> FiniteGroup:
    group.spec_string = spec_string
    return group


# ---------------------------------------------------------------------------
# recipes


def _build(node: GroupSpec) -> FiniteGroup:
    if isinstance(node, Atom):
        kind, n = node.kind, node.param
        if kind == "C":
            return cyclic(n)
        if kind == "D":
            return dihedral(n)
        if kind == "Q":
            return quaternion(n)
        if kind == "EA":
            return elementary_abelian(n)
        if kind in ("ESP", "ESM"):
            return extraspecial(n, +1 if kind == "ESP" else -1)
        if kind == "ESC4":
            return extraspecial_c4(n)
        raise SpecDomainError(f"unknown constructor {kind!r}")
    left, right = _build(node.left), _build(node.right)
    text = canonical(node)
    if node.op == "x":
        return direct_product(left, right, spec_string=text)[0]
    return central_product(left, right, spec_string=text)[0]


@functools.lru_cache(maxsize=128)
def _build_canonical(text: str) -> FiniteGroup:
    return _build(parse_group_spec(text))


def build_group(spec: GroupSpec | str, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Construct the table group for a recipe.

    Groups are cached by canonical recipe, so building the same spec twice
    returns the same object. Extraspecial and E*C4 atoms carry their
    generator frame in ``group.frame``.
    """
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    order = spec_order(spec)
    if order > cap:
        raise OrderCapExceeded(f"{canonical(spec)} has order {order} > cap {cap}")
    return _build_canonical(canonical(spec))


def build_frame(spec: GroupSpec | str, cap: int = DEFAULT_ORDER_CAP) -> ExtraspecialFrame:
    group = build_group(spec, cap)
    if group.frame is None:
        raise SpecDomainError(f"{group.spec_string} is not an ESP/ESM/ESC4 recipe")
    return group.frame


# ---------------------------------------------------------------------------
# structure


def generated_subgroup_mask(group: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    gens = np.unique(np.fromiter((int(g) for g in gens), dtype=np.intp))
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.intp)
    while frontier.size and gens.size:
        nxt = np.unique(group.table[np.ix_(frontier, gens)])
        frontier = nxt[~mask[nxt]]
        mask[frontier] = True
    return mask


def generated_subgroup(group: FiniteGroup, gens: Iterable[int]) -> ElemSet:
    return ElemSet.from_mask(group, generated_subgroup_mask(group, gens))


def center(group: FiniteGroup) -> ElemSet:
    return ElemSet.from_mask(group, group.center_mask)


def conjugacy_classes(group: FiniteGroup) -> list[list[int]]:
    """Partition of the element indices into classes, ordered by least member."""
    classes: dict[int, list[int]] = {}
    for g, cid in enumerate(group.class_of):
        classes.setdefault(int(cid), []).append(g)
    return [classes[c] for c in sorted(classes)]


def normal_subgroups(group: FiniteGroup) -> list[ElemSet]:
    """All normal subgroups, smallest first, ties broken by index tuple.

    Every normal subgroup is a join of normal closures of conjugacy classes,
    and the join of two normal subgroups is their product set, so the lattice
    is explored by multiplying found subgroups by class closures.
    """
    closures = []
    seen_closure: set[bytes] = set()
    for cls in conjugacy_classes(group)[1:]:
        m = generated_subgroup_mask(group, cls)
        key = np.packbits(m).tobytes()
        if key not in seen_closure:
            seen_closure.add(key)
            closures.append(m)
    trivial = np.zeros(group.order, dtype=bool)
    trivial[0] = True
    if not closures:
        return [ElemSet.from_mask(group, trivial)]
    closure_mat = np.array(closures)
    rows, cols = np.nonzero(closure_mat)
    found = {np.packbits(trivial).tobytes(): trivial}
    queue = [trivial]
    while queue:
        n_mask = queue.pop()
        # N is normal, so gN = Ng and N*M is the union of the cosets meeting M.
        coset_id = group.table[:, np.flatnonzero(n_mask)].min(axis=1)
        hits = np.zeros((len(closures), group.order), dtype=bool)
        hits[rows, coset_id[cols]] = True
        joined_all = hits[:, coset_id]
        for joined in joined_all[~np.all(joined_all == n_mask, axis=1)]:
            key = np.packbits(joined).tobytes()
            if key not in found:
                found[key] = joined
                queue.append(joined)
    subgroups = [ElemSet.from_mask(group, m) for m in found.values()]
    subgroups.sort(key=lambda s: (len(s), s.sort_key()))
    return subgroups


def _coset_table(group: FiniteGroup, n_idx: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Table of G/N on left cosets gN, each represented by its least index."""
    key = group.table[:, n_idx].min(axis=1)
    reps = np.unique(key)
    proj = np.searchsorted(reps, key).astype(np.int32)
    table = proj[group.table[np.ix_(reps, reps)]]
    return table, reps, proj


def is_subgroup(group: FiniteGroup, subset: ElemSet) -> bool:
    idx = subset.as_array()
    if 0 not in subset:
        return False
    mask = subset.mask()
    return bool(np.all(mask[group.table[np.ix_(idx, idx)]]))


def is_normal(group: FiniteGroup, subset: ElemSet) -> bool:
    mask = subset.mask()
    return bool(np.all(mask[group.conjugation[:, subset.as_array()]]))


def quotient(group: FiniteGroup, normal: ElemSet) -> FiniteGroup:
    """G/N on left cosets; coset labels are the labels of least representatives."""
    if normal.group is not group:
        raise ValueError("normal subgroup belongs to another group")
    if not is_subgroup(group, normal):
        raise NotSubgroup(f"set of size {len(normal)} is not a subgroup of {group.spec_string}")
    if not is_normal(group, normal):
        raise NotNormal(f"subgroup of size {len(normal)} is not normal in {group.spec_string}")
    table, reps, proj = _coset_table(group, normal.as_array())
    if not np.array_equal(table[proj[:, None], proj[None, :]], proj[group.table]):
        raise AssertionError("coset projection is not a homomorphism")
    gens = ",".join(group.labels[i] for i in normal.indices()[1:4])
    more = ",..." if len(normal) > 4 else ""
    q = FiniteGroup(
        table,
        [group.labels[r] for r in reps],
        f"{group.spec_string}/<{gens}{more}>" if len(normal) > 1 else group.spec_string,
        verify=False,  # the homomorphism check above already proves the group axioms
    )
    q.projection = proj
    return q


@dataclass(frozen=True)
class StructureFlags:
    is_abelian: bool
    is_cyclic: bool
    is_elementary_abelian_2: bool
    is_dihedral: bool
    is_generalized_quaternion: bool
    is_extraspecial: bool


def _powers(group: FiniteGroup, x: int) -> list[int]:
    out = [0]
    g = x
    while g != 0:
        out.append(g)
        g = int(group.table[g, x])
    return out


def rotation_subgroup(group: FiniteGroup) -> ElemSet | None:
    """The cyclic subgroup <x> of index 2 witnessing that G is dihedral, if any."""
    n = group.order
    if n < 6 or n % 2:
        return None
    m = n // 2
    t, inv = group.table, group.inv
    for x in np.flatnonzero(group.elem_order == m):
        rot = np.zeros(n, dtype=bool)
        rot[_powers(group, int(x))] = True
        outside = np.flatnonzero(~rot)
        ys = outside[group.elem_order[outside] == 2]
        if ys.size and np.any(t[t[ys, x], ys] == inv[x]):
            return ElemSet.from_mask(group, rot)
    return None


def _is_generalized_quaternion(group: FiniteGroup) -> bool:
    n = group.order
    if n < 8 or n % 4 or np.count_nonzero(group.elem_order == 2) != 1:
        return False
    k = n // 4
    t, inv = group.table, group.inv
    for x in np.flatnonzero(group.elem_order == 2 * k):
        pw = _powers(group, int(x))
        rot = np.zeros(n, dtype=bool)
        rot[pw] = True
        ys = np.flatnonzero(~rot)
        ok = (group.squares[ys] == pw[k]) & (t[t[ys, x], inv[ys]] == inv[x])
        if np.any(ok):
            return True
    return False


def structure_predicates(group: FiniteGroup) -> StructureFlags:
    n = group.order
    abelian = bool(np.array_equal(group.table, group.table.T))
    zsize = int(np.count_nonzero(group.center_mask))
    log2 = n.bit_length() - 1
    extraspecial_ = (
        n >= 8
        and n == 1 << log2
        and log2 % 2 == 1
        and zsize == 2
        and bool(np.all(group.center_mask[group.squares]))
    )
    return StructureFlags(
        is_abelian=abelian,
        is_cyclic=bool(np.any(group.elem_order == n)),
        is_elementary_abelian_2=bool(np.all(group.elem_order <= 2)),
        is_dihedral=rotation_subgroup(group) is not None,
        is_generalized_quaternion=_is_generalized_quaternion(group),
        is_extraspecial=extraspecial_,
    )


def fingerprint(group: FiniteGroup) -> tuple:
    """Cheap isomorphism invariant: order, exponent, |Z|, class sizes, order histogram."""
    class_sizes = tuple(sorted(np.bincount(group.class_of).tolist()))
    hist = tuple(sorted(Counter(group.elem_order.tolist()).items()))
    return (group.order, group.exponent, int(np.count_nonzero(group.center_mask)), class_sizes, hist)


def involution_restriction_center(group: FiniteGroup) -> int | None:
    """The central involution z if G has exponent 4 and every element of order 4 squares to z.

    These are the groups where a non-filling locally maximal product-free set
    must contain z and consist of involutions.
    """
    if group.exponent != 4:
        return None
    squares = np.unique(group.squares[group.elem_order == 4])
    if squares.size != 1:
        return None
    z = int(squares[0])
    return z if group.center_mask[z] else None
