"""Finite groups as complete Cayley tables: constructors, catalog, closures,
embedding search, simplicity certificates, and presentation equivalence.

Labels are 1-based; label 1 is always the identity.  Every constructor
validates the four group axioms and names the violated one on rejection.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import config
from .errors import (
    IdentityElement,
    LengthMismatch,
    LimitExceeded,
    NotInClosure,
    TrivialGroup,
)

_ASSOC_CHUNK_CELLS = 1 << 22


class FinGroup:
    """A finite group given by its full Cayley table."""

    __slots__ = ("_t", "name", "_inv", "_orders", "_abelian", "_fp", "_gendata")

    def __init__(self, cayley, name: str = None):
        t = np.array(cayley, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
            raise ValueError(f"cancellation axiom: table must be a nonempty square, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 1 or t.max() > n:
            raise ValueError(f"cancellation axiom: entries must be labels in 1..{n}")
        lab = np.arange(1, n + 1, dtype=np.int32)
        if not np.array_equal(t[0], lab) or not np.array_equal(t[:, 0], lab):
            raise ValueError("identity axiom: label 1 must act as a two-sided identity")
        if not (np.sort(t, axis=1) == lab).all() or not (np.sort(t, axis=0) == lab[:, None]).all():
            raise ValueError("cancellation axiom: every row and column must be a permutation of 1..n")
        right_inv = np.argmax(t == 1, axis=1)
        if not (t[right_inv, np.arange(n)] == 1).all():
            raise ValueError("inverses axiom: some element has no two-sided inverse")
        t0 = t - 1
        chunk = max(1, _ASSOC_CHUNK_CELLS // (n * n))
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            lhs = t[t0[lo:hi], :]
            rhs = t[lo:hi][:, t0]
            if not np.array_equal(lhs, rhs):
                raise ValueError("associativity axiom: some triple violates (a*b)*c = a*(b*c)")
        t.setflags(write=False)
        object.__setattr__(self, "_t", t)
        object.__setattr__(self, "name", name or f"G{n}")
        object.__setattr__(self, "_inv", None)
        object.__setattr__(self, "_orders", None)
        object.__setattr__(self, "_abelian", None)
        object.__setattr__(self, "_fp", None)
        object.__setattr__(self, "_gendata", None)

    def __setattr__(self, name, value):
        raise AttributeError("FinGroup is immutable")

    @property
    def order(self) -> int:
        return int(self._t.shape[0])

    def elements(self):
        return range(1, self.order + 1)

    def mul(self, a: int, b: int) -> int:
        return int(self._t[a - 1, b - 1])

    def inv(self, a: int) -> int:
        if self._inv is None:
            object.__setattr__(self, "_inv", np.argmax(self._t == 1, axis=1) + 1)
        return int(self._inv[a - 1])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        cur = 1
        for _ in range(k):
            cur = self.mul(cur, a)
        return cur

    def element_order(self, a: int) -> int:
        return self.element_orders()[a - 1]

    def element_orders(self) -> tuple:
        if self._orders is None:
            out = []
            for a in self.elements():
                cur, k = a, 1
                while cur != 1:
                    cur, k = self.mul(cur, a), k + 1
                out.append(k)
            object.__setattr__(self, "_orders", tuple(out))
        return self._orders

    @property
    def is_abelian(self) -> bool:
        if self._abelian is None:
            object.__setattr__(self, "_abelian", bool((self._t == self._t.T).all()))
        return self._abelian

    def center_size(self) -> int:
        return int((self._t == self._t.T).all(axis=1).sum())

    def fingerprint(self) -> tuple:
        """Cheap isomorphism invariant: (order, abelian, element-order multiset, center size)."""
        if self._fp is None:
            fp = (self.order, self.is_abelian, tuple(sorted(self.element_orders())), self.center_size())
            object.__setattr__(self, "_fp", fp)
        return self._fp

    def generating_data(self):
        """Greedy generating labels plus a BFS spanning order with parent pointers.

        Returns (gens, bfs_order, parent) where parent[e] = (prev, gen_index)
        and every element is prev * gens[gen_index].
        """
        if self._gendata is not None:
            return self._gendata
        n = self.order
        gens = []
        closure = {1}
        while len(closure) < n:
            x = min(set(self.elements()) - closure)
            gens.append(x)
            closure = set(subgroup_closure(self, gens))
        parent = {1: None}
        order_list = [1]
        queue = [1]
        for e in queue:
            for gi, g0 in enumerate(gens):
                y = self.mul(e, g0)
                if y not in parent:
                    parent[y] = (e, gi)
                    order_list.append(y)
                    queue.append(y)
        object.__setattr__(self, "_gendata", (tuple(gens), tuple(order_list), parent))
        return self._gendata

    def cayley_rows(self):
        return [[int(v) for v in row] for row in self._t]

    def to_text(self) -> str:
        lines = [str(self.order)]
        for row in self._t:
            lines.append(" ".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = None) -> "FinGroup":
        tokens = text.split()
        if not tokens:
            raise ValueError("empty Cayley text")
        n = int(tokens[0])
        body = tokens[1:]
        if len(body) != n * n:
            raise ValueError(f"expected {n * n} entries after the order line, got {len(body)}")
        rows = [[int(body[i * n + j]) for j in range(n)] for i in range(n)]
        return cls(rows, name=name)

    def to_json(self) -> dict:
        return {"order": self.order, "cayley": self.cayley_rows(), "name": self.name}

    @classmethod
    def from_json(cls, obj: dict) -> "FinGroup":
        return cls(obj["cayley"], name=obj.get("name"))

    def __repr__(self):
        return f"FinGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class Embedding:
    """A verified injective homomorphism between finite groups."""

    source: FinGroup
    target: FinGroup
    map: dict

    def apply(self, label: int) -> int:
        return self.map[label]

    def to_json(self) -> dict:
        return {"map": sorted([a, b] for a, b in self.map.items())}


@dataclass(frozen=True)
class Product:
    """A direct product with its projection and injection label maps."""

    group: FinGroup
    proj1: dict
    proj2: dict
    inj1: dict
    inj2: dict


@dataclass(frozen=True)
class SimplicityCert:
    """Replayable simplicity verdict: a witness element or exhaustive confirmation."""

    simple: bool
    witness: Optional[int]
    closure: Optional[tuple]
    checked: int

    def to_json(self) -> dict:
        out = {"simple": self.simple, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
            out["closure"] = list(self.closure)
        return out


def trivial_group() -> FinGroup:
    return FinGroup([[1]], name="C1")


def cyclic_group(n: int) -> FinGroup:
    if n < 1:
        raise ValueError("order must be positive")
    rows = [[((i + j) % n) + 1 for j in range(n)] for i in range(n)]
    return FinGroup(rows, name=f"C{n}")


def _perm_table(perms, name):
    index = {p: i + 1 for i, p in enumerate(perms)}
    size = len(perms)
    rows = [[0] * size for _ in range(size)]
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            rows[i][j] = index[tuple(p[q[x]] for x in range(len(p)))]
    return FinGroup(rows, name=name)


def symmetric_group(k: int) -> FinGroup:
    if k < 1:
        raise ValueError("k must be positive")
    perms = sorted(itertools.permutations(range(k)))
    return _perm_table(perms, f"S{k}")


def _is_even(p) -> bool:
    inv = 0
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                inv += 1
    return inv % 2 == 0


def alternating_group(k: int) -> FinGroup:
    if k < 3:
        raise ValueError("alternating groups start at k=3")
    perms = sorted(p for p in itertools.permutations(range(k)) if _is_even(p))
    return _perm_table(perms, f"A{k}")


def dihedral_group(n: int) -> FinGroup:
    if n < 3:
        raise ValueError("dihedral groups start at n=3")
    rotations = [tuple((x + i) % n for x in range(n)) for i in range(n)]
    reflections = [tuple((i - x) % n for x in range(n)) for i in range(n)]
    return _perm_table(rotations + reflections, f"D{n}")


def direct_product(g: FinGroup, h: FinGroup, limit: int = None) -> Product:
    """Componentwise product on labels (a,b) -> (a-1)*|h| + b, so (1,1) -> 1."""
    limit = limit if limit is not None else config.product_limit()
    n, m = g.order, h.order
    if n * m > limit:
        raise LimitExceeded(f"product order {n * m} exceeds limit {limit}")
    tg = np.asarray(g.cayley_rows(), dtype=np.int64)
    th = np.asarray(h.cayley_rows(), dtype=np.int64)
    table = np.kron((tg - 1) * m, np.ones((m, m), dtype=np.int64)) + np.tile(th, (n, n))
    proj1, proj2, inj1, inj2 = {}, {}, {}, {}
    for a in range(1, n + 1):
        for b in range(1, m + 1):
            lbl = (a - 1) * m + b
            proj1[lbl] = a
            proj2[lbl] = b
    for a in range(1, n + 1):
        inj1[a] = (a - 1) * m + 1
    for b in range(1, m + 1):
        inj2[b] = b
    grp = FinGroup(table, name=f"{g.name}x{h.name}")
    return Product(group=grp, proj1=proj1, proj2=proj2, inj1=inj1, inj2=inj2)


def subgroup_closure(g: FinGroup, gens) -> list:
    """Smallest subgroup containing gens, as a sorted label list."""
    for a in gens:
        if not 1 <= a <= g.order:
            raise ValueError(f"label {a} outside group of order {g.order}")
    gens = sorted(set(gens))
    seen = {1}
    queue = [1]
    for x in queue:
        for a in gens:
            y = g.mul(x, a)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def normal_closure(g: FinGroup, x: int) -> list:
    """Smallest normal subgroup containing x, as a sorted label list."""
    if x == 1:
        raise IdentityElement("normal closure of the identity is requested with x != 1")
    conjugates = {g.mul(g.mul(g.inv(c), x), c) for c in g.elements()}
    return subgroup_closure(g, sorted(conjugates))


def is_simple(g: FinGroup) -> SimplicityCert:
    if g.order == 1:
        raise TrivialGroup("simplicity is undefined for the trivial group")
    for x in range(2, g.order + 1):
        cl = normal_closure(g, x)
        if len(cl) < g.order:
            return SimplicityCert(simple=False, witness=x, closure=tuple(cl), checked=x - 1)
    return SimplicityCert(simple=True, witness=None, closure=None, checked=g.order - 1)


def conjugate_word_witness(g: FinGroup, n: int, k: int) -> tuple:
    """Shortest product of conjugates of n or n^-1 equal to k, as ((conjugator, exp), ...).

    BFS over right-multiplication by the factors c^-1 * n^e * c, edges ordered
    by (c, e) with e = +1 before -1, so the result is the lexicographically
    least among the shortest words.  Verified by evaluation before return.
    """
    if n == 1:
        raise IdentityElement("conjugate words of the identity only reach the identity")
    closure = set(normal_closure(g, n))
    if k not in closure:
        raise NotInClosure(f"label {k} is not in the normal closure of {n}")
    tokens = []
    for c in g.elements():
        for e in (1, -1):
            base = n if e == 1 else g.inv(n)
            f = g.mul(g.mul(g.inv(c), base), c)
            tokens.append(((c, e), f))
    pred = {1: None}
    queue = [1]
    if k != 1:
        found = False
        for cur in queue:
            for token, f in tokens:
                nxt = g.mul(cur, f)
                if nxt not in pred:
                    pred[nxt] = (cur, token)
                    if nxt == k:
                        found = True
                        break
                    queue.append(nxt)
            if found:
                break
        if not found:
            raise NotInClosure(f"BFS did not reach {k}; closure check and search disagree")
    word = []
    cur = k
    while pred[cur] is not None:
        prev, token = pred[cur]
        word.append(token)
        cur = prev
    word.reverse()
    acc = 1
    for c, e in word:
        base = n if e == 1 else g.inv(n)
        acc = g.mul(acc, g.mul(g.mul(g.inv(c), base), c))
    assert acc == k, "conjugate word failed re-evaluation"
    return tuple(word)


def _pair_closure(src: FinGroup, dst: FinGroup, gen_pairs) -> Optional[dict]:
    """Extend (a_i -> b_i) to an injective homomorphism on <a_1..a_r>, or None.

    Simultaneous BFS closure with consistency propagation, then a full
    multiplicative check over the generated subgroup.
    """
    phi = {1: 1}
    used = {1}
    queue = [1]
    for x in queue:
        for a, b in gen_pairs:
            y = src.mul(x, a)
            fy = dst.mul(phi[x], b)
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                if fy in used:
                    return None
                phi[y] = fy
                used.add(fy)
                queue.append(y)
    dom = list(phi)
    for x in dom:
        for y in dom:
            if phi[src.mul(x, y)] != dst.mul(phi[x], phi[y]):
                return None
    return phi


def _hom_search(src: FinGroup, dst: FinGroup, full_domain: bool) -> Optional[dict]:
    """Backtracking over generator images for an injective homomorphism src -> dst."""
    gens, _, _ = src.generating_data()
    cand = []
    for a in gens:
        oa = src.element_order(a)
        cand.append([b for b in dst.elements() if dst.element_order(b) == oa])
        if not cand[-1]:
            return None

    images = []

    def rec(i):
        if i == len(gens):
            phi = _pair_closure(src, dst, list(zip(gens, images)))
            if phi is not None and (not full_domain or len(phi) == src.order):
                return phi
            return None
        for b in cand[i]:
            images.append(b)
            # partial consistency prune before descending
            if _pair_closure(src, dst, list(zip(gens[: i + 1], images))) is not None:
                result = rec(i + 1)
                if result is not None:
                    return result
            images.pop()
        return None

    return rec(0)


def find_isomorphism(g: FinGroup, h: FinGroup) -> Optional[dict]:
    if g.fingerprint() != h.fingerprint():
        return None
    return _hom_search(g, h, full_domain=True)


def is_isomorphic(g: FinGroup, h: FinGroup) -> bool:
    return find_isomorphism(g, h) is not None


def embed_search(h: FinGroup, g: FinGroup) -> Optional[Embedding]:
    """Injective homomorphism of h into g, or None after exhausting generator images."""
    if g.order % h.order != 0:
        return None
    phi = _hom_search(h, g, full_domain=True)
    if phi is None:
        return None
    emb = Embedding(source=h, target=g, map=phi)
    for a in h.elements():
        for b in h.elements():
            assert phi[h.mul(a, b)] == g.mul(phi[a], phi[b])
    assert len(set(phi.values())) == h.order
    return emb


def presentation_equiv(h: FinGroup, a, g: FinGroup, b) -> bool:
    """Whether a_i -> b_i extends to an isomorphism <a> -> <b>."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise LengthMismatch(f"{len(a)} generators vs {len(b)} images")
    for x in a:
        if not 1 <= x <= h.order:
            raise ValueError(f"label {x} outside group of order {h.order}")
    for y in b:
        if not 1 <= y <= g.order:
            raise ValueError(f"label {y} outside group of order {g.order}")
    phi = _pair_closure(h, g, list(zip(a, b)))
    if phi is None:
        return False
    return set(phi.values()) == set(subgroup_closure(g, b))


_catalog_cache = {}


def catalog(max_order: int, limit: int = None) -> list:
    """One representative per isomorphism class of cyclic, symmetric, alternating,
    dihedral groups and direct products of members, up to max_order."""
    limit = limit if limit is not None else config.catalog_limit()
    if max_order < 1:
        raise ValueError("max_order must be positive")
    if max_order > limit:
        raise LimitExceeded(f"max_order {max_order} exceeds catalog limit {limit}")
    if max_order in _catalog_cache:
        return list(_catalog_cache[max_order])

    members = []

    def admit(candidate: FinGroup) -> bool:
        for m in members:
            if find_isomorphism(m, candidate) is not None:
                return False
        members.append(candidate)
        return True

    admit(trivial_group())
    for n in range(2, max_order + 1):
        admit(cyclic_group(n))
    k = 3
    while math.factorial(k) <= max_order:
        admit(symmetric_group(k))
        k += 1
    k = 3
    while math.factorial(k) // 2 <= max_order:
        admit(alternating_group(k))
        k += 1
    n = 3
    while 2 * n <= max_order:
        admit(dihedral_group(n))
        n += 1

    changed = True
    while changed:
        changed = False
        snapshot = list(members)
        pairs = [
            (x, y)
            for x, y in itertools.combinations_with_replacement(snapshot, 2)
            if x.order * y.order <= max_order
        ]
        pairs.sort(key=lambda p: (p[0].order * p[1].order, p[0].name, p[1].name))
        for x, y in pairs:
            if admit(direct_product(x, y).group):
                changed = True

    members.sort(key=lambda m: (m.order, m.name))
    _catalog_cache[max_order] = list(members)
    return list(members)
