"""Exact arithmetic in the generic countable Abelian torsion group
A = direct sum over primes p of countably many Prüfer p-groups.

Elements are finitely supported coordinate vectors; a coordinate at
(prime p, copy index i) is a reduced fraction a/p^m mod 1.  Everything is
exact integer arithmetic; there is no floating point anywhere.
"""

import itertools
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Optional

from . import config
from .errors import LimitExceeded
from .fingroup import FinGroup, catalog
from .table import PartialTable

_HEIGHT_GUARD = 64


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PruferCoord:
    """A reduced fraction a/p^m mod 1 in the Prüfer p-group."""

    p: int
    a: int
    m: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.m < 0 or self.a < 0 or self.a >= self.p ** self.m:
            raise ValueError(f"need 0 <= a < p^m, got {self.a}/{self.p}^{self.m}")
        if self.a == 0 and self.m != 0:
            raise ValueError("zero coordinate must have exponent 0")
        if self.a != 0 and self.a % self.p == 0:
            raise ValueError(f"{self.a}/{self.p}^{self.m} is not in lowest terms")

    @property
    def denominator(self) -> int:
        return self.p ** self.m

    def is_zero(self) -> bool:
        return self.a == 0


def _reduce(p: int, a: int, m: int) -> Optional[PruferCoord]:
    """Lowest-terms coordinate for a/p^m, or None when it is zero."""
    a %= p ** m
    if a == 0:
        return None
    while a % p == 0:
        a //= p
        m -= 1
    return PruferCoord(p, a, m)


class AbelianElement:
    """A finitely supported element of A; support maps (p, copy) -> PruferCoord."""

    __slots__ = ("_coords", "_key")

    def __init__(self, coords=()):
        if hasattr(coords, "items"):
            pairs = list(coords.items())
        else:
            pairs = list(coords)
        out = {}
        for (p, i), coord in pairs:
            if not isinstance(i, int) or i < 0:
                raise ValueError(f"copy index must be a natural number, got {i!r}")
            if not isinstance(coord, PruferCoord):
                coord = PruferCoord(p, coord[0], coord[1])
            if coord.p != p:
                raise ValueError(f"coordinate prime {coord.p} does not match key prime {p}")
            if coord.is_zero():
                raise ValueError("stored coordinates must be nonzero (support is exact)")
            if (p, i) in out:
                raise ValueError(f"duplicate coordinate at ({p},{i})")
            out[(p, i)] = coord
        key = tuple(sorted((p, i, c.m, c.a) for (p, i), c in out.items()))
        object.__setattr__(self, "_coords", out)
        object.__setattr__(self, "_key", key)

    def __setattr__(self, name, value):
        raise AttributeError("AbelianElement is immutable")

    @property
    def coords(self):
        return MappingProxyType(self._coords)

    def is_identity(self) -> bool:
        return not self._coords

    def support(self) -> tuple:
        return tuple(sorted(self._coords))

    def __eq__(self, other):
        return isinstance(other, AbelianElement) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def to_json(self) -> dict:
        return {
            "coords": [
                {"p": p, "i": i, "a": c.a, "m": c.m}
                for (p, i), c in sorted(self._coords.items())
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AbelianElement":
        return cls(
            ((entry["p"], entry["i"]), PruferCoord(entry["p"], entry["a"], entry["m"]))
            for entry in obj["coords"]
        )

    def __repr__(self):
        if not self._coords:
            return "AbelianElement(identity)"
        parts = [
            f"({p},{i})->{c.a}/{p}^{c.m}" for (p, i), c in sorted(self._coords.items())
        ]
        return f"AbelianElement({', '.join(parts)})"


IDENTITY = AbelianElement()


def add(x: AbelianElement, y: AbelianElement) -> AbelianElement:
    out = dict(x.coords)
    for key, c2 in y.coords.items():
        p = c2.p
        if key not in out:
            out[key] = c2
            continue
        c1 = out.pop(key)
        m = max(c1.m, c2.m)
        a = c1.a * p ** (m - c1.m) + c2.a * p ** (m - c2.m)
        reduced = _reduce(p, a, m)
        if reduced is not None:
            out[key] = reduced
    return AbelianElement(out)


def negate(x: AbelianElement) -> AbelianElement:
    return AbelianElement(
        {key: PruferCoord(c.p, c.denominator - c.a, c.m) for key, c in x.coords.items()}
    )


def order(x: AbelianElement) -> int:
    out = 1
    for c in x.coords.values():
        out = math.lcm(out, c.denominator)
    return out


def multiple(x: AbelianElement, k: int) -> AbelianElement:
    """k-fold sum of x (k may be negative or zero)."""
    if k < 0:
        return multiple(negate(x), -k)
    out = {}
    for key, c in x.coords.items():
        reduced = _reduce(c.p, c.a * k, c.m)
        if reduced is not None:
            out[key] = reduced
    return AbelianElement(out)


def divide(x: AbelianElement, k: int) -> AbelianElement:
    """The canonical y with k*y = x: per coordinate a/p^m and k = p^s*u,
    take (u^-1 mod p^(m+s)) * a over p^(m+s)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = {}
    for (p, i), c in x.coords.items():
        s = 0
        u = k
        while u % p == 0:
            u //= p
            s += 1
        m = c.m + s
        inv = pow(u, -1, p ** m)
        out[(p, i)] = PruferCoord(p, (inv * c.a) % p ** m, m)
    return AbelianElement(out)


# ---------------------------------------------------------------- finite Abelian


class FinAbelian:
    """A finite Abelian group presented as a list of prime-power cyclic factors."""

    __slots__ = ("factors", "_fingroup")

    def __init__(self, factors):
        factors = tuple(int(f) for f in factors)
        for f in factors:
            if f < 2:
                raise ValueError(f"factors must be >= 2, got {f}")
            p = _prime_root(f)
            if p is None:
                raise ValueError(f"factor {f} is not a prime power")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_fingroup", None)

    def __setattr__(self, name, value):
        raise AttributeError("FinAbelian is immutable")

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def name(self) -> str:
        if not self.factors:
            return "C1"
        return "x".join(f"C{f}" for f in self.factors)

    def elements(self):
        return itertools.product(*(range(f) for f in self.factors))

    def add(self, s, t) -> tuple:
        return tuple((a + b) % f for a, b, f in zip(s, t, self.factors))

    def label_of(self, element) -> int:
        idx = 0
        for r, f in zip(element, self.factors):
            idx = idx * f + r
        return idx + 1

    def element_of(self, label: int) -> tuple:
        idx = label - 1
        out = []
        for f in reversed(self.factors):
            out.append(idx % f)
            idx //= f
        return tuple(reversed(out))

    def to_fingroup(self) -> FinGroup:
        if self._fingroup is None:
            n = self.order
            rows = [[0] * n for _ in range(n)]
            for s in self.elements():
                for t in self.elements():
                    rows[self.label_of(s) - 1][self.label_of(t) - 1] = self.label_of(self.add(s, t))
            object.__setattr__(self, "_fingroup", FinGroup(rows, name=self.name))
        return self._fingroup

    def __eq__(self, other):
        return isinstance(other, FinAbelian) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"FinAbelian({self.name})"


def _prime_root(f: int) -> Optional[int]:
    for p in range(2, f + 1):
        if _is_prime(p) and f % p == 0:
            q = f
            while q % p == 0:
                q //= p
            return p if q == 1 else None
    return None


def abelian_type(g: FinGroup) -> FinAbelian:
    """The prime-power factor type of an abelian FinGroup, read off its order
    statistics: the counts of x with x^(p^j) = 1 determine each p-partition."""
    if not g.is_abelian:
        raise ValueError("abelian_type needs an abelian group")
    n = g.order
    if n == 1:
        return FinAbelian(())
    factors = []
    for p in sorted({_smallest_prime_factor(d) for d in _prime_divisors(n)}):
        counts = [1]
        j = 1
        while True:
            c = sum(1 for x in g.elements() if g.power(x, p ** j) == 1)
            counts.append(c)
            if c == counts[-2]:
                counts.pop()
                break
            j += 1
        logs = [_int_log(p, c) for c in counts]
        d = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        top = d[0] if d else 0
        partition = [sum(1 for dj in d if dj >= i) for i in range(1, top + 1)]
        factors.extend(p ** lam for lam in sorted(partition, reverse=True))
    h = FinAbelian(factors)
    assert h.order == n, "type reconstruction must preserve the order"
    return h


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _smallest_prime_factor(d: int) -> int:
    return d


def _int_log(p: int, c: int) -> int:
    out = 0
    while c > 1:
        if c % p:
            raise ValueError(f"count {c} is not a power of {p}; group is not abelian of p-power type")
        c //= p
        out += 1
    return out


def abelian_types_up_to(max_order: int) -> list:
    """All finite Abelian isomorphism types of order <= max_order."""

    def partitions(e: int, mx: int = None):
        if e == 0:
            yield ()
            return
        mx = e if mx is None else mx
        for first in range(min(e, mx), 0, -1):
            for rest in partitions(e - first, first):
                yield (first,) + rest

    out = []
    for o in range(1, max_order + 1):
        per_prime = []
        q = o
        d = 2
        while d * d <= q:
            if q % d == 0:
                e = 0
                while q % d == 0:
                    q //= d
                    e += 1
                per_prime.append([tuple(d ** part for part in lam) for lam in partitions(e)])
            d += 1
        if q > 1:
            per_prime.append([(q,)])
        for combo in itertools.product(*per_prime):
            out.append(FinAbelian(itertools.chain.from_iterable(combo)))
    return out


def embed_fin_abelian(h: FinAbelian, start=None) -> list:
    """Images in A of the factor generators: factor p^e goes to (p, fresh copy) -> 1/p^e.

    start maps prime -> first copy index to use, for placing the image clear
    of coordinates already spoken for.
    """
    used = dict(start or {})
    images = []
    for f in h.factors:
        p = _prime_root(f)
        e = 0
        q = f
        while q > 1:
            q //= p
            e += 1
        i = used.get(p, 0)
        used[p] = i + 1
        images.append(AbelianElement({(p, i): PruferCoord(p, 1, e)}))
    return images


def span_map(h: FinAbelian, images) -> dict:
    """Residue tuple of h -> its image in A under the given factor-generator images."""
    out = {}
    for element in h.elements():
        acc = IDENTITY
        for r, img in zip(element, images):
            acc = add(acc, multiple(img, r))
        out[element] = acc
    return out


# ---------------------------------------------------------------- enumeration

# A coordinate at (p, i) with denominator p^m weighs max(p^m, i+1); an element's
# height is the largest coordinate weight (identity: 1).  Height classes are
# finite, so ordering by (height, support size, sorted coordinate tuples) is a
# genuine bijection with the positive integers.  Ranks are computed
# combinatorially: per-height totals have a closed form and within-block
# positions come from elementary-symmetric suffix counts, so no block is ever
# materialized.


def _coord_weight(key, coord) -> int:
    return max(coord.denominator, key[1] + 1)


def height(x: AbelianElement) -> int:
    if x.is_identity():
        return 1
    return max(_coord_weight(key, c) for key, c in x.coords.items())


def _primes_up_to(B: int):
    return [p for p in range(2, B + 1) if _is_prime(p)]


def _pp_floor(p: int, B: int) -> int:
    """Largest power of p that is <= B (1 when p > B)."""
    v = 1
    while v * p <= B:
        v *= p
    return v


def _keys_at(H: int):
    return [(p, i) for p in _primes_up_to(H) for i in range(H)]


def _choices(p: int, i: int, H: int):
    """Coordinate (m, a) options at key (p, i) with weight <= H, sorted."""
    out = []
    m = 1
    while p ** m <= H:
        out.extend((m, a) for a in range(1, p ** m) if a % p)
        m += 1
    return out


def _cumulative(B: int) -> int:
    """How many elements have height <= B."""
    out = 1
    for p in _primes_up_to(B):
        out *= _pp_floor(p, B) ** B
    return out


def _key_counts(H: int):
    """Per-key counts of coordinates of weight <= H and of weight <= H-1."""
    keys = _keys_at(H)
    c_hi = []
    c_lo = []
    for p, i in keys:
        c_hi.append(_pp_floor(p, H) - 1)
        c_lo.append(0 if i >= H - 1 else _pp_floor(p, H - 1) - 1)
    return keys, c_hi, c_lo


def _suffix_esym(counts, rmax: int):
    """E[t][r] = elementary symmetric e_r over counts[t:]."""
    T = len(counts)
    E = [[0] * (rmax + 1) for _ in range(T + 1)]
    E[T][0] = 1
    for t in range(T - 1, -1, -1):
        E[t][0] = 1
        for r in range(1, rmax + 1):
            E[t][r] = E[t + 1][r] + counts[t] * E[t + 1][r - 1]
    return E


def _split_eq(p: int, i: int, H: int, c_hi: int, c_lo: int):
    """Counts of weight-exactly-H and weight-below-H coordinates at a key."""
    if i == H - 1:
        return c_hi, 0
    return c_hi - c_lo, c_lo


def encode_element(x: AbelianElement) -> int:
    """Position of x in the canonical order; inverse of enumerate_element."""
    if x.is_identity():
        return 1
    H = height(x)
    if H > _HEIGHT_GUARD:
        raise LimitExceeded(f"element height {H} beyond guard {_HEIGHT_GUARD}")
    s = len(x.coords)
    keys, c_hi, c_lo = _key_counts(H)
    pos = {k: t for t, k in enumerate(keys)}
    e_hi = _suffix_esym(c_hi, s)
    e_lo = _suffix_esym(c_lo, s)
    rank = _cumulative(H - 1)
    for sz in range(1, s):
        rank += e_hi[0][sz] - e_lo[0][sz]
    pairs = sorted(((k, (c.m, c.a)) for k, c in x.coords.items()))
    flag = False
    prev = -1
    for j, ((p, i), coord) in enumerate(pairs):
        t_j = pos[(p, i)]
        rem = s - j - 1

        def completions(t: int, satisfied: bool) -> int:
            if satisfied:
                return e_hi[t][rem]
            return e_hi[t][rem] - e_lo[t][rem]

        for t in range(prev + 1, t_j):
            kp, ki = keys[t]
            n_eq, n_lt = _split_eq(kp, ki, H, c_hi[t], c_lo[t])
            rank += n_eq * completions(t + 1, True)
            rank += n_lt * completions(t + 1, flag)
        for d in _choices(p, i, H):
            if d >= coord:
                break
            d_eq = max(p ** d[0], i + 1) == H
            rank += completions(t_j + 1, flag or d_eq)
        flag = flag or max(p ** coord[0], i + 1) == H
        prev = t_j
    assert flag, "height bookkeeping broke"
    return rank + 1


def enumerate_element(n: int) -> AbelianElement:
    """The n-th element of A under the canonical order; enumerate_element(1) = identity."""
    if n < 1:
        raise ValueError("enumeration starts at 1")
    if n == 1:
        return IDENTITY
    H = 2
    while _cumulative(H) < n:
        H += 1
        if H > _HEIGHT_GUARD:
            raise LimitExceeded(f"enumeration past height {_HEIGHT_GUARD}")
    r = n - _cumulative(H - 1) - 1  # 0-based rank inside the height-H class
    keys, c_hi, c_lo = _key_counts(H)
    T = len(keys)
    rmax = 1
    while True:
        e_hi = _suffix_esym(c_hi, rmax)
        e_lo = _suffix_esym(c_lo, rmax)
        s = None
        acc = r
        for sz in range(1, rmax + 1):
            block = e_hi[0][sz] - e_lo[0][sz]
            if acc < block:
                s = sz
                break
            acc -= block
        if s is not None:
            r = acc
            break
        if rmax >= T:
            raise AssertionError("rank exceeds height class size")
        rmax = min(T, rmax * 2)
    coords = {}
    flag = False
    t = 0
    need = s
    while need > 0:
        kp, ki = keys[t]
        rem = need - 1

        def completions(satisfied: bool) -> int:
            if satisfied:
                return e_hi[t + 1][rem]
            return e_hi[t + 1][rem] - e_lo[t + 1][rem]

        n_eq, n_lt = _split_eq(kp, ki, H, c_hi[t], c_lo[t])
        here = n_eq * completions(True) + n_lt * completions(flag)
        if r >= here:
            r -= here
            t += 1
            continue
        for d in _choices(kp, ki, H):
            d_eq = max(kp ** d[0], ki + 1) == H
            comp = completions(flag or d_eq)
            if r >= comp:
                r -= comp
                continue
            coords[(kp, ki)] = PruferCoord(kp, d[1], d[0])
            flag = flag or d_eq
            break
        need -= 1
        t += 1
    assert r == 0 and flag, "unranking bookkeeping broke"
    return AbelianElement(coords)


def a_prefix_table(n: int, limit: int = None) -> PartialTable:
    """The full n x n block of A's multiplication table under the enumeration."""
    limit = limit if limit is not None else config.prefix_limit()
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > limit:
        raise LimitExceeded(f"prefix size {n} exceeds limit {limit}")
    elems = [enumerate_element(i) for i in range(1, n + 1)]
    cells = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            cells[(i, j)] = encode_element(add(elems[i - 1], elems[j - 1]))
    return PartialTable(cells)


# ---------------------------------------------------------------- stage monitors


@dataclass(frozen=True)
class StageReport:
    """Status of the divisibility, torsion, and finite-embedding stage conditions."""

    divisibility: dict  # (n, k) -> witness label m, or None while pending
    torsion: dict       # n -> exponent k with n^k = 1, or None
    embeddings: dict    # group name -> injective label map, or None

    def to_json(self) -> dict:
        return {
            "divisibility": [
                {"n": n, "k": k, "witness": m} for (n, k), m in sorted(self.divisibility.items())
            ],
            "torsion": [{"n": n, "k": k} for n, k in sorted(self.torsion.items())],
            "embeddings": {
                name: (sorted([a, b] for a, b in m.items()) if m is not None else None)
                for name, m in sorted(self.embeddings.items())
            },
        }


def stage_power(t: PartialTable, m: int, k: int) -> Optional[int]:
    """m^k via left-bracketed cells, or None if some needed cell is absent."""
    if k < 1:
        return None
    cur = m
    for _ in range(k - 1):
        if cur == 1:
            cur = m
        elif m == 1:
            pass
        else:
            nxt = t.get(cur, m)
            if nxt is None:
                return None
            cur = nxt
    return cur


def _torsion_exponent(t: PartialTable, n: int) -> Optional[int]:
    if n == 1:
        return 1
    seen = set()
    cur = n
    k = 1
    while True:
        if cur == 1:
            return k
        if cur in seen:
            return None
        seen.add(cur)
        nxt = t.get(cur, n)
        if nxt is None:
            return None
        cur = nxt
        k += 1


def stage_embedding(g: FinGroup, t: PartialTable) -> Optional[dict]:
    """Injective label map g -> t with every product present as a cell."""
    labels = [1] + [x for x in t.labels() if x != 1]
    gens, order_list, parent = g.generating_data()

    def chain_order(lbl: int) -> Optional[int]:
        seen = set()
        cur = lbl
        k = 1
        while cur != 1:
            if cur in seen:
                return None
            seen.add(cur)
            cur = t.get(cur, lbl)
            if cur is None:
                return None
            k += 1
        return k

    cands = []
    for a in gens:
        oa = g.element_order(a)
        cands.append([lbl for lbl in labels if chain_order(lbl) == oa])
        if not cands[-1]:
            return None

    def verified(phi: dict) -> bool:
        # identity-involving products are forced by the table invariants
        for a in g.elements():
            for b in g.elements():
                if phi[a] == 1 or phi[b] == 1:
                    continue
                if t.get(phi[a], phi[b]) != phi[g.mul(a, b)]:
                    return False
        return True

    for images in itertools.product(*cands):
        phi = {1: 1}
        ok = True
        for e in order_list[1:]:
            prev, gi = parent[e]
            v = images[gi] if phi[prev] == 1 else t.get(phi[prev], images[gi])
            if v is None:
                ok = False
                break
            phi[e] = v
        if ok and len(set(phi.values())) == g.order and verified(phi):
            return phi
    return None


def stage_check(t: PartialTable, bound: int) -> StageReport:
    """Per-condition progress of the three stage families up to the bound."""
    group_names = [g.name for g in catalog(min(bound, config.catalog_limit()))]
    if not t.cells:
        return StageReport(
            divisibility={(n, k): None for n in range(1, bound + 1) for k in range(1, bound + 1)},
            torsion={n: None for n in range(1, bound + 1)},
            embeddings={name: None for name in group_names},
        )
    candidates = sorted(set(t.labels()) | {1})
    divisibility = {}
    for n in range(1, bound + 1):
        for k in range(1, bound + 1):
            witness = None
            for m in candidates:
                if stage_power(t, m, k) == n:
                    witness = m
                    break
            divisibility[(n, k)] = witness
    torsion = {n: _torsion_exponent(t, n) for n in range(1, bound + 1)}
    embeddings = {}
    for g in catalog(min(bound, config.catalog_limit())):
        embeddings[g.name] = stage_embedding(g, t)
    return StageReport(divisibility=divisibility, torsion=torsion, embeddings=embeddings)
