"""Partial multiplication tables, the two clopen bases, supp, and the
action of 1-fixing finite permutations by induced homeomorphisms.

Only finite stages exist here: a PartialTable is a finite cell map standing
in for an unknown infinite table extending it.
"""

import enum
from types import MappingProxyType

from . import words as W
from .errors import NotSquareForm
from .fingroup import FinGroup, direct_product


class Tristate(enum.Enum):
    YES = "yes"
    NO = "no"
    UNDETERMINED = "undetermined"


def _normalize_cells(cells):
    if hasattr(cells, "items"):
        iterable = (((i, j), k) for (i, j), k in cells.items())
    else:
        iterable = (((i, j), k) for i, j, k in cells)
    out = {}
    for (i, j), k in iterable:
        for v in (i, j, k):
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"labels must be integers >= 1, got {v!r}")
        if (i, j) in out and out[(i, j)] != k:
            raise ValueError(f"conflicting values for cell ({i},{j}): {out[(i, j)]} vs {k}")
        out[(i, j)] = k
    return out


class PartialTable:
    """A finite partial multiplication table; label 1 acts as the identity."""

    __slots__ = ("_cells",)

    def __init__(self, cells=()):
        out = _normalize_cells(cells)
        for (i, j), k in out.items():
            if i == 1 and k != j:
                raise ValueError(f"identity row violated: cell (1,{j}) must be {j}, got {k}")
            if j == 1 and k != i:
                raise ValueError(f"identity column violated: cell ({i},1) must be {i}, got {k}")
        object.__setattr__(self, "_cells", out)

    def __setattr__(self, name, value):
        raise AttributeError("PartialTable is immutable")

    @property
    def cells(self):
        return MappingProxyType(self._cells)

    def get(self, i: int, j: int):
        return self._cells.get((i, j))

    def __len__(self):
        return len(self._cells)

    def __eq__(self, other):
        return isinstance(other, PartialTable) and self._cells == other._cells

    def __hash__(self):
        return hash(frozenset(self._cells.items()))

    def labels(self) -> list:
        out = set()
        for (i, j), k in self._cells.items():
            out.update((i, j, k))
        return sorted(out)

    def known_inverse(self, x: int):
        """Smallest y certified as x's inverse by a cell x*y=1 or y*x=1; None if none."""
        if x == 1:
            return 1
        best = None
        for (i, j), k in self._cells.items():
            if k != 1:
                continue
            if i == x and (best is None or j < best):
                best = j
            if j == x and (best is None or i < best):
                best = i
        return best

    def with_cells(self, new_cells) -> "PartialTable":
        add = _normalize_cells(new_cells)
        merged = dict(self._cells)
        for (i, j), k in add.items():
            if (i, j) in merged and merged[(i, j)] != k:
                raise ValueError(f"cell ({i},{j}) already holds {merged[(i, j)]}, cannot write {k}")
            merged[(i, j)] = k
        return PartialTable(merged)

    def to_json(self) -> dict:
        return {"cells": [[i, j, k] for (i, j), k in sorted(self._cells.items())]}

    @classmethod
    def from_json(cls, obj: dict) -> "PartialTable":
        return cls([(i, j, k) for i, j, k in obj["cells"]])

    def __repr__(self):
        return f"PartialTable({len(self._cells)} cells)"


class CellClopen:
    """Basic clopen set given by finitely many cell constraints i*j = k."""

    __slots__ = ("_constraints",)

    def __init__(self, constraints=()):
        object.__setattr__(self, "_constraints", _normalize_cells(constraints))

    def __setattr__(self, name, value):
        raise AttributeError("CellClopen is immutable")

    @property
    def constraints(self):
        return MappingProxyType(self._constraints)

    def __len__(self):
        return len(self._constraints)

    def __eq__(self, other):
        return isinstance(other, CellClopen) and self._constraints == other._constraints

    def __hash__(self):
        return hash(frozenset(self._constraints.items()))

    def square_form(self) -> int:
        """The k with constraint domain exactly {1..k} x {1..k}; NotSquareForm otherwise."""
        if not self._constraints:
            return 0
        k = max(max(i, j) for i, j in self._constraints)
        if len(self._constraints) != k * k:
            raise NotSquareForm(f"{len(self._constraints)} constraints do not fill a {k}x{k} block")
        for i in range(1, k + 1):
            for j in range(1, k + 1):
                if (i, j) not in self._constraints:
                    raise NotSquareForm(f"cell ({i},{j}) of the {k}x{k} block is unconstrained")
        return k

    def to_json(self) -> dict:
        return {"constraints": [[i, j, k] for (i, j), k in sorted(self._constraints.items())]}

    @classmethod
    def from_json(cls, obj: dict) -> "CellClopen":
        return cls([(i, j, k) for i, j, k in obj["constraints"]])

    def __repr__(self):
        return f"CellClopen({len(self._constraints)} constraints)"


class WordClopen:
    """Basic clopen set given by word equations/inequations at parameter labels."""

    __slots__ = ("params", "equations", "inequations")

    def __init__(self, params, equations=(), inequations=()):
        params = tuple(params)
        for p in params:
            if not isinstance(p, int) or p < 1:
                raise ValueError(f"parameters must be labels >= 1, got {p!r}")
        equations = tuple((w, int(b)) for w, b in equations)
        inequations = tuple((w, int(c)) for w, c in inequations)
        for w, target in equations + inequations:
            if not isinstance(w, W.Word):
                raise ValueError("equations and inequations must pair a Word with a label")
            if target < 1:
                raise ValueError("target labels start at 1")
            for idx in w.free_vars():
                if idx >= len(params):
                    raise ValueError(f"word uses variable x{idx} but only {len(params)} parameters given")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "equations", equations)
        object.__setattr__(self, "inequations", inequations)

    def __setattr__(self, name, value):
        raise AttributeError("WordClopen is immutable")

    def mentioned_labels(self) -> frozenset:
        out = set(self.params)
        for w, target in self.equations + self.inequations:
            out.update(w.constants())
            out.add(target)
        return frozenset(out)

    def to_json(self) -> dict:
        return {
            "params": list(self.params),
            "equations": [{"word": w.to_text(), "target": b} for w, b in self.equations],
            "inequations": [{"word": w.to_text(), "excluded": c} for w, c in self.inequations],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WordClopen":
        return cls(
            obj["params"],
            [(W.Word.from_text(e["word"]), e["target"]) for e in obj.get("equations", [])],
            [(W.Word.from_text(e["word"]), e["excluded"]) for e in obj.get("inequations", [])],
        )


class FinitePermutation:
    """A permutation of ℕ fixing 1 and all but finitely many labels."""

    __slots__ = ("_map",)

    def __init__(self, mapping=()):
        if hasattr(mapping, "items"):
            pairs = list(mapping.items())
        else:
            pairs = [(a, b) for a, b in mapping]
        m = {}
        for a, b in pairs:
            for v in (a, b):
                if not isinstance(v, int) or v < 1:
                    raise ValueError(f"labels must be integers >= 1, got {v!r}")
            if a in m and m[a] != b:
                raise ValueError(f"label {a} mapped twice")
            m[a] = b
        m = {a: b for a, b in m.items() if a != b}
        if 1 in m:
            raise ValueError("a finite permutation here must fix label 1")
        if len(set(m.values())) != len(m):
            raise ValueError("mapping is not injective")
        if set(m.values()) != set(m.keys()):
            raise ValueError("image of the support must equal the support")
        object.__setattr__(self, "_map", m)

    def __setattr__(self, name, value):
        raise AttributeError("FinitePermutation is immutable")

    @classmethod
    def identity(cls) -> "FinitePermutation":
        return cls()

    @classmethod
    def swap(cls, a: int, b: int) -> "FinitePermutation":
        if a == b:
            return cls()
        return cls({a: b, b: a})

    @property
    def support(self) -> tuple:
        return tuple(sorted(self._map))

    def apply(self, x: int) -> int:
        return self._map.get(x, x)

    def inverse(self) -> "FinitePermutation":
        return FinitePermutation({b: a for a, b in self._map.items()})

    def compose(self, other: "FinitePermutation") -> "FinitePermutation":
        """(self.compose(other)).apply(x) == self.apply(other.apply(x))."""
        keys = set(self._map) | set(other._map)
        return FinitePermutation({x: self.apply(other.apply(x)) for x in keys})

    def __eq__(self, other):
        return isinstance(other, FinitePermutation) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def to_json(self) -> dict:
        return {"map": [[a, b] for a, b in sorted(self._map.items())]}

    @classmethod
    def from_json(cls, obj: dict) -> "FinitePermutation":
        return cls([(a, b) for a, b in obj["map"]])

    def __repr__(self):
        return f"FinitePermutation({dict(sorted(self._map.items()))})"


def satisfies_cell_clopen(t: PartialTable, b: CellClopen) -> Tristate:
    """Yes iff every constraint is a cell of t; No iff some cell contradicts one."""
    undetermined = False
    for (i, j), k in b.constraints.items():
        v = t.get(i, j)
        if v is None:
            undetermined = True
        elif v != k:
            return Tristate.NO
    return Tristate.UNDETERMINED if undetermined else Tristate.YES


def satisfies_word_clopen(structure, w: WordClopen) -> Tristate:
    """Evaluate w's words at its parameters over a FinGroup or PartialTable.

    Labels mentioned by w must occur in the structure, else Undetermined.
    Over a partial table, a missing product or inverse raises EvaluationBlocked.
    """
    assignment = dict(enumerate(w.params))
    if isinstance(structure, FinGroup):
        present = set(range(1, structure.order + 1))
        evaluate = lambda word: W.evaluate(word, structure, assignment)
    else:
        present = set(structure.labels()) | {1}
        evaluate = lambda word: W.evaluate_partial(word, structure, assignment)
    if not w.mentioned_labels() <= present:
        return Tristate.UNDETERMINED
    for word, target in w.equations:
        if evaluate(word) != target:
            return Tristate.NO
    for word, excluded in w.inequations:
        if evaluate(word) == excluded:
            return Tristate.NO
    return Tristate.YES


def supp(b: CellClopen) -> frozenset:
    """{1..k} together with all constraint values, for a square-form clopen."""
    k = b.square_form()
    out = set(range(1, k + 1))
    out.update(b.constraints.values())
    return frozenset(out)


def apply_homeomorphism(phi: FinitePermutation, t: PartialTable) -> PartialTable:
    return PartialTable(
        {(phi.apply(i), phi.apply(j)): phi.apply(k) for (i, j), k in t.cells.items()}
    )


def transport_clopen(phi: FinitePermutation, b: CellClopen) -> CellClopen:
    return CellClopen(
        {(phi.apply(i), phi.apply(j)): phi.apply(k) for (i, j), k in b.constraints.items()}
    )


def _check_witness(clopen: CellClopen, g: FinGroup):
    for (i, j), k in clopen.constraints.items():
        if i > g.order or j > g.order or k > g.order:
            raise ValueError(f"witness of order {g.order} does not carry label {max(i, j, k)}")
        if g.mul(i, j) != k:
            raise ValueError(f"witness violates constraint ({i},{j})->{k}")


def homogeneity_witness(u: CellClopen, g_u: FinGroup, v: CellClopen, g_v: FinGroup):
    """A permutation phi and a finite table lying in both transport_clopen(phi,u) and v.

    phi moves supp(u) minus {1} to fresh labels disjoint from supp(v); the table
    is the full direct-product table of the two witnesses, relabeled so the
    (.,1) axis carries phi(supp(u)) and the (1,.) axis carries supp(v).
    Both inputs must be square-form with the given groups as witnesses.
    """
    m_supp = sorted(supp(u))
    n_supp = sorted(supp(v))
    _check_witness(u, g_u)
    _check_witness(v, g_v)

    fresh_base = max([1] + m_supp + n_supp)
    pairs = {}
    nxt = fresh_base
    for m in m_supp:
        if m == 1:
            continue
        nxt += 1
        pairs[m] = nxt
        pairs[nxt] = m
    phi = FinitePermutation(pairs)

    prod = direct_product(g_u, g_v)
    ext = {}
    used = set()
    for a in g_u.elements():
        lbl = phi.apply(a) if a in m_supp else None
        if a == 1:
            lbl = 1
        if lbl is not None:
            ext[prod.inj1[a]] = lbl
            used.add(lbl)
    for b in g_v.elements():
        if b in n_supp:
            ext[prod.inj2[b]] = b
            used.add(b)
    nxt = max(used | {nxt})
    for p in prod.group.elements():
        if p not in ext:
            nxt += 1
            ext[p] = nxt
    cells = {}
    for p in prod.group.elements():
        for q in prod.group.elements():
            cells[(ext[p], ext[q])] = ext[prod.group.mul(p, q)]
    return phi, PartialTable(cells)
