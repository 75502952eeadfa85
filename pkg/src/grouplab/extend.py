"""Extendability of finite partial tables to group tables.

A partial table either saturates to a contradiction (with a replayable
certificate), realizes inside some finite witness group found by bounded
search, or the budget runs out and the verdict is an honest Unknown.
"""

from dataclasses import dataclass
from typing import Optional

from .config import Budget
from .fingroup import FinGroup, catalog, symmetric_group, trivial_group
from .table import PartialTable

GIVEN_RULES = ()
DERIVING_RULES = ("identity-row", "identity-col", "inverse-symmetry", "associativity")
CONTRADICTION_RULES = (
    "cell-conflict",
    "left-cancellation",
    "right-cancellation",
    "identity-clash",
)


@dataclass(frozen=True)
class InferenceStep:
    rule: str
    premises: tuple  # cell triples (a, b, c)
    conclusion: Optional[tuple]  # a cell triple, or None for a contradiction

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "premises": [list(p) for p in self.premises],
            "conclusion": list(self.conclusion) if self.conclusion else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InferenceStep":
        return cls(
            rule=obj["rule"],
            premises=tuple(tuple(p) for p in obj["premises"]),
            conclusion=tuple(obj["conclusion"]) if obj["conclusion"] else None,
        )


@dataclass(frozen=True)
class SaturatedTable:
    """Consequence closure of a partial table over its own labels plus 1."""

    cells: dict  # (a, b) -> c, inputs plus everything derived
    log: tuple  # every InferenceStep taken, in order
    contradiction: Optional[tuple]  # backward-sliced steps ending in a contradiction

    @property
    def is_contradictory(self) -> bool:
        return self.contradiction is not None

    def inverse_pairs(self) -> list:
        return sorted((a, b) for (a, b), c in self.cells.items() if c == 1)


def _match_assoc(premises, conclusion):
    # (a,b)=d and (b,c)=f with (d,c)=e force (a,f)=e; with (a,f)=e force (d,c)=e
    import itertools

    for p1, p2, p3 in itertools.permutations(premises):
        a, b, d = p1
        if p2[0] != b:
            continue
        _, c, f = p2
        if p3 == (d, c, p3[2]) and conclusion == (a, f, p3[2]):
            return True
        if p3 == (a, f, p3[2]) and conclusion == (d, c, p3[2]):
            return True
    return False


def replay_certificate(t: PartialTable, steps) -> bool:
    """Mechanically re-run a derivation from t's cells to a contradiction."""
    steps = list(steps)
    if not steps or steps[-1].conclusion is not None:
        return False
    facts = {(a, b, c) for (a, b), c in t.cells.items()}
    labels = set(t.labels()) | {1}
    for idx, step in enumerate(steps):
        last = idx == len(steps) - 1
        if any(p not in facts for p in step.premises):
            return False
        if step.conclusion is None:
            if not last:
                return False
            ps = step.premises
            if step.rule == "cell-conflict":
                return (
                    len(ps) == 2
                    and ps[0][:2] == ps[1][:2]
                    and ps[0][2] != ps[1][2]
                )
            if step.rule == "left-cancellation":
                return (
                    len(ps) == 2
                    and ps[0][0] == ps[1][0]
                    and ps[0][2] == ps[1][2]
                    and ps[0][1] != ps[1][1]
                )
            if step.rule == "right-cancellation":
                return (
                    len(ps) == 2
                    and ps[0][1] == ps[1][1]
                    and ps[0][2] == ps[1][2]
                    and ps[0][0] != ps[1][0]
                )
            if step.rule == "identity-clash":
                if len(ps) != 1:
                    return False
                a, b, c = ps[0]
                return (a == 1 and c != b) or (b == 1 and c != a)
            return False
        if step.rule == "identity-row":
            _, a, a2 = step.conclusion
            if step.conclusion[0] != 1 or a != a2 or a not in labels or step.premises:
                return False
        elif step.rule == "identity-col":
            a, one, a2 = step.conclusion
            if one != 1 or a != a2 or a not in labels or step.premises:
                return False
        elif step.rule == "inverse-symmetry":
            if len(step.premises) != 1:
                return False
            a, b, c = step.premises[0]
            if c != 1 or step.conclusion != (b, a, 1):
                return False
        elif step.rule == "associativity":
            if len(step.premises) != 3 or not _match_assoc(step.premises, step.conclusion):
                return False
        else:
            return False
        facts.add(step.conclusion)
    return False


class _Saturator:
    def __init__(self, t: PartialTable):
        self.cells = {}
        self.provenance = {}  # (a, b) -> index into log, or None for givens
        self.log = []
        self.contradiction = None
        self.queue = []
        labels = set(t.labels()) | {1}
        for (a, b), c in t.cells.items():
            self.cells[(a, b)] = c
            self.provenance[(a, b)] = None
            self.queue.append((a, b, c))
        for a in sorted(labels):
            self._add(InferenceStep("identity-row", (), (1, a, a)))
            if self.contradiction:
                return
            self._add(InferenceStep("identity-col", (), (a, 1, a)))
            if self.contradiction:
                return
        self._run()

    def _slice(self, steps_back: list) -> tuple:
        # backward closure over derived premises, emitted in original log order
        needed = set()
        stack = list(steps_back)
        while stack:
            step = stack.pop()
            if id(step) in needed:
                continue
            needed.add(id(step))
            for p in step.premises:
                src = self.provenance.get((p[0], p[1]))
                if src is not None and self.cells.get((p[0], p[1])) == p[2]:
                    stack.append(self.log[src])
        return tuple(s for s in self.log if id(s) in needed)

    def _contradict(self, step: InferenceStep):
        if self.contradiction is None:
            self.log.append(step)
            self.contradiction = self._slice([step])

    def _add(self, step: InferenceStep):
        if self.contradiction is not None:
            return
        a, b, c = step.conclusion
        existing = self.cells.get((a, b))
        if existing == c:
            return
        if existing is not None:
            self.log.append(step)
            conflict = InferenceStep(
                "cell-conflict", ((a, b, existing), (a, b, c)), None
            )
            self.log.append(conflict)
            self.contradiction = self._slice([step, conflict])
            return
        if (a == 1 and c != b) or (b == 1 and c != a):
            self.log.append(step)
            clash = InferenceStep("identity-clash", ((a, b, c),), None)
            self.log.append(clash)
            self.contradiction = self._slice([step, clash])
            return
        self.log.append(step)
        self.cells[(a, b)] = c
        self.provenance[(a, b)] = len(self.log) - 1
        self.queue.append((a, b, c))

    def _run(self):
        while self.queue and not self.contradiction:
            a, b, c = self.queue.pop(0)
            if self.cells.get((a, b)) != c:
                continue
            self._cancellations(a, b, c)
            if self.contradiction:
                return
            if c == 1 and self.cells.get((b, a)) != 1:
                self._add(InferenceStep("inverse-symmetry", ((a, b, 1),), (b, a, 1)))
                if self.contradiction:
                    return
            self._associativity(a, b, c)

    def _cancellations(self, a, b, c):
        for (x, y), v in list(self.cells.items()):
            if v != c:
                continue
            if x == a and y != b:
                self._contradict(
                    InferenceStep("left-cancellation", ((a, b, c), (x, y, v)), None)
                )
                return
            if y == b and x != a:
                self._contradict(
                    InferenceStep("right-cancellation", ((a, b, c), (x, y, v)), None)
                )
                return

    def _pairs_with(self, a, b, c):
        # ordered pairs (P, Q) of cells forming P=(x,y,d), Q=(y,z,f) that involve (a,b,c)
        out = []
        for (x, y), v in list(self.cells.items()):
            if y == a:
                out.append(((x, y, v), (a, b, c)))
            if x == b:
                out.append(((a, b, c), (x, y, v)))
        return out

    def _associativity(self, a, b, c):
        # roles 1 and 2: the new cell is one of the two premise products
        for p, q in self._pairs_with(a, b, c):
            self._assoc_complete(p, q)
            if self.contradiction:
                return
        # role 3: the new cell is the left bracketing (d, z) of an existing pair
        for (x, y), d in list(self.cells.items()):
            if d == a:
                f = self.cells.get((y, b))
                if f is not None:
                    self._assoc_complete((x, y, d), (y, b, f))
                    if self.contradiction:
                        return
        # role 4: the new cell is the right bracketing (x, f) of an existing pair
        for (x, y), f in list(self.cells.items()):
            if f == b:
                d = self.cells.get((a, x))
                if d is not None:
                    self._assoc_complete((a, x, d), (x, y, f))
                    if self.contradiction:
                        return

    def _assoc_complete(self, p, q):
        (a, b, d) = p
        (b2, c, f) = q
        if b != b2:
            return
        left = self.cells.get((d, c))
        right = self.cells.get((a, f))
        if left is not None and right is None:
            self._add(
                InferenceStep("associativity", (p, q, (d, c, left)), (a, f, left))
            )
        elif right is not None and left is None:
            self._add(
                InferenceStep("associativity", (p, q, (a, f, right)), (d, c, right))
            )
        elif left is not None and right is not None and left != right:
            self._add(
                InferenceStep("associativity", (p, q, (d, c, left)), (a, f, left))
            )


def saturate(t: PartialTable) -> SaturatedTable:
    """Close t under the group-law inference rules, or certify a contradiction."""
    s = _Saturator(t)
    return SaturatedTable(
        cells=dict(s.cells), log=tuple(s.log), contradiction=s.contradiction
    )


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Extends:
    witness: FinGroup
    labeling: dict

    def to_json(self) -> dict:
        return {
            "verdict": "extends",
            "witness": self.witness.to_json(),
            "labeling": sorted([a, b] for a, b in self.labeling.items()),
        }


@dataclass(frozen=True)
class NonExtendable:
    certificate: tuple

    def to_json(self) -> dict:
        return {
            "verdict": "non-extendable",
            "certificate": [s.to_json() for s in self.certificate],
        }


@dataclass(frozen=True)
class Unknown:
    nodes_spent: int
    max_order: int

    def to_json(self) -> dict:
        return {
            "verdict": "unknown",
            "nodes_spent": self.nodes_spent,
            "max_order": self.max_order,
        }


class _NodeBudget:
    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def tick(self) -> bool:
        self.spent += 1
        return self.spent <= self.limit


def _realize(cells: dict, labels: list, g: FinGroup, nodes: _NodeBudget) -> Optional[dict]:
    """Injective map of labels into g (1 -> 1) realizing every cell, or None."""
    phi = {}
    used = set()
    by_row = {}
    by_col = {}
    by_val = {}
    for (a, b), c in cells.items():
        by_row.setdefault(a, []).append((b, c))
        by_col.setdefault(b, []).append((a, c))
        by_val.setdefault(c, []).append(((a, b), c))

    def assign(lbl, value, trail, stack) -> bool:
        if value in used:
            return False
        if (value == 1) != (lbl == 1):
            return False
        phi[lbl] = value
        used.add(value)
        trail.append(lbl)
        stack.append(lbl)
        return True

    def force_cell(a, b, c, trail, stack) -> bool:
        va, vb, vc = phi.get(a), phi.get(b), phi.get(c)
        known = (va is not None) + (vb is not None) + (vc is not None)
        if known < 2:
            return True
        if va is not None and vb is not None:
            want = g.mul(va, vb)
            if vc is not None:
                return want == vc
            return assign(c, want, trail, stack)
        if va is not None:
            return assign(b, g.mul(g.inv(va), vc), trail, stack)
        return assign(a, g.mul(vc, g.inv(vb)), trail, stack)

    def propagate(seed_label, trail) -> bool:
        # every assignment lands on trail, including those made before a conflict
        stack = [seed_label]
        while stack:
            lbl = stack.pop()
            for (b, c) in by_row.get(lbl, ()):
                if not force_cell(lbl, b, c, trail, stack):
                    return False
            for (a, c) in by_col.get(lbl, ()):
                if not force_cell(a, lbl, c, trail, stack):
                    return False
            for (ab, c) in by_val.get(lbl, ()):
                if not force_cell(ab[0], ab[1], c, trail, stack):
                    return False
        return True

    def undo(trail):
        for lbl in trail:
            used.discard(phi.pop(lbl))

    def backtrack(idx: int) -> Optional[dict]:
        while idx < len(labels) and labels[idx] in phi:
            idx += 1
        if idx == len(labels):
            return dict(phi)
        lbl = labels[idx]
        candidates = [1] if lbl == 1 else list(range(2, g.order + 1))
        for value in candidates:
            if value in used:
                continue
            if not nodes.tick():
                return None
            trail = []
            seed = []
            if assign(lbl, value, trail, seed) and propagate(lbl, trail):
                found = backtrack(idx + 1)
                if found is not None:
                    return found
            undo(trail)
            if nodes.spent > nodes.limit:
                return None
        return None

    return backtrack(0)


def check_extendable(t: PartialTable, budget: Budget = None):
    """Three-valued extendability: verified witness, replayable refutation, or Unknown."""
    budget = (budget or Budget()).resolved()
    sat = saturate(t)
    if sat.is_contradictory:
        assert replay_certificate(t, sat.contradiction), "certificate must replay"
        return NonExtendable(certificate=sat.contradiction)
    labels = [1] + sorted(set(t.labels()) - {1})
    nodes = _NodeBudget(budget.node_limit)
    candidates = list(catalog(budget.max_order))
    factorial = 1
    for k in range(2, budget.sym_bound + 1):
        factorial *= k
        if factorial > budget.max_order:
            candidates.append(symmetric_group(k))
    for g in candidates:
        if g.order < len(labels):
            continue
        phi = _realize(dict(sat.cells), labels, g, nodes)
        if phi is not None:
            for (a, b), c in t.cells.items():
                assert g.mul(phi[a], phi[b]) == phi[c], "witness must realize t"
            return Extends(witness=g, labeling=phi)
        if nodes.spent > nodes.limit:
            return Unknown(nodes_spent=nodes.spent, max_order=budget.max_order)
    return Unknown(nodes_spent=nodes.spent, max_order=budget.max_order)


def witness_prefix(g: FinGroup, labels) -> PartialTable:
    """The sub-table g induces on a label subset."""
    labels = set(labels)
    for x in labels:
        if not 1 <= x <= g.order:
            raise ValueError(f"label {x} outside group of order {g.order}")
    cells = {}
    for a in labels:
        for b in labels:
            c = g.mul(a, b)
            if c in labels:
                cells[(a, b)] = c
    return PartialTable(cells)
