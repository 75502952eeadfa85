"""Finite systems of word equations and inequations over a group with
parameters: exhaustive solving with propagation, conjugation systems,
bounded consistency search through catalog extensions, and the
diagram-to-system transport for square clopen blocks.
"""

from dataclasses import dataclass
from typing import Optional

from . import config
from .errors import LengthMismatch, LimitExceeded, UnknownConstant
from .fingroup import Embedding, FinGroup, catalog, direct_product, embed_search
from .table import CellClopen, FinitePermutation
from .words import CONST, VAR, Word, const, evaluate, var


class EqSystem:
    """Equations (word = 1) and inequations (word != 1) over var_count variables."""

    __slots__ = ("equations", "inequations", "var_count")

    def __init__(self, equations, inequations, var_count: int):
        equations = tuple(equations)
        inequations = tuple(inequations)
        if var_count < 0:
            raise ValueError("var_count must be >= 0")
        for w in equations + inequations:
            if not isinstance(w, Word):
                raise ValueError(f"expected Word, got {w!r}")
            for v in w.free_vars():
                if v >= var_count:
                    raise ValueError(f"variable x{v} outside var_count {var_count}")
        object.__setattr__(self, "equations", equations)
        object.__setattr__(self, "inequations", inequations)
        object.__setattr__(self, "var_count", var_count)

    def __setattr__(self, name, value):
        raise AttributeError("EqSystem is immutable")

    def constants(self) -> set:
        out = set()
        for w in self.equations + self.inequations:
            out |= w.constants()
        return out

    def to_json(self) -> dict:
        return {
            "vars": self.var_count,
            "equations": [w.to_text() for w in self.equations],
            "inequations": [w.to_text() for w in self.inequations],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EqSystem":
        return cls(
            [Word.from_text(s) for s in obj["equations"]],
            [Word.from_text(s) for s in obj["inequations"]],
            obj["vars"],
        )

    def __eq__(self, other):
        return (
            isinstance(other, EqSystem)
            and self.equations == other.equations
            and self.inequations == other.inequations
            and self.var_count == other.var_count
        )

    def __hash__(self):
        return hash((self.equations, self.inequations, self.var_count))

    def __repr__(self):
        return f"EqSystem(E={len(self.equations)}, I={len(self.inequations)}, vars={self.var_count})"


def satisfies(sys: EqSystem, g: FinGroup, assignment: dict) -> bool:
    """Total verification: every equation lands on 1 and no inequation does."""
    for v in range(sys.var_count):
        if v not in assignment:
            raise ValueError(f"assignment missing x{v}")
    for w in sys.equations:
        if evaluate(w, g, assignment) != 1:
            return False
    for w in sys.inequations:
        if evaluate(w, g, assignment) == 1:
            return False
    return True


def solve(
    sys: EqSystem,
    g: FinGroup,
    var_limit: int = None,
    order_limit: int = None,
) -> Optional[dict]:
    """Lexicographically first solution, or None after exhaustive search."""
    var_limit = config.var_limit() if var_limit is None else var_limit
    order_limit = config.solve_order_limit() if order_limit is None else order_limit
    if sys.var_count > var_limit:
        raise LimitExceeded(f"{sys.var_count} variables exceeds limit {var_limit}")
    if g.order > order_limit:
        raise LimitExceeded(f"group order {g.order} exceeds limit {order_limit}")
    for c in sys.constants():
        if not 1 <= c <= g.order:
            raise UnknownConstant(f"constant {c} outside group of order {g.order}")
    n = sys.var_count
    assignment = {}

    def eval_letters(letters) -> int:
        cur = 1
        for kind, ident, exp in letters:
            val = assignment[ident] if kind == VAR else ident
            if exp == -1:
                val = g.inv(val)
            cur = g.mul(cur, val)
        return cur

    def unassigned_positions(w: Word):
        return [
            idx
            for idx, (kind, ident, _) in enumerate(w.letters)
            if kind == VAR and ident not in assignment
        ]

    def propagate(trail: list) -> bool:
        # returns False on contradiction; forced variables are appended to trail
        changed = True
        while changed:
            changed = False
            for w in sys.equations:
                open_pos = unassigned_positions(w)
                if not open_pos:
                    if eval_letters(w.letters) != 1:
                        return False
                    continue
                if len(open_pos) == 1:
                    pos = open_pos[0]
                    kind, ident, exp = w.letters[pos]
                    before = eval_letters(w.letters[:pos])
                    after = eval_letters(w.letters[pos + 1:])
                    target = g.mul(g.inv(before), g.inv(after))
                    value = target if exp == 1 else g.inv(target)
                    assignment[ident] = value
                    trail.append(ident)
                    changed = True
            for w in sys.inequations:
                if not unassigned_positions(w) and eval_letters(w.letters) == 1:
                    return False
        return True

    def backtrack() -> Optional[dict]:
        trail = []
        if not propagate(trail):
            for v in trail:
                del assignment[v]
            return None
        branch = next((v for v in range(n) if v not in assignment), None)
        if branch is None:
            out = dict(assignment)
            for v in trail:
                del assignment[v]
            return out
        for label in range(1, g.order + 1):
            assignment[branch] = label
            found = backtrack()
            del assignment[branch]
            if found is not None:
                for v in trail:
                    del assignment[v]
                return found
        for v in trail:
            del assignment[v]
        return None

    solution = backtrack()
    if solution is not None:
        assert satisfies(sys, g, solution), "solver produced a bad assignment"
    return solution


def exhaustive_solvable(sys: EqSystem, g: FinGroup) -> bool:
    """Plain enumeration over all assignments; the reference oracle for solve."""
    import itertools

    for combo in itertools.product(range(1, g.order + 1), repeat=sys.var_count):
        if satisfies(sys, g, dict(enumerate(combo))):
            return True
    return False


# ---------------------------------------------------------------- conjugation


def conjugation_system(h_gens, alpha_images) -> EqSystem:
    """One-variable system x^-1 h_i x = alpha_i for the given generator lists."""
    h_gens = list(h_gens)
    alpha_images = list(alpha_images)
    if len(h_gens) != len(alpha_images):
        raise LengthMismatch(
            f"{len(h_gens)} generators vs {len(alpha_images)} images"
        )
    equations = [
        var(0, -1) * const(h) * var(0) * const(al, -1)
        for h, al in zip(h_gens, alpha_images)
    ]
    return EqSystem(equations, [], 1)


# ---------------------------------------------------------------- relabeling


def relabel_word(w: Word, mapping: dict) -> Word:
    letters = []
    for kind, ident, exp in w.letters:
        if kind == CONST:
            letters.append((CONST, mapping[ident], exp))
        else:
            letters.append((kind, ident, exp))
    return Word(letters)


def relabel_system(sys: EqSystem, mapping: dict) -> EqSystem:
    return EqSystem(
        [relabel_word(w, mapping) for w in sys.equations],
        [relabel_word(w, mapping) for w in sys.inequations],
        sys.var_count,
    )


# ---------------------------------------------------------------- consistency


@dataclass(frozen=True)
class ConsistencyWitness:
    group: FinGroup
    embedding: Embedding
    assignment: dict

    def to_json(self) -> dict:
        return {
            "verdict": "witness",
            "group": self.group.to_json(),
            "embedding": sorted([a, b] for a, b in self.embedding.map.items()),
            "assignment": {str(v): lbl for v, lbl in sorted(self.assignment.items())},
        }


@dataclass(frozen=True)
class NoWitnessWithinBound:
    max_order: int
    tried: int

    def to_json(self) -> dict:
        return {
            "verdict": "no-witness-within-bound",
            "max_order": self.max_order,
            "tried": self.tried,
        }


def consistency_search(sys: EqSystem, g: FinGroup, max_order: int, **solve_kw):
    """First catalog extension of g (g itself included) where sys has a solution."""
    identity_embedding = Embedding(g, g, {x: x for x in g.elements()})
    candidates = [(g, identity_embedding)]
    for h in catalog(max_order):
        if h.order < g.order or h.order % g.order:
            continue
        emb = embed_search(g, h)
        if emb is not None:
            candidates.append((h, emb))
    tried = 0
    for h, emb in candidates:
        tried += 1
        lifted = relabel_system(sys, emb.map)
        solution = solve(lifted, h, **solve_kw)
        if solution is not None:
            assert satisfies(lifted, h, solution)
            return ConsistencyWitness(group=h, embedding=emb, assignment=solution)
    return NoWitnessWithinBound(max_order=max_order, tried=tried)


# ---------------------------------------------------------------- product lift


def product_transport(sol: dict, g: FinGroup, h: FinGroup) -> dict:
    """Push an h-assignment through h -> {1}x h inside g x h."""
    prod = direct_product(g, h)
    return {v: prod.inj2[lbl] for v, lbl in sol.items()}


# ---------------------------------------------------------------- diagrams


def diagram_point_var(k: int, i: int) -> int:
    return i - 1


def diagram_cell_var(k: int, i: int, j: int) -> int:
    return k + (i - 1) * k + (j - 1)


def clopen_to_system(b: CellClopen) -> EqSystem:
    """Existential diagram of a square block: product equations plus the full
    equality/distinctness pattern of its values."""
    k = b.square_form()
    values = {(i, j): v for (i, j), v in b.constraints.items()}
    equations = []
    inequations = []
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            inequations.append(var(diagram_point_var(k, i)) * var(diagram_point_var(k, j), -1))
    cells = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1)]
    for i, j in cells:
        cv = diagram_cell_var(k, i, j)
        equations.append(
            var(diagram_point_var(k, i)) * var(diagram_point_var(k, j)) * var(cv, -1)
        )
        for l in range(1, k + 1):
            w = var(cv) * var(diagram_point_var(k, l), -1)
            if values[(i, j)] == l:
                equations.append(w)
            else:
                inequations.append(w)
    for a in range(len(cells)):
        for c in range(a + 1, len(cells)):
            w = var(diagram_cell_var(k, *cells[a])) * var(diagram_cell_var(k, *cells[c]), -1)
            if values[cells[a]] == values[cells[c]]:
                equations.append(w)
            else:
                inequations.append(w)
    return EqSystem(equations, inequations, k + k * k)


def diagram_permutation(b: CellClopen, sol: dict) -> FinitePermutation:
    """The label permutation sending block labels to their solution values;
    needs the solution to fix 1 (true whenever the block has cell (1,1) -> 1)."""
    k = b.square_form()
    mapping = {i: sol[diagram_point_var(k, i)] for i in range(1, k + 1)}
    domain = set(mapping) | set(mapping.values())
    free_targets = sorted(domain - set(mapping.values()))
    for d in sorted(domain):
        if d not in mapping:
            mapping[d] = free_targets.pop(0)
    return FinitePermutation(mapping)
