"""Alternating table-filling game: legality rules, goal monitors, strategies."""

import itertools
import random
import re
from dataclasses import dataclass, replace
from typing import Optional

from . import config, extend
from .abelian import (
    IDENTITY,
    AbelianElement,
    PruferCoord,
    abelian_type,
    add,
    divide,
    embed_fin_abelian,
    negate,
    span_map,
    stage_embedding,
    stage_power,
)
from .equations import (
    ConsistencyWitness,
    EqSystem,
    consistency_search,
    relabel_system,
    solve,
)
from .errors import GoalBlocked, IllegalMove, LimitExceeded, NotYourTurn, StrategyFault
from .fingroup import (
    FinGroup,
    alternating_group,
    catalog,
    cyclic_group,
    dihedral_group,
    direct_product,
    embed_search,
    symmetric_group,
    trivial_group,
)
from .table import CellClopen, PartialTable, Tristate, satisfies_cell_clopen
from .words import VAR

EVE = "eve"
ODD = "odd"
GENERAL = "general"
ABELIAN = "abelian"

PENDING = "pending"
ACHIEVED = "achieved"
IMPOSSIBLE = "impossible"

_ASSIGN_SCAN_CAP = 200_000


# ---------------------------------------------------------------- moves


def _normalize_assignments(assignments):
    out = []
    seen = set()
    for entry in assignments:
        i, j, k = entry
        for v in (i, j, k):
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ValueError(f"cell writes need positive integer entries, got {entry!r}")
        if (i, j) in seen:
            raise ValueError(f"duplicate write target ({i},{j})")
        seen.add((i, j))
        out.append((i, j, k))
    return tuple(sorted(out))


@dataclass(frozen=True)
class Move:
    """A finite batch of cell writes, none targeting an occupied cell."""

    assignments: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "assignments", _normalize_assignments(self.assignments))

    def labels(self) -> set:
        out = set()
        for i, j, k in self.assignments:
            out.update((i, j, k))
        return out

    def to_json(self) -> dict:
        return {"cells": [[i, j, k] for i, j, k in self.assignments]}

    @classmethod
    def from_json(cls, obj: dict) -> "Move":
        return cls(tuple((i, j, k) for i, j, k in obj["cells"]))


# ---------------------------------------------------------------- goals


@dataclass(frozen=True)
class EmbedFinite:
    group: FinGroup

    def to_json(self) -> dict:
        return {"kind": "embed-finite", "group": self.group.to_json()}


@dataclass(frozen=True)
class Divisibility:
    n: int
    k: int

    def to_json(self) -> dict:
        return {"kind": "divisibility", "n": self.n, "k": self.k}


@dataclass(frozen=True)
class Inverse:
    n: int

    def to_json(self) -> dict:
        return {"kind": "inverse", "n": self.n}


@dataclass(frozen=True)
class SolveSystem:
    system: EqSystem

    def to_json(self) -> dict:
        return {"kind": "solve-system", "system": self.system.to_json()}


@dataclass(frozen=True)
class ClopenTarget:
    clopen: CellClopen

    def to_json(self) -> dict:
        return {"kind": "clopen", "clopen": self.clopen.to_json()}


_GOAL_TYPES = (EmbedFinite, Divisibility, Inverse, SolveSystem, ClopenTarget)

_NAMED = re.compile(r"^([CSAD])(\d+)$")


def group_named(name: str) -> FinGroup:
    """Resolve a catalog-style name, including x-joined direct products."""
    makers = {
        "C": cyclic_group,
        "S": symmetric_group,
        "A": alternating_group,
        "D": dihedral_group,
    }
    parts = name.split("x")
    built = None
    for part in parts:
        m = _NAMED.match(part)
        if not m:
            raise ValueError(f"unknown group name {name!r}")
        g = makers[m.group(1)](int(m.group(2)))
        built = g if built is None else direct_product(built, g).group
    return built


def goal_from_json(obj: dict):
    kind = obj["kind"]
    if kind == "embed-finite":
        raw = obj["group"]
        g = group_named(raw) if isinstance(raw, str) else FinGroup.from_json(raw)
        return EmbedFinite(g)
    if kind == "divisibility":
        return Divisibility(obj["n"], obj["k"])
    if kind == "inverse":
        return Inverse(obj["n"])
    if kind == "solve-system":
        return SolveSystem(EqSystem.from_json(obj["system"]))
    if kind == "clopen":
        return ClopenTarget(CellClopen.from_json(obj["clopen"]))
    raise ValueError(f"unknown goal kind {kind!r}")


@dataclass(frozen=True)
class GoalSchedule:
    goals: tuple = ()

    def __post_init__(self):
        goals = tuple(self.goals)
        for g in goals:
            if not isinstance(g, _GOAL_TYPES):
                raise ValueError(f"not a goal: {g!r}")
        object.__setattr__(self, "goals", goals)

    def to_json(self) -> list:
        return [g.to_json() for g in self.goals]

    @classmethod
    def from_json(cls, obj) -> "GoalSchedule":
        if isinstance(obj, dict):
            obj = obj["goals"]
        return cls(tuple(goal_from_json(g) for g in obj))


@dataclass(frozen=True)
class MonitorState:
    goal: object
    status: str = PENDING
    step: Optional[int] = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "goal": self.goal.to_json(),
            "status": self.status,
            "step": self.step,
            "note": self.note,
        }


# ---------------------------------------------------------------- witnesses


@dataclass(frozen=True)
class GroupWitness:
    """A finite group plus an injective labeling realizing every filled cell."""

    group: FinGroup
    labeling: dict

    def ref(self) -> dict:
        return {"kind": "finite-group", "name": self.group.name, "order": self.group.order}

    def verify(self, t: PartialTable) -> bool:
        lab = self.labeling
        order = self.group.order
        for lbl, g in lab.items():
            if not (isinstance(lbl, int) and 1 <= g <= order):
                return False
            if (g == 1) != (lbl == 1):
                return False
        if len(set(lab.values())) != len(lab):
            return False
        for lbl in t.labels():
            if lbl not in lab:
                return False
        mul = self.group.mul
        for (i, j), k in t.cells.items():
            if mul(lab[i], lab[j]) != lab[k]:
                return False
        return True


@dataclass(frozen=True)
class AbelianWitness:
    """An injective labeling into the big torsion group realizing every cell."""

    labeling: dict

    def ref(self) -> dict:
        return {"kind": "abelian-embedding", "labels": len(self.labeling)}

    def verify(self, t: PartialTable) -> bool:
        lab = self.labeling
        for lbl, e in lab.items():
            if e.is_identity() != (lbl == 1):
                return False
        if len(set(lab.values())) != len(lab):
            return False
        for lbl in t.labels():
            if lbl not in lab:
                return False
        for (i, j), k in t.cells.items():
            if add(lab[i], lab[j]) != lab[k]:
                return False
        return True


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class Legal:
    witness: object


@dataclass(frozen=True)
class Illegal:
    rule: Optional[int]
    reason: str
    certificate: tuple = ()

    def to_json(self) -> dict:
        out = {"verdict": "illegal", "rule": self.rule, "reason": self.reason}
        if self.certificate:
            out["certificate"] = [s.to_json() for s in self.certificate]
        return out


@dataclass(frozen=True)
class Unknown:
    reason: str


# ---------------------------------------------------------------- state


@dataclass(frozen=True)
class HistoryEntry:
    step: int
    mover: str
    move: Move
    verdict: str
    witness: object = None

    def ref(self) -> Optional[dict]:
        return self.witness.ref() if self.witness is not None else None


@dataclass(frozen=True)
class GameState:
    table: PartialTable
    step: int
    to_move: str
    mode: str
    schedule: GoalSchedule
    monitors: tuple
    history: tuple = ()
    witness: object = None
    permissive: bool = False


def new_game(mode: str = GENERAL, schedule: GoalSchedule = None, permissive: bool = False) -> GameState:
    if mode not in (GENERAL, ABELIAN):
        raise ValueError(f"unknown mode {mode!r}")
    schedule = schedule if schedule is not None else GoalSchedule()
    table = PartialTable()
    if mode == ABELIAN:
        witness = AbelianWitness({1: IDENTITY})
    else:
        witness = GroupWitness(trivial_group(), {1: 1})
    monitors = tuple(MonitorState(g) for g in schedule.goals)
    monitors = _update_monitors(monitors, table, 0)
    return GameState(
        table=table,
        step=1,
        to_move=EVE,
        mode=mode,
        schedule=schedule,
        monitors=monitors,
        history=(),
        witness=witness,
        permissive=permissive,
    )


# ---------------------------------------------------------------- monitors


def _solve_in_stage(t: PartialTable, sys: EqSystem) -> Optional[dict]:
    """First assignment whose equation chains all close inside the cells."""
    cells = t.cells
    cands = sorted(set(t.labels()) | {1})
    if len(cands) ** sys.var_count > _ASSIGN_SCAN_CAP:
        return None
    inv = {1: 1}
    for (i, j), k in cells.items():
        if k == 1:
            inv.setdefault(i, j)
            inv.setdefault(j, i)

    def eval_word(w, assign):
        cur = 1
        for kind, ident, exp in w.letters:
            base = assign[ident] if kind == VAR else ident
            if exp == -1:
                base = inv.get(base)
                if base is None:
                    return None
            if cur == 1:
                cur = base
            elif base == 1:
                pass
            else:
                cur = cells.get((cur, base))
                if cur is None:
                    return None
        return cur

    for combo in itertools.product(cands, repeat=sys.var_count):
        assign = dict(enumerate(combo))
        ok = all(eval_word(w, assign) == 1 for w in sys.equations)
        if ok:
            for w in sys.inequations:
                r = eval_word(w, assign)
                if r is None or r == 1:
                    ok = False
                    break
        if ok:
            return assign
    return None


def _goal_status(goal, t: PartialTable):
    if isinstance(goal, EmbedFinite):
        phi = stage_embedding(goal.group, t)
        if phi is not None:
            return ACHIEVED, "image " + ",".join(str(phi[a]) for a in sorted(phi))
        return PENDING, ""
    if isinstance(goal, Divisibility):
        for m in sorted(set(t.labels()) | {1}):
            if stage_power(t, m, goal.k) == goal.n:
                return ACHIEVED, f"m={m}"
        return PENDING, ""
    if isinstance(goal, Inverse):
        m = t.known_inverse(goal.n)
        if m is not None:
            return ACHIEVED, f"m={m}"
        return PENDING, ""
    if isinstance(goal, SolveSystem):
        assign = _solve_in_stage(t, goal.system)
        if assign is not None:
            return ACHIEVED, ",".join(f"x{v}={l}" for v, l in sorted(assign.items()))
        return PENDING, ""
    if isinstance(goal, ClopenTarget):
        verdict = satisfies_cell_clopen(t, goal.clopen)
        if verdict is Tristate.YES:
            return ACHIEVED, ""
        if verdict is Tristate.NO:
            return IMPOSSIBLE, "a constrained cell holds a different value"
        return PENDING, ""
    raise ValueError(f"not a goal: {goal!r}")


def _update_monitors(monitors, t: PartialTable, completed_step: int):
    out = []
    for mon in monitors:
        if mon.status != PENDING:
            out.append(mon)
            continue
        status, note = _goal_status(mon.goal, t)
        if status == PENDING:
            out.append(mon)
        else:
            out.append(MonitorState(mon.goal, status, completed_step, note))
    return tuple(out)


def _with_notes(state: GameState, notes: dict) -> GameState:
    monitors = list(state.monitors)
    for idx, note in notes.items():
        if 0 <= idx < len(monitors) and monitors[idx].status == PENDING:
            monitors[idx] = replace(monitors[idx], note=note)
    return replace(state, monitors=tuple(monitors))


# ---------------------------------------------------------------- legality


def _rule2_missing(cells: dict, n: int) -> list:
    return [(i, j) for i in range(1, n + 2) for j in range(1, n + 2) if (i, j) not in cells]


def _rule3_missing(cells: dict, n: int):
    rows = set(range(1, n + 2))
    cols = set(range(1, n + 2))
    for (i, j), k in cells.items():
        if k == 1:
            rows.discard(i)
            cols.discard(j)
    return sorted(rows), sorted(cols)


def _symmetry_conflicts(cells: dict) -> list:
    out = []
    for (i, j), k in cells.items():
        if i == j:
            continue
        mirror = cells.get((j, i))
        if mirror != k:
            out.append((i, j))
    return sorted(out)


def legal(state: GameState, m: Move, budget=None, witness=None):
    """Check one move against the three stage rules; never raises, only verdicts."""
    t = state.table
    cells = dict(t.cells)
    for i, j, k in m.assignments:
        if (i, j) in cells:
            return Illegal(None, f"write-once: cell ({i},{j}) is already filled")
        cells[(i, j)] = k
    n = state.step
    missing = _rule2_missing(cells, n)
    if missing:
        shown = ",".join(f"({i},{j})" for i, j in missing[:4])
        return Illegal(2, f"rule 2: block through {n + 1} incomplete at {shown}")
    rows, cols = _rule3_missing(cells, n)
    if rows or cols:
        return Illegal(3, f"rule 3: no identity cell in rows {rows} / columns {cols}")
    if state.mode == ABELIAN:
        bad = _symmetry_conflicts(cells)
        if bad:
            i, j = bad[0]
            return Illegal(None, f"abelian mode: cell ({i},{j}) has no matching mirror ({j},{i})")
    post = PartialTable([(i, j, k) for (i, j), k in cells.items()])
    if witness is not None:
        if witness.verify(post):
            return Legal(witness)
        return Illegal(1, "rule 1: the supplied witness does not certify the extended table")
    res = extend.check_extendable(post, budget)
    if isinstance(res, extend.Extends):
        return Legal(GroupWitness(res.witness, dict(res.labeling)))
    if isinstance(res, extend.NonExtendable):
        return Illegal(1, "rule 1: the extended table is certifiably non-extendable", res.certificate)
    return Unknown(f"rule 1 undecided: {res.nodes_spent} nodes spent, witnesses tried up to order {res.max_order}")


def apply_verdict(state: GameState, m: Move, verdict, mover: str = None) -> GameState:
    if mover is not None and mover != state.to_move:
        raise NotYourTurn(f"it is {state.to_move}'s turn at step {state.step}")
    if isinstance(verdict, Illegal):
        raise IllegalMove(f"step {state.step} ({state.to_move}): {verdict.reason}")
    if isinstance(verdict, Unknown):
        if not state.permissive:
            raise IllegalMove(f"step {state.step} ({state.to_move}): {verdict.reason}")
        new_witness = None
        kind = "unknown-admitted"
    else:
        new_witness = verdict.witness
        kind = "legal"
    table = state.table.with_cells(m.assignments)
    entry = HistoryEntry(state.step, state.to_move, m, kind, new_witness)
    monitors = _update_monitors(state.monitors, table, state.step)
    return replace(
        state,
        table=table,
        step=state.step + 1,
        to_move=ODD if state.to_move == EVE else EVE,
        monitors=monitors,
        history=state.history + (entry,),
        witness=new_witness,
    )


def apply(state: GameState, m: Move, witness=None, budget=None, mover: str = None) -> GameState:
    return apply_verdict(state, m, legal(state, m, budget=budget, witness=witness), mover=mover)


# ---------------------------------------------------------------- transcripts


@dataclass(frozen=True)
class Transcript:
    config: dict
    moves: tuple
    final_table: PartialTable
    monitors: tuple

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "moves": [
                {
                    "step": e.step,
                    "mover": e.mover,
                    "cells": [[i, j, k] for i, j, k in e.move.assignments],
                    "verdict": e.verdict,
                    "witnessRef": e.ref(),
                }
                for e in self.moves
            ],
            "finalTable": self.final_table.to_json(),
            "monitors": [m.to_json() for m in self.monitors],
        }


def build_transcript(state: GameState, extra_config: dict = None) -> Transcript:
    cfg = {
        "mode": state.mode,
        "permissive": state.permissive,
        "schedule": state.schedule.to_json(),
    }
    cfg.update(extra_config or {})
    return Transcript(cfg, state.history, state.table, state.monitors)


def run(state: GameState, eve, odd, steps: int, budget=None, extra_config: dict = None) -> Transcript:
    """Alternate the two strategies for `steps` moves and report the outcome."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    for _ in range(steps):
        strat = eve if state.to_move == EVE else odd
        try:
            m, witness = strat.next_move(state)
        except GoalBlocked as exc:
            raise StrategyFault(state.to_move, state.step, str(exc))
        verdict = legal(state, m, budget=budget, witness=witness)
        if isinstance(verdict, Illegal):
            raise StrategyFault(state.to_move, state.step, verdict.reason)
        if isinstance(verdict, Unknown) and not state.permissive:
            raise StrategyFault(state.to_move, state.step, verdict.reason)
        state = apply_verdict(state, m, verdict)
        notes = getattr(strat, "last_blocked", None)
        if notes:
            state = _with_notes(state, notes)
    cfg = {"steps": steps, "eve": eve.name, "odd": odd.name}
    cfg.update(extra_config or {})
    return build_transcript(state, cfg)


# ---------------------------------------------------------------- witness extension


class _GroupExtender:
    """Grows a finite-group witness to cover fresh labels and forced products."""

    def __init__(self, witness: GroupWitness, rng: random.Random = None):
        self.group = witness.group
        self.lab = dict(witness.labeling)
        self.lab.setdefault(1, 1)
        self.rng = rng
        self._rev = {g: l for l, g in self.lab.items()}

    def witness(self) -> GroupWitness:
        return GroupWitness(self.group, dict(self.lab))

    def free_elements(self) -> list:
        return [g for g in range(2, self.group.order + 1) if g not in self._rev]

    def grow(self):
        factor = 2 if self.rng is None else self.rng.choice((2, 3))
        prod = direct_product(self.group, cyclic_group(factor))
        self.adopt(prod.group, prod.inj1)
        return prod

    def adopt(self, group: FinGroup, via: dict):
        """Replace the witness group, rerouting old labels through `via`."""
        self.lab = {l: via[g] for l, g in self.lab.items()}
        self.group = group
        self._rev = {g: l for l, g in self.lab.items()}

    def adopt_full(self, group: FinGroup, labeling: dict):
        """Replace both group and labeling wholesale."""
        self.group = group
        self.lab = dict(labeling)
        self.lab.setdefault(1, 1)
        self._rev = {g: l for l, g in self.lab.items()}

    def ensure_label(self, lbl: int):
        if lbl in self.lab:
            return
        free = self.free_elements()
        if not free:
            self.grow()
            free = self.free_elements()
        pick = free[0] if self.rng is None else self.rng.choice(free)
        self.lab[lbl] = pick
        self._rev[pick] = lbl

    def label_for(self, g: int) -> int:
        if g in self._rev:
            return self._rev[g]
        fresh = max(self.lab) + 1
        self.lab[fresh] = g
        self._rev[g] = fresh
        return fresh

    def value_of(self, i: int, j: int) -> int:
        return self.label_for(self.group.mul(self.lab[i], self.lab[j]))

    def inverse_label(self, i: int) -> int:
        return self.label_for(self.group.inv(self.lab[i]))


class _AbelianExtender:
    """Grows a labeling into the big torsion group; capacity is never an issue."""

    def __init__(self, witness: AbelianWitness, rng: random.Random = None):
        self.lab = dict(witness.labeling)
        self.lab.setdefault(1, IDENTITY)
        self.rng = rng
        self._rev = {e: l for l, e in self.lab.items()}
        self._copies = {}
        for e in self.lab.values():
            for p, i in e.support():
                self._copies[p] = max(self._copies.get(p, 0), i + 1)

    def witness(self) -> AbelianWitness:
        return AbelianWitness(dict(self.lab))

    def copy_base(self) -> dict:
        return dict(self._copies)

    def fresh_element(self) -> AbelianElement:
        p = 2 if self.rng is None else self.rng.choice((2, 3))
        m = 1 if self.rng is None else self.rng.choice((1, 1, 2))
        i = self._copies.get(p, 0)
        self._copies[p] = i + 1
        return AbelianElement({(p, i): PruferCoord(p, 1, m)})

    def note_used(self, e: AbelianElement):
        for p, i in e.support():
            self._copies[p] = max(self._copies.get(p, 0), i + 1)

    def adopt(self, labeling: dict):
        self.lab = dict(labeling)
        self.lab.setdefault(1, IDENTITY)
        self._rev = {e: l for l, e in self.lab.items()}
        self._copies = {}
        for e in self.lab.values():
            self.note_used(e)

    def ensure_label(self, lbl: int):
        if lbl in self.lab:
            return
        e = self.fresh_element()
        self.lab[lbl] = e
        self._rev[e] = lbl

    def label_for(self, e: AbelianElement) -> int:
        if e in self._rev:
            return self._rev[e]
        self.note_used(e)
        fresh = max(self.lab) + 1
        self.lab[fresh] = e
        self._rev[e] = fresh
        return fresh

    def value_of(self, i: int, j: int) -> int:
        return self.label_for(add(self.lab[i], self.lab[j]))

    def inverse_label(self, i: int) -> int:
        return self.label_for(negate(self.lab[i]))


def _extender_for(state: GameState, rng: random.Random = None):
    w = state.witness
    if w is None:
        res = extend.check_extendable(state.table)
        if not isinstance(res, extend.Extends):
            raise GoalBlocked("no verified witness is available for the current table")
        w = GroupWitness(res.witness, dict(res.labeling))
    if isinstance(w, AbelianWitness):
        return _AbelianExtender(w, rng)
    return _GroupExtender(w, rng)


def _obligations(state: GameState, ext, buf: dict):
    """Fill the block and identity-row/column debts for the current step."""
    t = state.table
    n = state.step

    def filled(i, j):
        return t.get(i, j) is not None or (i, j) in buf

    for lbl in range(1, n + 2):
        ext.ensure_label(lbl)
    for i in range(1, n + 2):
        for j in range(1, n + 2):
            if not filled(i, j):
                buf[(i, j)] = ext.value_of(i, j)
    have_row, have_col = set(), set()
    for (i, j), k in t.cells.items():
        if k == 1:
            have_row.add(i)
            have_col.add(j)
    for (i, j), k in buf.items():
        if k == 1:
            have_row.add(i)
            have_col.add(j)
    for r in range(1, n + 2):
        need_row = r not in have_row
        need_col = r not in have_col
        if not (need_row or need_col):
            continue
        m = ext.inverse_label(r)
        if need_row:
            if not filled(r, m):
                buf[(r, m)] = 1
            have_row.add(r)
            have_col.add(m)
        if need_col:
            if not filled(m, r):
                buf[(m, r)] = 1
            have_col.add(r)
            have_row.add(m)


def _mirror(state: GameState, ext, buf: dict):
    t = state.table
    for (i, j), k in list(buf.items()):
        if i == j:
            continue
        if t.get(j, i) is None and (j, i) not in buf:
            buf[(j, i)] = ext.value_of(j, i)


def _finish_move(state: GameState, ext, buf: dict):
    if state.mode == ABELIAN:
        _mirror(state, ext, buf)
    move = Move(tuple((i, j, k) for (i, j), k in buf.items()))
    return move, ext.witness()


# ---------------------------------------------------------------- eve strategies


class _RandomLegal:
    def __init__(self, seed: int):
        self.name = f"random-legal(seed={seed})"
        self.rng = random.Random(seed)

    def _candidate(self, state: GameState):
        ext = _extender_for(state, self.rng)
        buf = {}
        _obligations(state, ext, buf)
        if self.rng.random() < 0.7:
            t = state.table
            known = sorted(ext.lab)
            pairs = [
                (a, b)
                for a in known
                for b in known
                if t.get(a, b) is None and (a, b) not in buf
            ]
            if pairs:
                a, b = pairs[self.rng.randrange(len(pairs))]
                buf[(a, b)] = ext.value_of(a, b)
        return _finish_move(state, ext, buf)

    def next_move(self, state: GameState):
        cands = [self._candidate(state) for _ in range(3)]
        return cands[self.rng.randrange(len(cands))]


class _Spoiler:
    name = "spoiler"

    def next_move(self, state: GameState):
        ext = _extender_for(state)
        buf = {}
        _obligations(state, ext, buf)
        if isinstance(ext, _AbelianExtender):
            e1 = ext.fresh_element()
            e2 = ext.fresh_element()
            l1 = ext.label_for(e1)
            l2 = ext.label_for(e2)
            buf[(l1, l2)] = ext.label_for(add(e1, e2))
        else:
            found = None
            for _ in range(3):
                free = ext.free_elements()
                taken = set(ext._rev)
                for e1 in free:
                    for e2 in free:
                        pr = ext.group.mul(e1, e2)
                        if pr != 1 and pr not in taken and pr not in (e1, e2):
                            found = (e1, e2, pr)
                            break
                    if found:
                        break
                if found:
                    break
                ext.grow()
            if found:
                e1, e2, pr = found
                l1 = ext.label_for(e1)
                l2 = ext.label_for(e2)
                buf[(l1, l2)] = ext.label_for(pr)
        return _finish_move(state, ext, buf)


def random_legal(seed: int):
    """Eve who samples a legal minimal move, witness attached."""
    return _RandomLegal(seed)


def spoiler():
    """Eve who keeps injecting fresh labels to bloat witness searches."""
    return _Spoiler()


class _Scripted:
    def __init__(self, moves, name):
        self.moves = list(moves)
        self.name = name
        self._at = 0

    def next_move(self, state):
        if self._at >= len(self.moves):
            raise GoalBlocked("script exhausted")
        m = self.moves[self._at]
        self._at += 1
        return m, None


def scripted(moves, name: str = "human"):
    """Player who replays a fixed move list, then stops."""
    return _Scripted(moves, name)


# ---------------------------------------------------------------- the scheduler


class _OddScheduler:
    name = "scheduler"

    def __init__(self, schedule: GoalSchedule):
        self.schedule = schedule
        self.last_blocked = {}
        self._copies = []

    def _pending(self, state: GameState):
        if state.schedule.goals == self.schedule.goals:
            return [(i, m.goal) for i, m in enumerate(state.monitors) if m.status == PENDING]
        out = []
        for i, goal in enumerate(self.schedule.goals):
            status, _ = _goal_status(goal, state.table)
            if status == PENDING:
                out.append((i, goal))
        return out

    def next_move(self, state: GameState):
        self.last_blocked = {}
        ext = _extender_for(state)
        buf = {}
        for idx, goal in self._pending(state):
            try:
                self._realize(goal, state, ext, buf)
                break
            except GoalBlocked as exc:
                self.last_blocked[idx] = str(exc)
        _obligations(state, ext, buf)
        return _finish_move(state, ext, buf)

    # -- goal realizations

    def _realize(self, goal, state, ext, buf):
        if isinstance(goal, EmbedFinite):
            self._realize_embed(goal.group, state, ext, buf)
        elif isinstance(goal, Divisibility):
            self._realize_divisibility(goal, state, ext, buf)
        elif isinstance(goal, Inverse):
            self._realize_inverse(goal, state, ext, buf)
        elif isinstance(goal, SolveSystem):
            self._realize_system(goal.system, state, ext, buf)
        elif isinstance(goal, ClopenTarget):
            self._realize_clopen(goal.clopen, state, ext, buf)
        else:
            raise GoalBlocked(f"no realization for {goal!r}")

    def _write_block(self, state, ext, buf, pairs):
        """Write every product cell of an embedded copy given (label, label, label) triples."""
        t = state.table
        for la, lb, lc in pairs:
            if t.get(la, lb) is None and (la, lb) not in buf:
                buf[(la, lb)] = lc

    def _realize_embed(self, h: FinGroup, state, ext, buf) -> dict:
        if isinstance(ext, _AbelianExtender):
            if not h.is_abelian:
                raise GoalBlocked(f"{h.name or 'group'} is not Abelian, so it cannot embed in Abelian mode")
            fin = abelian_type(h)
            images = embed_fin_abelian(fin, start=ext.copy_base())
            span = span_map(fin, images)
            nu = {}
            for s in fin.elements():
                nu[s] = ext.label_for(span[s])
            pairs = [
                (nu[s], nu[u], nu[fin.add(s, u)])
                for s in fin.elements()
                for u in fin.elements()
            ]
            self._write_block(state, ext, buf, pairs)
            return {fin.label_of(s): nu[s] for s in fin.elements()}
        emb = None
        if ext.group.order <= 512:
            emb = embed_search(h, ext.group)
        if emb is not None:
            mapping = dict(emb.map)
        else:
            try:
                prod = direct_product(ext.group, h)
            except LimitExceeded as exc:
                raise GoalBlocked(f"witness capacity exhausted: {exc}")
            ext.adopt(prod.group, prod.inj1)
            mapping = dict(prod.inj2)
        nu = {a: ext.label_for(mapping[a]) for a in h.elements()}
        pairs = [(nu[a], nu[b], nu[h.mul(a, b)]) for a in h.elements() for b in h.elements()]
        self._write_block(state, ext, buf, pairs)
        self._copies.append((h, nu))
        return nu

    @staticmethod
    def _root_of(g: FinGroup, target: int, k: int):
        return next((x for x in range(1, g.order + 1) if g.power(x, k) == target), None)

    def _root_host(self, w: FinGroup, target: int, k: int):
        """Find a catalog host embedding w whose image of target gains a k-th root."""
        for h in catalog(config.max_order()):
            if h.order <= w.order or h.order % w.order:
                continue
            emb = embed_search(w, h)
            if emb is None:
                continue
            if self._root_of(h, emb.map[target], k) is not None:
                return h, dict(emb.map)
        return None, None

    def _realize_divisibility(self, goal, state, ext, buf):
        n, k = goal.n, goal.k
        if not isinstance(ext, _AbelianExtender):
            if n not in ext.lab:
                # the new label's element is ours to pick, so pick one with a root
                for _ in range(2):
                    taken = set(ext._rev)
                    pick = next(
                        (
                            x
                            for x in ext.free_elements()
                            if ext.group.power(x, k) not in taken and ext.group.power(x, k) != 1
                        ),
                        None,
                    )
                    if pick is not None:
                        break
                    ext.grow()
                if pick is not None:
                    tgt = ext.group.power(pick, k)
                    ext.lab[n] = tgt
                    ext._rev[tgt] = n
            ext.ensure_label(n)
            target = ext.lab[n]
            root = self._root_of(ext.group, target, k)
            if root is None:
                host, via = self._root_host(ext.group, target, k)
                if host is not None:
                    ext.adopt(host, via)
                    target = ext.lab[n]
                    root = self._root_of(ext.group, target, k)
            if root is None:
                raise GoalBlocked(
                    f"no witness within order {config.max_order()} gives label {n} "
                    f"a {k}-th root; use Abelian mode"
                )
            lm = ext.label_for(root)
            cur = root
            cur_lbl = lm
            t = state.table
            for _ in range(k - 1):
                nxt = ext.group.mul(cur, root)
                ln = ext.label_for(nxt)
                if t.get(cur_lbl, lm) is None and (cur_lbl, lm) not in buf:
                    buf[(cur_lbl, lm)] = ln
                cur, cur_lbl = nxt, ln
            return
        ext.ensure_label(n)
        a = ext.lab[n]
        m_elem = divide(a, k)
        lm = ext.label_for(m_elem)
        cur = m_elem
        cur_lbl = lm
        t = state.table
        for _ in range(k - 1):
            nxt = add(cur, m_elem)
            ln = ext.label_for(nxt)
            if t.get(cur_lbl, lm) is None and (cur_lbl, lm) not in buf:
                buf[(cur_lbl, lm)] = ln
            cur, cur_lbl = nxt, ln
        assert cur == a

    def _realize_inverse(self, goal, state, ext, buf):
        ext.ensure_label(goal.n)
        m = ext.inverse_label(goal.n)
        t = state.table
        for cell in ((goal.n, m), (m, goal.n)):
            if t.get(*cell) is None and cell not in buf:
                buf[cell] = 1

    def _pin_word_chain(self, word, values, ext, state, buf):
        """Write the left-bracketed product cells of one evaluated word."""
        t = state.table
        grp = ext.group
        cur = None
        for kind, ident, exp in word.letters:
            base = values[(kind, ident)]
            if exp == -1:
                invv = grp.inv(base)
                la, lb = ext.label_for(base), ext.label_for(invv)
                if base != 1 and t.get(la, lb) is None and (la, lb) not in buf:
                    buf[(la, lb)] = 1
                base = invv
            if cur is None:
                cur = base
                continue
            nxt = grp.mul(cur, base)
            la, lb, lc = ext.label_for(cur), ext.label_for(base), ext.label_for(nxt)
            if cur != 1 and base != 1 and t.get(la, lb) is None and (la, lb) not in buf:
                buf[(la, lb)] = lc
            cur = nxt

    def _realize_system(self, sys: EqSystem, state, ext, buf):
        consts = sys.constants()
        if isinstance(ext, _AbelianExtender):
            raise GoalBlocked("equation goals need a finite-group witness; run in general mode")
        if ext.group.order <= config.solve_order_limit():
            for c in consts:
                ext.ensure_label(c)
            lifted = relabel_system(sys, {c: ext.lab[c] for c in consts})
            res = consistency_search(
                lifted, ext.group, config.max_order(), var_limit=max(sys.var_count, 1)
            )
            if isinstance(res, ConsistencyWitness):
                ext.adopt(res.group, dict(res.embedding.map))
                relifted = relabel_system(sys, {c: ext.lab[c] for c in consts})
                for w in relifted.equations + relifted.inequations:
                    vals = {
                        (kind, ident): res.assignment[ident] if kind == VAR else ident
                        for kind, ident, _ in w.letters
                    }
                    self._pin_word_chain(w, vals, ext, state, buf)
                return
        if consts <= {1}:
            for h, nu in self._copies:
                try:
                    sol = solve(sys, h, var_limit=max(sys.var_count, 1))
                except LimitExceeded:
                    continue
                if sol is not None:
                    return
            res = consistency_search(sys, trivial_group(), config.max_order(), var_limit=max(sys.var_count, 1))
            if isinstance(res, ConsistencyWitness):
                self._realize_embed(res.group, state, ext, buf)
                return
            raise GoalBlocked(f"no solution host within order {res.max_order}")
        raise GoalBlocked("constants pin the system to the current witness and no extension solves it")

    def _realize_clopen(self, b: CellClopen, state, ext, buf):
        t = state.table
        staged = t.with_cells([(i, j, k) for (i, j), k in buf.items()])
        try:
            merged = staged.with_cells([(i, j, k) for (i, j), k in b.constraints.items()])
        except ValueError as exc:
            raise GoalBlocked(f"target conflicts with a filled cell: {exc}")
        if isinstance(ext, _AbelianExtender):
            self._adopt_abelian_realization(merged, ext)
        else:
            res = extend.check_extendable(merged)
            if isinstance(res, extend.NonExtendable):
                raise GoalBlocked("the target pattern is certifiably non-extendable here")
            if not isinstance(res, extend.Extends):
                raise GoalBlocked("extendability of the target pattern is undecided within budget")
            ext.adopt_full(res.witness, res.labeling)
        for (i, j), k in b.constraints.items():
            if t.get(i, j) is None and (i, j) not in buf:
                buf[(i, j)] = k

    def _adopt_abelian_realization(self, merged: PartialTable, ext):
        from .abelian import abelian_types_up_to

        labels = [1] + [x for x in merged.labels() if x != 1]
        cells = dict(merged.cells)
        for fin in abelian_types_up_to(config.max_order()):
            if fin.order < len(labels):
                continue
            g = fin.to_fingroup()
            phi = extend._realize(cells, labels, g, extend._NodeBudget(config.node_limit()))
            if phi is None:
                continue
            images = embed_fin_abelian(fin, start=ext.copy_base())
            span = span_map(fin, images)
            ext.adopt({l: span[fin.element_of(gl)] for l, gl in phi.items()})
            return
        raise GoalBlocked("no Abelian witness of catalog order realizes the target pattern")


def odd_scheduler_strategy(schedule: GoalSchedule):
    """Odd who works down the schedule, one realizable goal per turn."""
    return _OddScheduler(schedule)
