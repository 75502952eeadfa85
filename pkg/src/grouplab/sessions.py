"""Live play sessions: one human side against one engine strategy."""

import uuid
from typing import Optional

from . import game
from .errors import NotYourTurn

PROTOCOL_VERSION = 1


def engine_strategy(spec: Optional[dict], schedule):
    """Build the engine player from a fragment like {"kind": "random", "seed": 3}."""
    spec = dict(spec or {})
    kind = spec.get("kind") or ("scheduler" if schedule is not None else "random")
    if kind == "scheduler":
        if schedule is None:
            raise ValueError("a scheduler opponent needs a schedule")
        return game.odd_scheduler_strategy(schedule)
    if kind == "random":
        return game.random_legal(int(spec.get("seed", 0)))
    if kind == "spoiler":
        return game.spoiler()
    raise ValueError(f"unknown opponent kind: {kind!r}")


def _msg(kind: str, **payload) -> dict:
    out = {"v": PROTOCOL_VERSION, "kind": kind}
    out.update(payload)
    return out


def error_message(reason: str) -> dict:
    return _msg("error", reason=reason)


class Session:
    """One game; every verdict and monitor status originates here."""

    def __init__(self, config: dict):
        config = dict(config or {})
        mode = config.get("mode", game.GENERAL)
        if mode not in (game.GENERAL, game.ABELIAN):
            raise ValueError(f"unknown mode: {mode!r}")
        schedule = None
        if config.get("schedule") is not None:
            schedule = game.GoalSchedule.from_json(config["schedule"])
        human = config.get("humanSide", game.EVE)
        if human not in (game.EVE, game.ODD):
            raise ValueError(f"humanSide must be {game.EVE!r} or {game.ODD!r}")
        self.id = uuid.uuid4().hex
        self.human = human
        self.engine = engine_strategy(config.get("opponent"), schedule)
        self.state = game.new_game(
            mode=mode,
            schedule=schedule,
            permissive=bool(config.get("permissive", False)),
        )
        self.over = False

    # ---------------------------------------------------------- messages

    def state_message(self) -> dict:
        s = self.state
        return _msg(
            "state",
            step=s.step,
            toMove=s.to_move,
            blockBound=s.step + 1,
            cells=s.table.to_json()["cells"],
            monitors=[m.to_json() for m in s.monitors],
        )

    def monitors_message(self) -> dict:
        return _msg("monitors", monitors=[m.to_json() for m in self.state.monitors])

    @staticmethod
    def _verdict_message(verdict) -> dict:
        if isinstance(verdict, game.Legal):
            return _msg("verdict", verdict="legal", witnessRef=verdict.witness.ref())
        if isinstance(verdict, game.Unknown):
            return _msg("verdict", verdict="unknown", reason=verdict.reason)
        return _msg("verdict", **verdict.to_json())

    # ---------------------------------------------------------- play

    def open_messages(self) -> list:
        """Initial messages: engine opens first when the human sits as Odd."""
        out = [self.state_message()]
        if self.human == game.ODD:
            out.extend(self._engine_turn())
        return out

    def submit_move(self, cells) -> list:
        if self.over:
            return [error_message("session is over")]
        if self.state.to_move != self.human:
            raise NotYourTurn("engine to move")
        try:
            m = game.Move(tuple((i, j, k) for i, j, k in cells))
        except (TypeError, ValueError) as exc:
            return [error_message(f"malformed move: {exc}")]
        verdict = game.legal(self.state, m)
        out = [self._verdict_message(verdict)]
        if isinstance(verdict, game.Illegal):
            return out
        if isinstance(verdict, game.Unknown) and not self.state.permissive:
            return out
        before = self.state.monitors
        self.state = game.apply_verdict(self.state, m, verdict, mover=self.human)
        if self.state.monitors != before:
            out.append(self.monitors_message())
        out.append(self.state_message())
        out.extend(self._engine_turn())
        return out

    def _engine_turn(self) -> list:
        m, witness = self.engine.next_move(self.state)
        verdict = game.legal(self.state, m, witness=witness)
        if not isinstance(verdict, game.Legal) and not (
            isinstance(verdict, game.Unknown) and self.state.permissive
        ):
            self.over = True
            return [error_message(f"engine faulted: {getattr(verdict, 'reason', verdict)}")]
        before = self.state.monitors
        self.state = game.apply_verdict(self.state, m, verdict)
        notes = getattr(self.engine, "last_blocked", None)
        if notes:
            self.state = game._with_notes(self.state, notes)
        out = [
            _msg("move", mover=self.state.history[-1].mover, cells=[list(c) for c in m.assignments])
        ]
        if self.state.monitors != before:
            out.append(self.monitors_message())
        out.append(self.state_message())
        return out

    def resign(self) -> list:
        self.over = True
        return [self.state_message()]

    def snapshot(self) -> dict:
        eve_name = "human" if self.human == game.EVE else self.engine.name
        odd_name = self.engine.name if self.human == game.EVE else "human"
        tr = game.build_transcript(
            self.state,
            {"steps": len(self.state.history), "eve": eve_name, "odd": odd_name},
        )
        return tr.to_json()
