"""Command line entry point: every capability behind one subcommand tree.

Exit codes: 0 success, 1 usage or input errors, 2 honest negative or
undecided verdicts (non-extendable, unsolvable, unknown, illegal move).
"""

import argparse
import json
import sys

from . import abelian as ab
from . import config, extend, game, sessions
from .config import Budget
from .equations import EqSystem, clopen_to_system, solve
from .errors import (
    EvaluationBlocked,
    GroupLabError,
    LimitExceeded,
    StrategyFault,
    UnknownConstant,
)
from .fingroup import FinGroup, catalog
from .jsonio import canonical_json, canonical_json_pretty
from .table import (
    CellClopen,
    FinitePermutation,
    PartialTable,
    Tristate,
    satisfies_cell_clopen,
    transport_clopen,
)

OK, USAGE, NEGATIVE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; 2 is reserved for verdicts here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit2(message)


class SystemExit2(Exception):
    def __init__(self, message):
        self.message = message


def _emit(obj, pretty: bool = False):
    text = canonical_json_pretty(obj) if pretty else canonical_json(obj)
    sys.stdout.write(text + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="ascii") as fh:
        return fh.read()


def _load_json(path: str):
    return json.loads(_read(path))


def _load_group(path: str) -> FinGroup:
    if path != "-":
        try:
            return game.group_named(path)
        except ValueError:
            pass
    raw = _read(path)
    try:
        return FinGroup.from_json(json.loads(raw))
    except json.JSONDecodeError:
        return FinGroup.from_text(raw)


def _element(raw: str) -> ab.AbelianElement:
    return ab.AbelianElement.from_json(json.loads(raw))


def _budget(args) -> Budget:
    if args.max_order is None and args.node_limit is None and args.sym_bound is None:
        return None
    return Budget(args.max_order, args.node_limit, args.sym_bound)


def _add_budget_flags(p):
    p.add_argument("--max-order", type=int, help="witness order bound")
    p.add_argument("--node-limit", type=int, help="search node bound")
    p.add_argument("--sym-bound", type=int, help="largest symmetric group tried")


# ---------------------------------------------------------------- subcommands


def _cmd_catalog(args) -> int:
    groups = catalog(args.max_order)
    if args.format == "text":
        for g in groups:
            o, abel, orders, center = g.fingerprint()
            kind = "abelian" if abel else "nonabelian"
            sys.stdout.write(
                f"{g.name} order={o} {kind} element-orders={','.join(map(str, orders))} "
                f"center={center}\n"
            )
    else:
        entries = []
        for g in groups:
            o, abel, orders, center = g.fingerprint()
            entries.append(dict(g.to_json(), fingerprint=[o, abel, list(orders), center]))
        _emit({"maxOrder": args.max_order, "count": len(groups), "groups": entries}, args.pretty)
    return OK


def _cmd_witness(args) -> int:
    t = PartialTable.from_json(_load_json(args.table))
    res = extend.check_extendable(t, _budget(args))
    _emit(res.to_json(), args.pretty)
    return OK if isinstance(res, extend.Extends) else NEGATIVE


def _cmd_solve(args) -> int:
    g = _load_group(args.group)
    system = EqSystem.from_json(_load_json(args.system))
    sol = solve(system, g, var_limit=args.var_limit, order_limit=args.order_limit)
    if sol is None:
        _emit({"solvable": False, "group": g.name}, args.pretty)
        return NEGATIVE
    _emit(
        {"solvable": True, "group": g.name, "assignment": {str(i): v for i, v in sol.items()}},
        args.pretty,
    )
    return OK


def _cmd_abelian(args) -> int:
    if args.action == "add":
        total = _element(args.element[0])
        for raw in args.element[1:]:
            total = ab.add(total, _element(raw))
        _emit(total.to_json(), args.pretty)
    elif args.action == "order":
        n = ab.order(_element(args.element))
        if args.format == "text":
            sys.stdout.write(f"{n}\n")
        else:
            _emit({"order": n}, args.pretty)
    elif args.action == "divide":
        if args.k < 1:
            raise SystemExit2("--k must be at least 1")
        _emit(ab.divide(_element(args.element), args.k).to_json(), args.pretty)
    elif args.action == "embed":
        try:
            factors = [int(f) for f in args.factors.split(",") if f]
        except ValueError:
            raise SystemExit2(f"bad --factors: {args.factors!r}")
        fin = ab.FinAbelian(factors)
        span = ab.span_map(fin, ab.embed_fin_abelian(fin))
        _emit(
            {
                "factors": list(fin.factors),
                "order": fin.order,
                "elements": {str(fin.label_of(s)): span[s].to_json() for s in fin.elements()},
            },
            args.pretty,
        )
    else:  # prefix
        _emit(ab.a_prefix_table(args.count).to_json(), args.pretty)
    return OK


def _cmd_clopen(args) -> int:
    if args.action == "check":
        b = CellClopen.from_json(_load_json(args.clopen))
        t = PartialTable.from_json(_load_json(args.table))
        status = satisfies_cell_clopen(t, b)
        _emit({"status": status.name.lower()}, args.pretty)
        return OK if status is Tristate.YES else NEGATIVE
    if args.action == "system":
        b = CellClopen.from_json(_load_json(args.clopen))
        _emit(clopen_to_system(b).to_json(), args.pretty)
        return OK
    # transport
    b = CellClopen.from_json(_load_json(args.clopen))
    phi = FinitePermutation.from_json(_load_json(args.perm))
    _emit(transport_clopen(phi, b).to_json(), args.pretty)
    return OK


def _load_script(path: str) -> list:
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("moves", [])
    moves = []
    for entry in obj:
        cells = entry.get("cells", []) if isinstance(entry, dict) else entry
        moves.append(game.Move(tuple((i, j, k) for i, j, k in cells)))
    return moves


def _load_schedule(path):
    if path is None:
        return None
    return game.GoalSchedule.from_json(_load_json(path))


def _player(kind: str, seed: int, schedule, script, label: str):
    if kind == "random":
        return game.random_legal(seed)
    if kind == "spoiler":
        return game.spoiler()
    if kind == "scheduler":
        if schedule is None:
            raise SystemExit2(f"--{label} scheduler needs --schedule")
        return game.odd_scheduler_strategy(schedule)
    if kind == "script":
        if script is None:
            raise SystemExit2(f"--{label} script needs --script")
        return game.scripted(script)
    raise SystemExit2(f"unknown strategy {kind!r}")


def _cmd_simulate(args) -> int:
    schedule = _load_schedule(args.schedule)
    script = _load_script(args.script) if args.script else None
    odd_default = "scheduler" if schedule is not None else "random"
    eve_kind = args.eve or "random"
    odd_kind = args.odd or odd_default
    if args.seed is None and "random" in (eve_kind, odd_kind):
        raise SystemExit2("--seed is required when a random strategy plays")
    seed = args.seed if args.seed is not None else 0
    eve = _player(eve_kind, seed, schedule, script, "eve")
    odd = _player(odd_kind, seed + 1, schedule, script, "odd")
    state = game.new_game(mode=args.mode, schedule=schedule, permissive=args.permissive)
    try:
        tr = game.run(state, eve, odd, args.steps, budget=_budget(args))
    except StrategyFault as exc:
        _emit(
            {"fault": {"mover": exc.mover, "step": exc.step, "reason": exc.reason}},
            args.pretty,
        )
        return NEGATIVE
    _emit(tr.to_json(), args.pretty)
    return OK


def _interactive_moves(session):
    sys.stderr.write(
        "enter moves as 'i,j,k; i,j,k', an empty line to pass, or 'quit'\n"
    )
    while not session.over:
        s = session.state
        sys.stderr.write(f"step {s.step}, block bound {s.step + 1}, you are {session.human}> ")
        sys.stderr.flush()
        line = sys.stdin.readline()
        if not line or line.strip() == "quit":
            return
        cells = []
        bad = False
        for part in line.strip().split(";"):
            part = part.strip()
            if not part:
                continue
            bits = part.replace(",", " ").split()
            if len(bits) != 3 or not all(b.isdigit() for b in bits):
                sys.stderr.write(f"cannot parse {part!r}\n")
                bad = True
                break
            cells.append([int(b) for b in bits])
        if bad:
            continue
        for msg in session.submit_move(cells):
            sys.stderr.write(canonical_json(msg) + "\n")


def _cmd_play(args) -> int:
    schedule_json = _load_json(args.schedule) if args.schedule else None
    session = sessions.Session(
        {
            "mode": args.mode,
            "schedule": schedule_json,
            "humanSide": args.side,
            "permissive": args.permissive,
            "opponent": {"kind": args.opponent, "seed": args.seed},
        }
    )
    opening = session.open_messages()
    if args.script is None and sys.stdin.isatty():
        for msg in opening:
            sys.stderr.write(canonical_json(msg) + "\n")
        _interactive_moves(session)
    else:
        script = _load_script(args.script if args.script else "-")
        for m in script:
            if session.over:
                break
            for msg in session.submit_move([list(c) for c in m.assignments]):
                if msg["kind"] == "error":
                    sys.stderr.write(canonical_json(msg) + "\n")
                    return USAGE
                if msg["kind"] == "verdict" and msg["verdict"] != "legal":
                    _emit(msg, args.pretty)
                    return NEGATIVE
    _emit(session.snapshot(), args.pretty)
    return OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return OK


# ---------------------------------------------------------------- parser


def _build_parser() -> _Parser:
    p = _Parser(prog="grouplab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list the finite witness groups")
    c.add_argument("--max-order", type=int, default=config.max_order())
    c.add_argument("--format", choices=("json", "text"), default="json")
    c.add_argument("--pretty", action="store_true")
    c.set_defaults(fn=_cmd_catalog)

    w = sub.add_parser("witness", help="decide extendability of a partial table")
    w.add_argument("--table", required=True, help="partial table JSON file, - for stdin")
    _add_budget_flags(w)
    w.add_argument("--pretty", action="store_true")
    w.set_defaults(fn=_cmd_witness)

    s = sub.add_parser("solve", help="solve an equation system over a finite group")
    s.add_argument(
        "--group", required=True, help="catalog name, or Cayley table file (JSON or text)"
    )
    s.add_argument("--system", required=True, help="system JSON file")
    s.add_argument("--var-limit", type=int, default=None)
    s.add_argument("--order-limit", type=int, default=None)
    s.add_argument("--pretty", action="store_true")
    s.set_defaults(fn=_cmd_solve)

    a = sub.add_parser("abelian", help="exact arithmetic in the big Abelian group")
    asub = a.add_subparsers(dest="action", required=True)
    aa = asub.add_parser("add", help="sum elements")
    aa.add_argument("--element", action="append", required=True, help="element JSON, repeatable")
    ao = asub.add_parser("order", help="order of an element")
    ao.add_argument("--element", required=True)
    ao.add_argument("--format", choices=("json", "text"), default="text")
    ad = asub.add_parser("divide", help="exact k-th part of an element")
    ad.add_argument("--element", required=True)
    ad.add_argument("--k", type=int, required=True)
    ae = asub.add_parser("embed", help="embed a finite Abelian group")
    ae.add_argument("--factors", required=True, help="comma-separated prime powers, e.g. 4,3")
    ap = asub.add_parser("prefix", help="addition table over the first n enumerated elements")
    ap.add_argument("--count", type=int, required=True)
    for q in (aa, ao, ad, ae, ap):
        q.add_argument("--pretty", action="store_true")
    a.set_defaults(fn=_cmd_abelian)

    b = sub.add_parser("clopen", help="basic clopen sets: check, convert, transport")
    bsub = b.add_subparsers(dest="action", required=True)
    bc = bsub.add_parser("check", help="does a table prefix lie inside the set")
    bc.add_argument("--clopen", required=True)
    bc.add_argument("--table", required=True)
    bs = bsub.add_parser("system", help="diagram equation system of a square-form set")
    bs.add_argument("--clopen", required=True)
    bt = bsub.add_parser("transport", help="push a set through a relabeling permutation")
    bt.add_argument("--clopen", required=True)
    bt.add_argument("--perm", required=True)
    for q in (bc, bs, bt):
        q.add_argument("--pretty", action="store_true")
    b.set_defaults(fn=_cmd_clopen)

    m = sub.add_parser("simulate", help="run a full game between two strategies")
    m.add_argument("--mode", choices=(game.GENERAL, game.ABELIAN), default=game.GENERAL)
    m.add_argument("--schedule", help="goal schedule JSON file")
    m.add_argument("--steps", type=int, required=True)
    m.add_argument("--seed", type=int, default=None)
    m.add_argument("--eve", choices=("random", "spoiler", "scheduler", "script"))
    m.add_argument("--odd", choices=("random", "spoiler", "scheduler", "script"))
    m.add_argument("--script", help="move list JSON for a scripted player")
    m.add_argument("--permissive", action="store_true")
    _add_budget_flags(m)
    m.add_argument("--pretty", action="store_true")
    m.set_defaults(fn=_cmd_simulate)

    y = sub.add_parser("play", help="play one side yourself, scripted or interactive")
    y.add_argument("--mode", choices=(game.GENERAL, game.ABELIAN), default=game.GENERAL)
    y.add_argument("--schedule", help="goal schedule JSON file")
    y.add_argument("--side", choices=(game.EVE, game.ODD), default=game.EVE)
    y.add_argument("--opponent", choices=("random", "spoiler", "scheduler"), default="random")
    y.add_argument("--seed", type=int, default=0)
    y.add_argument("--script", help="move list JSON file, - for stdin")
    y.add_argument("--permissive", action="store_true")
    y.add_argument("--pretty", action="store_true")
    y.set_defaults(fn=_cmd_play)

    v = sub.add_parser("serve", help="host the live play session service")
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int, default=8321)
    v.set_defaults(fn=_cmd_serve)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit2 as exc:
        sys.stderr.write(f"error: {exc.message}\n")
        return USAGE
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (LimitExceeded, UnknownConstant, EvaluationBlocked, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE
    except (KeyError, TypeError) as exc:
        # malformed JSON shapes surface here from the codecs
        sys.stderr.write(f"error: malformed input ({exc})\n")
        return USAGE
    except GroupLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
