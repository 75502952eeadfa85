"""
Driving a live session
======================

A Session wraps one game between a human side and an engine strategy and
speaks in versioned JSON messages: state, move, verdict, monitors, error.
The websocket server and the command line 'play' mode are both thin
covers over this object, so a script can exercise the whole protocol
offline, then compare its snapshot byte for byte with a simulated run.
"""

import json

from grouplab.game import Move, new_game, random_legal, run, scripted
from grouplab.jsonio import canonical_json
from grouplab.sessions import Session

# Human plays Eve against a seeded random engine.  Scripts come from
# somewhere honest: record the Eve moves of an engine-vs-engine game.
recorded = run(new_game(), random_legal(42), random_legal(3), steps=6)
script = [e.move.assignments for e in recorded.moves if e.mover == "eve"]
print(f"recorded {len(script)} eve moves to replay")

session = Session({"humanSide": "eve", "opponent": {"kind": "random", "seed": 3}})
for msg in session.open_messages():
    print(f"<- {msg['kind']}: step {msg.get('step')}, to move {msg.get('toMove')}")

for cells in script:
    replies = session.submit_move([list(c) for c in cells])
    kinds = [m["kind"] for m in replies]
    print(f"-> move {len(cells)} cells; replies: {', '.join(kinds)}")

# The snapshot is a full transcript, identical in bytes to the same game
# played engine-vs-engine with a scripted Eve.
snap = session.snapshot()
replayed = run(
    new_game(),
    scripted([Move(cells) for cells in script]),
    random_legal(3),
    steps=len(snap["moves"]),
    extra_config={"steps": len(snap["moves"]), "eve": "human", "odd": "random-legal(seed=3)"},
)
same = canonical_json(snap) == canonical_json(replayed.to_json())
print(f"\nsnapshot equals scripted replay byte for byte: {same}")
print(f"final table: {len(snap['finalTable']['cells'])} cells over {snap['config']['steps']} steps")

# Illegal attempts do not advance the game; the verdict message carries
# the refusal, certificate included when extendability is the cause.
fresh = Session({"humanSide": "eve"})
fresh.open_messages()
replies = fresh.submit_move([[1, 1, 1], [1, 2, 2], [2, 1, 2], [2, 2, 2]])
v = replies[0]
print(f"\nillegal opening: {json.dumps({k: v[k] for k in ('verdict', 'rule', 'reason')})}")
print(f"game still at step {fresh.state.step}, history {len(fresh.state.history)} moves")
