"""
The table-building game
=======================

Two players take turns filling cells of an infinite multiplication table.
Step n must complete the (n+1) x (n+1) corner, keep an inverse in every
row and column of that corner, and leave the whole position extendable to
an actual group.  Odd plays to steer the limit toward goals; Eve gets in
the way.  Every verdict is backed by a witness or a certificate.
"""

import json

from grouplab.game import (
    Divisibility,
    EmbedFinite,
    GoalSchedule,
    Illegal,
    Move,
    group_named,
    legal,
    new_game,
    odd_scheduler_strategy,
    random_legal,
    run,
    spoiler,
)

# Two seeded random players, twelve steps.  The transcript is pure data:
# replay it, serialize it, diff it.
t = run(new_game(), random_legal(7), random_legal(8), steps=12)
labels = max(max(i, j) for i, j in t.final_table.cells)
print(f"random vs random, 12 steps: {len(t.final_table.cells)} cells, labels up to {labels}")
print(f"movers: {[m['mover'] for m in t.to_json()['moves'][:4]]} ...")

# An illegal attempt is refused with the first rule it breaks, cheapest
# rule checked first.  2*2 = 2 never places an identity in row 2:
state = new_game()
verdict = legal(state, Move(((1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 2))))
assert isinstance(verdict, Illegal)
print(f"\n2*2 = 2 as an opening: illegal (rule {verdict.rule}), {verdict.reason}")

# A move can satisfy the structural rules and still poison the limit.
# Here row 2 repeats the value 3, so no group can ever contain the board,
# and the refusal carries a replayable derivation of the contradiction.
m = Move(((1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 3), (2, 3, 1), (3, 2, 1), (2, 4, 3)))
verdict = legal(state, m)
assert isinstance(verdict, Illegal)
print(f"row with a repeated value: illegal (rule {verdict.rule})")
print(f"certificate steps: {[s.rule for s in verdict.certificate]}")

# Odd can chase goals.  A schedule is a list the scheduler works through:
# embed a copy of S3, then give label 2 a cube root.
schedule = GoalSchedule([EmbedFinite(group_named("S3")), Divisibility(2, 3)])
t = run(new_game(schedule=schedule), random_legal(3), odd_scheduler_strategy(schedule), steps=14)
print()
for m in t.monitors:
    line = f"goal {m.goal.to_json()['kind']}: {m.status}"
    if m.step is not None:
        line += f" at step {m.step}"
    if m.note:
        line += f" ({m.note})"
    print(line)

# The cube-root goal stalls: after the embed pins label 2 to an element
# of order 3, no group within the order bound cubes onto it.  The monitor
# says so.  In Abelian mode the board lives inside a group where every
# element is divisible by everything, so the same goal lands.
schedule = GoalSchedule([Divisibility(2, 3)])
t = run(new_game(mode="abelian", schedule=schedule),
        random_legal(3), odd_scheduler_strategy(schedule), steps=10)
m = t.monitors[0]
print(f"\nsame goal in Abelian mode: {m.status} at step {m.step}")

# The spoiler floods the board with fresh labels to starve constructions.
schedule = GoalSchedule([EmbedFinite(group_named("C2xC2"))])
t = run(new_game(schedule=schedule), spoiler(), odd_scheduler_strategy(schedule), steps=10)
m = t.monitors[0]
print(f"\nagainst the spoiler, embed C2xC2: {m.status}"
      + (f" at step {m.step}" if m.step is not None else ""))

# Everything above fits in one JSON document per game.
doc = t.to_json()
print(f"\ntranscript keys: {sorted(doc)}")
print(f"config: {json.dumps(doc['config'], sort_keys=True)}")
