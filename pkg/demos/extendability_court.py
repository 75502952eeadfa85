"""
The extendability court
=======================

A finite partial multiplication table either extends to a full group table,
or it does not, or the search gave up.  The three verdicts come with evidence:
a finite group plus labeling you can check cell by cell, a replayable chain
of inference steps ending in a contradiction, or the budget that ran out.
"""

from grouplab.config import Budget
from grouplab.extend import (
    Extends,
    NonExtendable,
    Unknown,
    check_extendable,
    replay_certificate,
    saturate,
    witness_prefix,
)
from grouplab.fingroup import symmetric_group
from grouplab.table import PartialTable

# Take a genuine fragment: the first rows of S3's own table.
s3 = symmetric_group(3)
t = witness_prefix(s3, [1, 2, 3, 4])
print(f"fragment of S3 on labels 1..4: {len(t.cells)} cells")

# The witness need not be the group the fragment came from: labels 2..4
# are the transpositions, their pairwise products fall outside the label
# set, and what is left fits in a smaller group.
verdict = check_extendable(t)
assert isinstance(verdict, Extends)
print(f"verdict: extends, witness {verdict.witness.name}")
ok = all(
    verdict.witness.mul(verdict.labeling[a], verdict.labeling[b]) == verdict.labeling[c]
    for (a, b), c in t.cells.items()
)
print(f"labeling rechecked over every cell: {ok}")

# Now a table that cannot live inside any group: 2*2 = 2 forces 2 = 1
# by cancellation, but label 2 is not label 1.
bad = PartialTable([(2, 2, 2)])
verdict = check_extendable(bad)
assert isinstance(verdict, NonExtendable)
print(f"\n2*2 = 2 is non-extendable; certificate has {len(verdict.certificate)} steps:")
for step in verdict.certificate:
    concl = step.conclusion if step.conclusion else "contradiction"
    print(f"  [{step.rule}] {list(step.premises)} => {concl}")
print(f"certificate replays against the table: {replay_certificate(bad, verdict.certificate)}")

# The saturator behind that certificate also answers softer questions,
# like which inverse pairs a fragment already commits to.
partial = PartialTable([(2, 3, 1), (4, 4, 1)])
closure = saturate(partial)
print(f"\nsaturating {{2*3=1, 4*4=1}} derives {len(closure.cells)} cells; "
      f"inverse pairs: {closure.inverse_pairs()}")

# Starve the search and it says so instead of guessing.  The same table
# that extends comfortably above becomes undecidable under a tiny budget.
tight = Budget(max_order=2, node_limit=10, sym_bound=2)
verdict = check_extendable(t, budget=tight)
assert isinstance(verdict, Unknown)
print(f"\nunder max_order=2, node_limit=10: unknown after {verdict.nodes_spent} nodes")
