"""
Clopen sets and homogeneity
===========================

The space of all infinite multiplication tables carries the product
topology: a basic clopen set pins finitely many cells (or finitely many
word equations at chosen labels).  Relabelings of N that fix 1 act as
homeomorphisms, and the space looks the same around any two group points.
At desk scale that means: given two finite blocks, each sitting inside an
actual group, there is a relabeling and a single finite table lying in
both neighborhoods at once.
"""

from grouplab.fingroup import cyclic_group, symmetric_group
from grouplab.table import (
    CellClopen,
    FinitePermutation,
    PartialTable,
    Tristate,
    WordClopen,
    apply_homeomorphism,
    homogeneity_witness,
    satisfies_cell_clopen,
    satisfies_word_clopen,
    supp,
    transport_clopen,
)
from grouplab.words import Word

# A cell clopen asks: do these cells hold?  Over a partial table the
# answer is three-valued, since missing cells might go either way.
b = CellClopen([(2, 3, 4)])
t_yes = PartialTable([(2, 3, 4)])
t_no = PartialTable([(2, 3, 5)])
t_open = PartialTable([])
print("does 2*3 = 4 hold?")
for t in (t_yes, t_no, t_open):
    cells = sorted((i, j, k) for (i, j), k in t.cells.items())
    print(f"  in {cells or 'the empty table'}: {satisfies_cell_clopen(t, b).name}")

# Word clopens say the same kind of thing without naming the cell values:
# "label 2 squares to 1 and does not equal 1".
wc = WordClopen([2], equations=[(Word.from_text("x0 * x0"), 1)],
                inequations=[(Word.from_text("x0"), 1)])
c4 = cyclic_group(4)
c2 = cyclic_group(2)
print(f"\n'label 2 is an involution' in C4: {satisfies_word_clopen(c4, wc).name}")
print(f"'label 2 is an involution' in C2: {satisfies_word_clopen(c2, wc).name}")

# Relabelings transport clopens and tables alike, and membership follows.
phi = FinitePermutation({2: 5, 5: 2})
moved = transport_clopen(phi, b)
print(f"\ntransport of 2*3=4 along 2<->5: {sorted((i, j, k) for (i, j), k in moved.constraints.items())}")
print(f"moved table satisfies moved clopen: "
      f"{satisfies_cell_clopen(apply_homeomorphism(phi, t_yes), moved).name}")

# Homogeneity at desk scale.  Take the full C2 block and the full S3 block,
# each a clopen neighborhood of its own group.  One permutation plus one
# finite table witnesses that the two neighborhoods overlap after moving.
s3 = symmetric_group(3)
u = CellClopen([(i, j, c2.mul(i, j)) for i in (1, 2) for j in (1, 2)])
v = CellClopen([(i, j, s3.mul(i, j)) for i in s3.elements() for j in s3.elements()])
phi, table = homogeneity_witness(u, c2, v, s3)
print(f"\nsupp(C2 block) = {sorted(supp(u))}, supp(S3 block) = {sorted(supp(v))}")
print(f"relabeling: {phi.to_json()['map']}")
print(f"witness table has {len(table.cells)} cells (the C2 x S3 product, relabeled)")
print(f"lies in the moved C2 neighborhood: {satisfies_cell_clopen(table, transport_clopen(phi, u)).name}")
print(f"lies in the S3 neighborhood:       {satisfies_cell_clopen(table, v).name}")
assert satisfies_cell_clopen(table, transport_clopen(phi, u)) is Tristate.YES
assert satisfies_cell_clopen(table, v) is Tristate.YES
