"""
Equation systems over finite groups
===================================

A system is a finite set of equations (word = 1) and inequations (word != 1)
whose words mix variables x0, x1, ... with group constants.  The solver does
backtracking with propagation; an exhaustive enumerator serves as its oracle.
When a system has no solution in the group at hand, a consistency search
looks for a bigger group it does solve in, together with the embedding.
"""

from grouplab.equations import (
    EqSystem,
    clopen_to_system,
    conjugation_system,
    consistency_search,
    diagram_permutation,
    exhaustive_solvable,
    solve,
)
from grouplab.fingroup import cyclic_group, symmetric_group
from grouplab.table import CellClopen, satisfies_cell_clopen, transport_clopen, PartialTable
from grouplab.words import Word, const, var

# Words have a text form: variables xN, constants cLABEL, with ^-1 for inverses.
w = Word.from_text("x0^-1 * c2 * x0 * c3^-1")
print(f"word: {w.to_text()}")

# "Find an element conjugating 2 to 3" in S3, as a one-variable system.
s3 = symmetric_group(3)
sys1 = EqSystem([w], [], 1)
sol = solve(sys1, s3)
print(f"conjugator of 2 into 3 in S3: x0 = {sol[0]}")
conj = s3.mul(s3.mul(s3.inv(sol[0]), 2), sol[0])
print(f"check: x0^-1 * 2 * x0 = {conj}")

# conjugation_system builds that shape for whole generator lists at once.
sys2 = conjugation_system([2], [4])
print(f"\nconjugation system for 2 -> 4: {[e.to_text() for e in sys2.equations]}")
print(f"solvable in S3? {solve(sys2, s3) is not None}, oracle says {exhaustive_solvable(sys2, s3)}")

# Some systems are consistent but not solvable where you stand.  x0^2 = 1
# with x0 != 1 has no solution in C3; the search finds a host that works.
sys3 = EqSystem([var(0) * var(0)], [var(0)], 1)
c3 = cyclic_group(3)
print(f"\nx0^2 = 1, x0 != 1 solvable in C3? {solve(sys3, c3) is not None}")
witness = consistency_search(sys3, c3, max_order=12)
print(f"consistency witness: {witness.group.name} with x0 = {witness.assignment[0]}, "
      f"C3 embeds via {witness.embedding.map}")

# A full finite multiplication block can be written as one existential
# system: variables for the labels, equations for the cells, inequations
# for distinctness.  Solving it in a host group reproduces the block.
c2 = cyclic_group(2)
block = CellClopen([(i, j, c2.mul(i, j)) for i in (1, 2) for j in (1, 2)])
diagram = clopen_to_system(block)
print(f"\nC2 block as a system: {diagram.var_count} variables, "
      f"{len(diagram.equations)} equations, {len(diagram.inequations)} inequations")
host = cyclic_group(4)
sol = solve(diagram, host, var_limit=diagram.var_count)
phi = diagram_permutation(block, sol)
moved = transport_clopen(phi, block)
full = PartialTable([(i, j, host.mul(i, j)) for i in host.elements() for j in host.elements()])
print(f"solved in {host.name}; relabeled block sits inside {host.name}'s table: "
      f"{satisfies_cell_clopen(full, moved).name}")
