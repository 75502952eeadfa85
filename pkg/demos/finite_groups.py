"""
Finite groups as complete Cayley tables
=======================================

Every finite group here is just an n x n table over labels 1..n with label 1
as the identity.  The catalog below is the witness universe the rest of the
package draws on: whenever some search needs "a finite group realizing this
configuration", these are the candidates.
"""

from grouplab.fingroup import (
    catalog,
    conjugate_word_witness,
    cyclic_group,
    dihedral_group,
    is_simple,
    normal_closure,
    subgroup_closure,
    symmetric_group,
)

# The catalog holds one representative per isomorphism class it can build:
# cyclics, dihedrals, symmetric/alternating groups, and their products.
print("groups of order <= 8:")
for g in catalog(8):
    o, abelian, orders, center = g.fingerprint()
    print(f"  {g.name:10s} order {o:2d}  abelian={abelian}  element orders {orders}")

# Subgroup closure is plain orbit computation: start from the generators,
# keep multiplying and inverting until nothing new appears.
s4 = symmetric_group(4)
two_cycle = next(x for x in s4.elements() if s4.element_order(x) == 2)
four_cycle = next(x for x in s4.elements() if s4.element_order(x) == 4)
print(f"\nin S4, <{two_cycle}> has size {len(subgroup_closure(s4, [two_cycle]))}")
print(f"in S4, <{two_cycle},{four_cycle}> has size {len(subgroup_closure(s4, [two_cycle, four_cycle]))}")

# Normal closure additionally conjugates.  In a simple group it always
# explodes to everything, and that is exactly the simplicity test:
d4 = dihedral_group(4)
cert = is_simple(d4)
print(f"\nD4 simple? {cert.simple}; witness element {cert.witness} "
      f"generates a normal subgroup of size {len(cert.closure)}")

c7 = cyclic_group(7)
print(f"C7 simple? {is_simple(c7).simple} (prime order, checked all {is_simple(c7).checked} elements)")

# Inside the normal closure, membership is constructive: any member is a
# product of conjugates of the generator, and we can print that word.
g = symmetric_group(3)
n = next(x for x in g.elements() if g.element_order(x) == 3)
target = g.mul(n, n)
word = conjugate_word_witness(g, n, target)
print(f"\nin S3, element {target} as a product of conjugates of {n}:")
for conjugator, exp in word:
    print(f"  {conjugator}^-1 * {n}^{exp} * {conjugator}")

# Replay the word by hand to close the loop.
acc = 1
for conjugator, exp in word:
    piece = g.mul(g.mul(g.inv(conjugator), n if exp == 1 else g.inv(n)), conjugator)
    acc = g.mul(acc, piece)
print(f"word evaluates to {acc}, target was {target}")
