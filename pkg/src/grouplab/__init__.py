"""Finite stages of infinite group multiplication tables.

A laboratory for the space of countable group multiplication tables at desk
scale: partial tables and their clopen constraints, finite witness groups,
exact arithmetic in the generic countable Abelian torsion group, equation
systems, extendability verdicts with certificates, and the table-building
game with engine strategies.
"""

__version__ = "0.1.0"
