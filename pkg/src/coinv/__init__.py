"""coinv: exact-arithmetic workbench for cosovereign Hopf coactions.

Builds the universal cosovereign Hopf algebra of an invertible rational
matrix F, coactions on free bimodule algebras, degree-truncated relation
ideals, and certified coinvariant computations, and uses them to certify
free and classical first-fundamental-theorem statements over Q.
"""

__version__ = "0.1.0"
