"""Transfer systems, set operads, and operad pairings on finite groups.

Modules:
  groups       Cayley-table groups, subgroup lattices, G-sets, coinduction
  transfer     transfer systems: closure, enumeration, compatibility, hulls
  blocks       block permutations and the distributivity bijection
  operads      set operads, monoid pairings, the axiom checkers
  equivariant  coinduced operads, stabilizers, witnesses, fixed points
  models       the discrete linear-isometries / Steiner intersection monoids
  realize      the realizability rule engine and ledger
  io           JSON / DOT / CSV formats
  cli          the command-line front end
"""

__version__ = "0.1.0"
