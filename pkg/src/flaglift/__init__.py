"""Lifting tools for triangular surface group representations over Z/p^r.

Subpackages: exact linear algebra (zmod), surface group words and modules
(surface), group cohomology via the one-relator complex (cohomology),
triangular flags and their predicates (flags), gluing and lifting engines
(lifting), the quadratic local-field example (localfield), brute-force
oracles (oracle), file formats (repfile) and the command line (cli).
"""

__version__ = "0.1.0"
