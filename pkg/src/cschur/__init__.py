"""Exact computation in three-parameter affine type-C q-Schur algebras.

Modules: ring (exact scalars), weyl (signed periodic permutations), hecke
(T-basis products and bar), matrices (coded matrices and their combinatorics),
schur (oracle and closed multiplication), special_forms (one-band and
equal-parameter engines), canonical (specializations and canonical bases),
stab (the stabilized algebra and its variants), iqg (presentation checking),
cli (command line).
"""

__version__ = "0.1.0"
