"""Exact-arithmetic Clifford algebra and lattice Dirac operator auditing.

The package keeps all algebraic claims in exact rational arithmetic
(`fractions.Fraction` coefficients over bitmask-encoded blades) so that
every audited identity is either exactly zero or has an exact nonzero
witness.  Floating point is confined to the Fourier-symbol module.
"""

__version__ = "0.1.0"
