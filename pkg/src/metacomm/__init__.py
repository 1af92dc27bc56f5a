"""Metacommutation of primes in M_n(Z) and the Hurwitz order, and the cycle
structure of the induced permutations via GL_m(F_q) acting on projective space."""

__version__ = "0.1.0"
