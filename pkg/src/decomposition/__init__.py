"""Finite-rank Fourier-multiplier decompositions of the identity on H^1."""
