"""Trigonometric polynomials on the torus and their norms."""
