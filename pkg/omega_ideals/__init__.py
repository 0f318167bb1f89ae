"""
Omega Ideals

Ideals on the natural numbers: exact membership fast paths, tallness with
certificates, ideal convergence of sequences, summability matrices and the
constructive witnesses on both sides of the FK admissibility question for
c(I).
"""

__version__ = '1.0.0'
