"""genint: finite-part integrals, Macdonald/Gegenbauer functions, and
point-interaction Green functions on Euclidean, hyperbolic and spherical
spaces.
"""

__version__ = "0.1.0"
