"""limitlab: numerics for limit sets of Kleinian groups.

Subsystems: hyperbolic geometry in the Lorentz model, word-ball enumeration
and critical exponents for the example groups, truncated Patterson-Sullivan
measures, the boundary crossed product with its automorphism flow and KMS
functional, and concrete K-cycles on Cantor sets, circles and spheres.
"""

__version__ = "0.1.0"
