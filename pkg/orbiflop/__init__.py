"""orbiflop.

Exact Chen-Ruan and Ruan cohomology of local orbi-conifolds, their flops,
symplectic small resolutions, and numeric certification of the smoothing.
"""

__version__ = "1.0.0"
