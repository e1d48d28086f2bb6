"""Exact observables on Young diagrams and a Plancherel-measure laboratory.

The package has an exact layer (integer/rational arithmetic throughout) and a
statistical layer on top of it:

- ``partitions``: Young diagrams and lossless conversion between row lengths,
  modified Frobenius coordinates and interlacing profile extrema.
- ``characters``: symmetric-group characters, dimensions, Plancherel weights.
- ``observables``: pointwise evaluation of the observable families (power
  sums, profile moments, normalized character values, transition-measure
  moments, free cumulants) and the centered/scaled fluctuation functionals.
- ``algebra``: the symbolic algebra of polynomial functions on diagrams in
  its several generator systems, structure constants, filtrations and the
  leading-term verification suite.
- ``plancherel``: exact expectations under the Plancherel measure and the
  corner-growth sampler.
- ``limits``: Monte Carlo verification of the law of large numbers and the
  central limit theorems, plus the character-ratio asymptotics check.
- ``cli``: command-line entry point (``planchlab``).
"""

from .partitions import YoungDiagram, FrobeniusCoords, InterlacingExtrema

__all__ = ["YoungDiagram", "FrobeniusCoords", "InterlacingExtrema"]

__version__ = "0.1.0"
