"""Construction and verification of quantum Latin squares.

The package builds classical scaffolding (mutually orthogonal, self
orthogonal, holey and conjugate orthogonal Latin squares, pairwise balanced
designs) and lifts it to quantum Latin squares, including orthogonal pairs,
idempotent squares and self orthogonal squares, with explicit numerical
verification of every product.
"""

__version__ = "0.1.0"
