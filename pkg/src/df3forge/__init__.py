"""Three-variable equality-free logic: formulas, proof systems, semantics
and the pairing-based translation chain from first-order set theory."""

__version__ = "0.1.0"
