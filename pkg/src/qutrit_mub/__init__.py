"""Exact N-qutrit Pauli partitions and mutually unbiased bases."""
