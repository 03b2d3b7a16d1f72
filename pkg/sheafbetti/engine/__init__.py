"""Exact computation engine: arithmetic, local curve series, tree sums and checks."""
