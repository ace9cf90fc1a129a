"""Ratio-cut approximation on submodular hypergraphs."""
