"""Toric varieties, their rational curves, and the combinatorial spaces that model them."""
