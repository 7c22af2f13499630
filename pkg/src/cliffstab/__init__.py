"""Exact verification laboratory for Clifford-hierarchy stabilizer codes."""
