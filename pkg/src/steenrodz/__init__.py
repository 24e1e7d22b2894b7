"""Exact computations with modules over the mod 2 Steenrod algebra."""
