"""Embedded minimal graph over a spiraling infinite-valued disk."""
