"""Explicit rate-optimal streaming codes for burst and arbitrary erasures."""

from __future__ import annotations

from .construction import CodeParams, CodeTables, build_code, derive_params

__all__ = ["CodeParams", "CodeTables", "build_code", "derive_params"]
__version__ = "0.1.0"
