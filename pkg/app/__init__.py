"""Exact computations with tilting complexes over quiver algebras."""

from .main import run_cli

__all__ = ["run_cli"]
