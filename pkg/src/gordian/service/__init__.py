"""HTTP service exposing the knot-distance toolkit."""

from .app import create_app

__all__ = ["create_app"]
