"""HTTP service exposing the toolkit over JSON endpoints."""

from .app import create_app

__all__ = ["create_app"]
