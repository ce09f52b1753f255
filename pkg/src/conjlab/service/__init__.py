"""HTTP service exposing the conjugation-analysis toolkit."""

from .app import create_app

__all__ = ["create_app"]
