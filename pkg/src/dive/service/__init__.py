"""HTTP service wrapping the engine: FastAPI app, wire schemas, persistence."""

from .app import create_app

__all__ = ["create_app"]
