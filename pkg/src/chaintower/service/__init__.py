"""HTTP service and the shared in-process command handlers."""

from .app import app, create_app

__all__ = ["app", "create_app"]
