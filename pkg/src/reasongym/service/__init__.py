from .app import DEFAULT_MAX_ACTION_BYTES, create_app

__all__ = ["DEFAULT_MAX_ACTION_BYTES", "create_app"]
