"""Shared exception base for the dmcc toolkit."""


class DmccError(Exception):
    """Base class for all errors raised by this package."""
