"""tagrec: tag-based hybrid recommendation engine for library catalogs."""

__version__ = "0.1.0"
