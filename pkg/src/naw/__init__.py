"""Exact constructions around finite nilpotent group actions on bundles over tori."""

__version__ = "0.1.0"
