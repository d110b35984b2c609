"""fnls-waves: periodic standing waves of the fractional NLS and their stability."""

__version__ = "0.1.0"
