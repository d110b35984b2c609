"""Numerical core for fnls-waves."""
