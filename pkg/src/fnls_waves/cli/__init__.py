"""CLI interface for fnls-waves."""
