"""CLI entry point for fnls-waves."""

from fnls_waves.cli.commands import main

if __name__ == "__main__":
    main()
