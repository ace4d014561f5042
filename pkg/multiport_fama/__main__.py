"""Entry point for ``python -m multiport_fama``."""

from multiport_fama.cli import cli

if __name__ == "__main__":
    cli()
