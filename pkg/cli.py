"""Command-line entry point for the localization laboratory."""

from app.cli.v1.commands import cli


if __name__ == "__main__":
    cli()
