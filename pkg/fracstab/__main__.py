"""Entry point for running Fracstab as a module.

Usage:
    python -m fracstab [COMMAND] [OPTIONS]
"""

from fracstab.cli.main import app

if __name__ == "__main__":
    app()
