"""CLI entry point for ode-linearizer."""

from ode_linearizer.cli import main

if __name__ == "__main__":
    main()
