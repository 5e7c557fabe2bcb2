"""CLI command handlers for Fracstab.

This module contains all Typer command implementations.
"""
