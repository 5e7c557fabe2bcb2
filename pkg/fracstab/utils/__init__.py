"""Utility functions for Fracstab.

This module contains configuration, display, validation and export helpers.
"""
