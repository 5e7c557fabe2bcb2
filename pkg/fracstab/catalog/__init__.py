"""Built-in system catalog for Fracstab.

This module contains the documents of the shipped example systems.
"""
