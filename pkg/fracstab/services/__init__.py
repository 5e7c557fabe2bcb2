"""Business logic services for Fracstab.

This module contains services for system specs, stability certificates,
simulation and parameter sweeps.
"""
