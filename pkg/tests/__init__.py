"""Test suite for Fracstab."""
