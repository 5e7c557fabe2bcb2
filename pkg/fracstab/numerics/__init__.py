"""Numerical kernels for Fracstab.

Special functions, small dense linear algebra and Caputo derivatives.
"""
