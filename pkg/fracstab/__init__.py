"""Fracstab - stabilizability toolkit for fractional nonlinear control systems.

Simulates systems that mix first-order dynamics with Caputo fractional
derivatives and a time-dependent nonlinear gain, and checks local asymptotic
stabilizability under state-derivative feedback u(t) = K x'(t).
"""

__version__ = "0.1.0"
__author__ = "Fracstab Team"

from fracstab.models.exceptions import FracstabError

__all__ = ["__version__", "__author__", "FracstabError"]
