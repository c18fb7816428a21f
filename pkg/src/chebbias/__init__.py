"""Finite-group toolkit and Frobenius-counting simulator for extreme
Chebyshev biases: exact class-function machinery, property deciders, and a
prime-counting engine with synthetic and quartic-field sources.
"""

from . import chebotarev, classfun, groups, props

__version__ = "0.1.0"

__all__ = ["chebotarev", "classfun", "groups", "props", "__version__"]
