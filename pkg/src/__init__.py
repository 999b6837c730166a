"""
Hybrid Spectral Toolkit
Main source package
"""

__version__ = "1.0.0"
__author__ = "Hybrid Spectral Toolkit Developers"
