"""
Algebra of small atomic and subatomic nfas.
"""
__version__ = "1.0.0"
