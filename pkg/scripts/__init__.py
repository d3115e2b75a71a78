"""
Utility scripts.
"""
