"""
Test suite for the nfa algebra library.
"""
