"""Arithmetic puzzle family: expression search, generators, verifiers."""
