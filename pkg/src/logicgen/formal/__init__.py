"""Formal-language tasks: bracket sequences, boolean expressions, ciphers, word sorting."""
