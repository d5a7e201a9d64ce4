"""Concrete syntax, vernacular runner and command line."""
