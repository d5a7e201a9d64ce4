"""Proof repair across type equivalences in a small dependent type theory."""

import sys

# Normalizing and printing recurse over term depth.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

__version__ = "0.1.0"
