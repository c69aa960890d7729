"""Space-efficient choice dictionaries and graph traversal built on them.

A choice dictionary maintains a partition of {1, ..., n} into c color
classes under color/setcolor while answering choice ("some element of
class j") in constant time, within space close to the information-
theoretic minimum.  The subpackages provide several realizations with
different space/time tradeoffs, supporting utilities, and graph
algorithms (spanning forest, BFS, maximal clique) that run in the same
restricted space regime.
"""

__version__ = "0.1.0"
