"""Community-based service placement for community networks.

Phase One partitions the network by synchronous label propagation; Phase
Two elects one leader per community from a weighted score over topological
and system heuristics.  ``cnplace.netmodel`` fits and samples bandwidth/RTT
models used to fill unmeasured links.
"""

__version__ = "0.1.0"
