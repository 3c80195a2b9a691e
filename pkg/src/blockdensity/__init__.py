"""Block-density coded membership sets.

Factorial block codings, bounded finite-one compression maps, a stage-built
diagonal set with a full audit transcript, and certificate checkers that turn
order claims (chains, antichains, poset embeddings) into finite exact checks.
"""

from __future__ import annotations

import sys

# Witness serialization routinely converts factorial-scale integers to decimal
# strings, which exceeds the interpreter's default int<->str conversion guard.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(2_000_000)

__version__ = "0.1.0"
