"""Deterministic impact simulator for rate-tampering attacks on a
variable-rate side-dress nitrogen applicator.

The pipeline: generate or load a management-zone field, prescribe
nitrogen per zone, tamper with the in-season pass through a multiplier
map, harvest the resulting yields, and compile the financial ledger of
expected versus actual profit. An optimizer searches multiplier maps for
the worst-case stealthy attack.
"""

__version__ = "0.1.0"
