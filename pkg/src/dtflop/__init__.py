"""Finite-field verification of motivic DT invariants for the (-2)-curve quiver (Q_{-2}, W_d)."""

__version__ = "0.1.0"

# bump whenever a counting algorithm changes; part of every cache key
ORACLE_VERSION = "fqcount-3"
