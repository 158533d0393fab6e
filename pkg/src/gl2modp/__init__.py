"""Exact computations with mod-p representations of GL2 over p-adic and
function fields at finite level: Serre weights, Ext groups over truncated
Iwasawa algebras, finite principal series, Hecke operators on the tree,
and fixed-space checks for Galois x torus modules."""

__version__ = "0.1.0"
