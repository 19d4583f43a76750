"""Equivariant bilinear forms over finite fields, Burnside rings and hermitian elements.

Modules: groups, field, linalg, intlin, polys, burnside, forms, isometry,
algebra, meataxe, hermitian, galois, realclosed, wittlab, io, cli.
"""
__version__ = "0.1.0"
