"""Exact symbolic calculators for eta-periodic motivic stable homotopy.

Subpackages cover finitely generated abelian groups (`abelian`), presented
Witt rings (`witt`), sparse graded algebras with rewrite relations and the
filtered-module toolkit (`graded`, `filtered`), the mod-2 motivic dual
Steenrod algebra and its eta-Bockstein pages (`steenrod`), and the degree
calculators for operator rings, cobordism and stems tables (`kwcalc`).
"""

__version__ = "0.1.0"
