"""Quasiisometric embeddings between cycle right-angled Artin groups."""

from .words import GroupElement, Presentation, Syllable, Word, reduce

__all__ = ["GroupElement", "Presentation", "Syllable", "Word", "reduce"]
__version__ = "0.1.0"
