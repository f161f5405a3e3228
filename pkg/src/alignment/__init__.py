# src/alignment/__init__.py
"""
Interactive regularization terms between the image and text branches.
"""

from .base_alignment import (
    ALIGNMENT_NAMES, AlignmentBatch, AlignmentKind, BaseAlignment, NoAlignment, TripletIndex,
)
from .coral import CoralAlignment, coral_grad, coral_loss
from .mmd import MMDAlignment, mmd_grad, mmd_loss
from .triplet import TripletAlignment, sample_triplets, triplet_grad, triplet_loss

ALIGNMENTS = {
    "none": NoAlignment,
    "coral": CoralAlignment,
    "mmd": MMDAlignment,
    "triplet": TripletAlignment,
}


def build_alignment(kind: AlignmentKind) -> BaseAlignment:
    return ALIGNMENTS[kind.kind](kind)


__all__ = [
    'ALIGNMENTS', 'ALIGNMENT_NAMES', 'build_alignment',
    'AlignmentBatch', 'AlignmentKind', 'BaseAlignment', 'NoAlignment', 'TripletIndex',
    'CoralAlignment', 'coral_loss', 'coral_grad',
    'MMDAlignment', 'mmd_loss', 'mmd_grad',
    'TripletAlignment', 'triplet_loss', 'triplet_grad', 'sample_triplets',
]
