from .circle import CirclePoint, CyclicSet, OpenArc, arc_contains, cyclic_order, strictly_interlace
from .cmv import build, build_m_tilde, char_poly, krylov_cyclic, rank_one_completion, split, theta
from .rankone import (
    RankOnePair,
    SpectralMeasure,
    caratheodory_F,
    perturb,
    recover,
    schur_f,
    spectral_measure,
    unitary_eigs,
)
from .szego import VerblunskyWord, evaluate, phi, popuc_first, popuc_second, psi, star

__all__ = [
    "CirclePoint",
    "CyclicSet",
    "OpenArc",
    "arc_contains",
    "cyclic_order",
    "strictly_interlace",
    "VerblunskyWord",
    "phi",
    "star",
    "psi",
    "popuc_first",
    "popuc_second",
    "evaluate",
    "theta",
    "build",
    "build_m_tilde",
    "char_poly",
    "rank_one_completion",
    "split",
    "krylov_cyclic",
    "RankOnePair",
    "SpectralMeasure",
    "perturb",
    "recover",
    "unitary_eigs",
    "spectral_measure",
    "caratheodory_F",
    "schur_f",
]
