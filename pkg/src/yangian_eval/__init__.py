"""Exact operator verification of the evaluation map for the affine Yangian of type A.

Images of Yangian generators are built as normally ordered sums of loop
generators of the affinized gl(n) and checked, relation by relation, on
graded pieces of induced modules with exact rational arithmetic.
"""

from .images import GenId, ImageBuilder, NotInPaper, ev_minimalistic, ev_T, higher_image, iota_image
from .loopalg import LieElt, LoopGen, bracket, omega
from .scalars import PolyQ, Rat
from .seriesop import MatrixEvaluator, PowerSeriesOp, SeriesOpTemplate, SparseEvaluator, quantum_minor
from .verify import VerificationReport, run_suites
from .vermamod import InducedModule, VacuumSpec

__all__ = [
    "GenId", "ImageBuilder", "NotInPaper", "ev_minimalistic", "ev_T", "higher_image", "iota_image",
    "LieElt", "LoopGen", "bracket", "omega", "PolyQ", "Rat",
    "MatrixEvaluator", "PowerSeriesOp", "SeriesOpTemplate", "SparseEvaluator", "quantum_minor",
    "VerificationReport", "run_suites", "InducedModule", "VacuumSpec",
]
