"""BCC efficiency analysis, terminal units, frontier sections and frontier improvement."""

__version__ = "0.1.0"

from .data import Dataset, Point
from .dea import (
    INPUT,
    OUTPUT,
    EfficiencyResult,
    UnitClass,
    bcc_input,
    bcc_output,
    classify,
    evaluate_all,
    evaluate_unit,
    membership,
    wpe_gap,
)
from .exceptions import (
    ConvergenceFailure,
    DataError,
    DEAError,
    DegeneratePlacementError,
    InputError,
    NumericalFailure,
    OutsidePPSError,
)
from .improve import (
    ArtificialUnit,
    ImprovementResult,
    ImproveParams,
    candidate_artificial,
    certify,
    corrective_pass,
    improve_frontier,
    remove_weak_projections,
    smooth_terminal_units,
)
from .lp import LpProblem, LpSolution, solve_lexicographic, solve_lp
from .sections import SectionPolyline, SectionSpec, boundary_point, section_polyline
from .terminal import (
    Direction,
    TerminalReport,
    find_terminal_units,
    is_extreme_efficient,
    minimal_face_generators,
    terminal_directions,
)

__all__ = [
    "Dataset", "Point", "INPUT", "OUTPUT", "EfficiencyResult", "UnitClass",
    "bcc_input", "bcc_output", "classify", "evaluate_all", "evaluate_unit", "membership", "wpe_gap",
    "ConvergenceFailure", "DataError", "DEAError", "DegeneratePlacementError", "InputError",
    "NumericalFailure", "OutsidePPSError",
    "ArtificialUnit", "ImprovementResult", "ImproveParams", "candidate_artificial", "certify",
    "corrective_pass", "improve_frontier", "remove_weak_projections", "smooth_terminal_units",
    "LpProblem", "LpSolution", "solve_lexicographic", "solve_lp",
    "SectionPolyline", "SectionSpec", "boundary_point", "section_polyline",
    "Direction", "TerminalReport", "find_terminal_units", "is_extreme_efficient",
    "minimal_face_generators", "terminal_directions",
]
