"""Additive combinatorics in F_q[t]: Fourier analysis, Bohr sets and the density-increment method."""
__version__ = "0.1.0"

from .bohr import (BohrSet, bohr_build, bohr_dilate, bohr_enumerate, bohr_member,
                   bohr_member_direct, bohr_narrow, degree_subspace, whole_group)
from .equations import (EquationSpec, RecordStore, SearchRecord, SolutionCount, bound_evaluate,
                        count_solutions, genus, is_solution_free, max_solution_free_exhaustive,
                        max_solution_free_heuristic)
from .field import FieldCtx, field_make
from .fourier import (GroupFn, char_eval, convolve_local, convolve_with_measure, fourier_forward,
                      fourier_inverse, fourier_values, inverse_values)
from .group import PolyGroup, group_for_q, make_group
from .poly import GPoly, LaurentTail
from .spectral import (chang_dissect, increment_from_spectrum, spectrum, symmetry_set,
                       verify_chang)
from .znz import (ZBohrSet, znz_approx_identity_check, znz_bohr_build, znz_find_regular_width,
                  znz_is_regular)

__all__ = [
    "BohrSet",
    "EquationSpec",
    "FieldCtx",
    "GPoly",
    "GroupFn",
    "LaurentTail",
    "PolyGroup",
    "RecordStore",
    "SearchRecord",
    "SolutionCount",
    "ZBohrSet",
    "bohr_build",
    "bohr_dilate",
    "bohr_enumerate",
    "bohr_member",
    "bohr_member_direct",
    "bohr_narrow",
    "bound_evaluate",
    "chang_dissect",
    "char_eval",
    "convolve_local",
    "convolve_with_measure",
    "count_solutions",
    "degree_subspace",
    "field_make",
    "fourier_forward",
    "fourier_inverse",
    "fourier_values",
    "genus",
    "group_for_q",
    "increment_from_spectrum",
    "inverse_values",
    "is_solution_free",
    "make_group",
    "max_solution_free_exhaustive",
    "max_solution_free_heuristic",
    "spectrum",
    "symmetry_set",
    "verify_chang",
    "whole_group",
    "znz_approx_identity_check",
    "znz_bohr_build",
    "znz_find_regular_width",
    "znz_is_regular",
]
