"""Density-increment machinery: transformation steps, translate sets, dichotomy and driver."""
from .croot_sisask import (CSOutcome, TranslateSet, cs_increment, cs_translates,
                           cs_translates_sampled, local_inner_product)
from .dichotomy import DichotomyOutcome, density_dichotomy
from .driver import AffineMap, Trajectory, run_density_iteration
from .katz_koester import KKOutcome, kk_step, kk_transform
from .tuning import TuningConstants

__all__ = [
    "AffineMap", "CSOutcome", "DichotomyOutcome", "KKOutcome", "Trajectory", "TranslateSet",
    "TuningConstants", "cs_increment", "cs_translates", "cs_translates_sampled",
    "density_dichotomy", "kk_step", "kk_transform", "local_inner_product",
    "run_density_iteration",
]
