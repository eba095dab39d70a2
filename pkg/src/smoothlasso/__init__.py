"""Smooth-Lasso estimators: augmented LARS paths, BIC selection, condition checks, simulations."""

from .core import (FusionMatrices, PenaltySpec, QuadKind, RegressionData, fusion_matrices, gram,
                   standardize)
from .lars import RegPath, interpolate, lars_lasso_path
from .selection import (DfEstimate, Method, SelectionResult, bic, df_approx, df_comparators,
                        df_exact, select_model)
from .slasso import (HS, NS, ORIGINAL, ScalingSpec, SLassoFit, augment, family_path, fit,
                     kkt_check, slasso_path, soft_threshold_limit)
from .theory import OracleModel

__version__ = "0.1.0"
