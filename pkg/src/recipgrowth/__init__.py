"""Reciprocal-value analysis of hyperbolic growth series."""

from .diverge import DivergenceParams, DivergenceReport, Direction, detect_divergence, divergence_sign_of
from .errors import (BeyondSingularityError, DatasetNotFoundError, DegenerateDesignError,
                     DomainError, DuplicateYearError, FitError, InsufficientDataError, ParseError,
                     RecipGrowthError, UndefinedRatioError)
from .fit import (FitOptions, HyperbolicFit, Weighting, evaluate, fit_first_order, growth_rate,
                  line_fit, residuals_recip, singularity_time)
from .modelzoo import (ClassificationResult, ExpFit, ModelClass, PolyRecipFit, RatioModel, classify,
                       fit_exponential, fit_poly_recip, ratio_value)
from .segment import SegmentedFit, acceleration_ratio, fit_segmented
from .series import TimePoint, TimeSeries, exclude, load_bundled, parse_csv, reciprocal, slice

__version__ = "0.1.0"
