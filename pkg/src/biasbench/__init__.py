"""Training-free model selection by simplicity bias and expressivity."""

from .harness import Architecture, ModelConfig, build_boolean_classifier, harvest
from .lzkit import lz76_phrase_count, lz_complexity
from .metrics import auc, cdf, empirical_distribution, expressivity, spearman
from .pipeline import RunSpec, correlate, run

__version__ = "0.1.0"
