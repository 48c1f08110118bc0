"""Monte-Carlo experiment harness."""

from .config import ExperimentConfig, NoiseSpec, derive_seed
from .runners import (
    ResultRow,
    ResultTable,
    run_experiment,
    run_real_data_experiment,
    run_sampling_experiment,
    run_support_experiment,
)
