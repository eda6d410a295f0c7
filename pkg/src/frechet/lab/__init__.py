from .config import ExperimentConfig, load_config, shipped_configs, validate_config
from .experiments import (
    RESULT_COLUMNS,
    SummaryRow,
    check_tail_coverage,
    run_error_experiment,
    write_results_csv,
)
from .figure1 import adversarial_distance, figure1_regression
from .samplers import (
    ConstantSampler,
    GaussianSampler,
    TreeLeafSampler,
    TwoPointSampler,
    UniformCapSampler,
    estimate_total_variance,
    sample_tree_leaves,
    sample_two_point,
    sample_uniform_cap,
)
