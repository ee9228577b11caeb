from .config import ExperimentConfig, build_config, load_config, with_mode
from .metrics import (MetricsReport, json_safe, metric_c_path, metric_reloc_errors, metric_success,
                      dense_bytes, rle_bytes, encode_rle, grid_baseline_length)
from .render import export_render, render_text, render_image
from .experiment import RunReport, build_maps, run_experiment
