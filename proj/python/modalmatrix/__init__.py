"""Modal clustering of matrix-variate data.

Kernel density estimation on P x T matrix observations (fixed, separable,
balloon and sample-point bandwidths), mean-shift mode seeking, a DCT-based
synthetic data generator, and partition-quality metrics.
"""

from ._core import (
    RNG_ALGORITHM,
    DegenerateBandwidthError,
    DimensionError,
    MetricError,
    ParameterError,
    __version__,
    amise_bandwidth,
    choose_k,
    cluster,
    confusion_table,
    dct2,
    fowlkes_mallows,
    generate,
    idct2,
    kmeans,
    log_density,
    mean_shift_step,
    normal_scale_gradient_bandwidth,
    preset_prototype,
    read_mvd,
    select_k_silhouette,
    silhouette,
    write_mvd,
)

__all__ = [
    "RNG_ALGORITHM",
    "DegenerateBandwidthError",
    "DimensionError",
    "MetricError",
    "ParameterError",
    "__version__",
    "amise_bandwidth",
    "choose_k",
    "cluster",
    "confusion_table",
    "dct2",
    "fowlkes_mallows",
    "generate",
    "idct2",
    "kmeans",
    "log_density",
    "mean_shift_step",
    "normal_scale_gradient_bandwidth",
    "preset_prototype",
    "read_mvd",
    "select_k_silhouette",
    "silhouette",
    "write_mvd",
]
