"""gramsketch: randomized sketching with fixed-dimension embeddings.

The core primitive embeds an n x d matrix A into d dimensions as the
PSD square root of a sketched Gram matrix; everything else (regression,
PCA, leverage scores, l1 embeddings, coresets, Lewis weights) builds on
it.
"""

from .errors import (
    DimensionError,
    FormatError,
    GramSketchError,
    NotPsdError,
    NumericError,
    ParamError,
    RankDeficientError,
    SolverError,
    SymmetryError,
)
from .rng import Rng
from .linalg import (
    SvdResult,
    as_matrix,
    matmul,
    psd_sqrt,
    qr,
    solve_least_squares,
    spectral_norm,
    svd,
)
from .sketch import (
    SKETCH_KINDS,
    SketchSpec,
    apply_sketch,
    fwht,
    jlt_error,
    sample_cauchy,
    srht_dim,
)
from .l2_embed import (
    L2Embedding,
    default_sketch_spec,
    embed_l2,
    gram_sqrt,
    measure_l2_distortion,
)
from .l2_apps import (
    LeverageScores,
    RegressionResult,
    approx_leverage,
    approx_pca,
    default_jl_cols,
    lewis_jl_cols,
    lstsq_solver,
    nonneg_solver,
    ridge_solver,
    sketch_regress_l2,
)
from .l1_embed import (
    LOGR,
    BucketVariant,
    L1Embedding,
    embed_l1,
    log_power,
    measure_l1_distortion,
    parse_variant,
    spread_apply,
)
from .l1_apps import (
    PIPELINES,
    BasisChange,
    CoresetSample,
    LewisState,
    WeightVector,
    basis_from_l1,
    basis_from_l2,
    l1_bruteforce_oracle,
    l1_coreset,
    l1_sampling_probs,
    lewis_coreset,
    lewis_weights,
    regress_l1,
    solve_l1_small,
)
from .generators import gen_bad_matrix, gen_l1_experiment
from .matio import read_matrix, write_matrix
from .bench import (
    BenchConfig,
    bench_distortion,
    bench_regress_l1,
    render_csv,
)

__version__ = "0.1.0"
