"""Similarity-based classification via landmarked embeddings.

Learn classifiers from arbitrary (possibly indefinite) similarity or distance
functions: embed points through transfer functions of kernel differences at
landmark pairs, train a linear model on top, tune the transfer on validation
data, pick diverse landmarks greedily, and verify the generalization
guarantees empirically on planted instances.
"""

from .data import (
    Dataset,
    KernelSpec,
    SplitSpec,
    gaussian_width,
    kernel_eval,
    kernel_matrix,
    load_dataset,
    make_dataset,
    normalization_constant,
    split,
    with_train_normalization,
)
from .embedding import (
    EmbeddedDataset,
    classify,
    classify_values,
    decision_value,
    decision_values,
    dump_embedding,
    embed_pairs,
    embed_singletons,
    margin_error,
)
from .errors import (
    ClassCoverageError,
    ConfigError,
    ConstructionError,
    DataFormatError,
    DegenerateDataError,
    DiversityDegenerateError,
    NumericError,
    ParseError,
    SimembedError,
    StratificationError,
)
from .ftune import (
    FtuneResult,
    ftune_m,
    ftune_s,
    ftune_s_ova,
    predict_binary,
    predict_multiclass,
)
from .goodness import (
    GoodnessParams,
    WeightFunction,
    constant_weight,
    estimate_goodness_bbs,
    estimate_goodness_pairs,
    estimate_goodness_sign,
    estimate_surrogate_goodness,
    plant_good_similarity,
    theorem2_pair_count,
    theorem7_pair_count,
    verify_lipschitz_perturbation,
    verify_theorem2,
    verify_theorem7,
)
from .harness import (
    ExperimentConfig,
    config_from_dict,
    curve_data,
    emit_report,
    load_config,
    load_report,
    run_experiment,
    run_method,
    welch_t_test,
)
from .landmark import (
    LandmarkPairSet,
    LandmarkSet,
    dselect,
    dselect_landmarks,
    dselect_multiclass,
    random_landmarks,
    random_pairs,
    sample_pairs_from_pool,
)
from .seeds import derive_seed
from .synthetic import make_linear_margin, make_multimodal_clusters, make_sign_favoring
from .trainer import (
    DEFAULT_C_GRID,
    LinearModel,
    LossFunction,
    accuracy,
    eval_loss,
    hinge_loss,
    logistic_loss,
    loss_values,
    margin_indicator_loss,
    model_from_json,
    model_to_json,
    select_c,
    train,
    zero_one_loss,
)
from .transfer import (
    TransferFamily,
    TransferFunction,
    apply,
    c_f,
    default_family,
    parse_family,
    parse_transfer,
)

__version__ = "1.0.0"
