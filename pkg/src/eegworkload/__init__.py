"""EEG memory-workload analysis: preprocessing, spectral/information
features, grouped SVM evaluation, workload signatures, and time-course
dynamics, plus a synthetic-data generator with analytic ground truth.
"""

from .config import PipelineConfig
from .dynamics import (
    SubjectTimeCourse,
    TimeCourse,
    aggregate_subjects,
    signature_time_course,
    step_grid,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateDataWarning,
    EpochBoundsError,
    InsufficientDataError,
    LabelNotFoundError,
    ParameterError,
    SchemaError,
    TrainingError,
    UndefinedMetricError,
    WorkloadError,
    ZeroVarianceWarning,
)
from .evaluation import (
    EvalResult,
    FEATURE_SPACES,
    LabeledFeatureSet,
    balanced_accuracy,
    cross_block_split,
    evaluate,
    feature_space_columns,
    group_samples,
    repeated_kfold_split,
    train_rbf_classifier,
)
from .fileio import (
    read_epochs,
    read_eval_result,
    read_events,
    read_feature_scores,
    read_feature_table,
    read_manifest,
    read_model,
    read_recording,
    read_signature,
    read_test_result,
    read_time_course,
    sidecar_path,
    write_epochs,
    write_eval_result,
    write_events,
    write_feature_scores,
    write_feature_table,
    write_manifest,
    write_model,
    write_recording,
    write_signature,
    write_signature_values,
    write_test_result,
    write_time_course,
)
from .features import (
    FeatureVector,
    LOG_FLOOR,
    MI_BINS,
    band_bin_count,
    band_power,
    bp_feature_names,
    canonical_feature_names,
    coh_feature_names,
    coherence_band_features,
    extract_all,
    mi_feature_names,
    msc_spectrum,
    mutual_information,
    spectral_power,
    windowed_average,
)
from .preprocessing import (
    bandpass_filter,
    downsample,
    extract_epochs,
    rereference,
    select_channels,
)
from .recording import (
    CANONICAL_BANDS,
    CANONICAL_CHANNELS,
    HIGH,
    LOW,
    BandSpec,
    Epoch,
    EventMarker,
    Recording,
)
from .stats import (
    FeatureScore,
    SignatureDef,
    SignatureEntry,
    TestResult,
    anova_f_scores,
    anova_f_values,
    benjamini_hochberg,
    build_signature,
    literature_signature,
    paired_bootstrap_f_test,
    select_top_percent,
    signature_value,
    top_k_from_percent,
    wilcoxon_signed_rank,
)
from .svm import TrainedModel, fit_svm, predict, rbf_kernel
from .synth import (
    BOOST_CHANNELS,
    DELTA_HZ,
    THETA_HZ,
    SynthConfig,
    expected_bin_power_increase,
    generate,
    planted_feature_names,
)

__version__ = "0.1.0"

__all__ = [
    "BandSpec",
    "BOOST_CHANNELS",
    "CANONICAL_BANDS",
    "CANONICAL_CHANNELS",
    "ConfigError",
    "ConvergenceError",
    "DegenerateDataWarning",
    "DELTA_HZ",
    "Epoch",
    "EpochBoundsError",
    "EvalResult",
    "EventMarker",
    "FEATURE_SPACES",
    "FeatureScore",
    "FeatureVector",
    "HIGH",
    "InsufficientDataError",
    "LabeledFeatureSet",
    "LabelNotFoundError",
    "LOG_FLOOR",
    "LOW",
    "MI_BINS",
    "ParameterError",
    "PipelineConfig",
    "Recording",
    "SchemaError",
    "SignatureDef",
    "SignatureEntry",
    "SubjectTimeCourse",
    "SynthConfig",
    "TestResult",
    "THETA_HZ",
    "TimeCourse",
    "TrainedModel",
    "TrainingError",
    "UndefinedMetricError",
    "WorkloadError",
    "ZeroVarianceWarning",
    "aggregate_subjects",
    "anova_f_scores",
    "anova_f_values",
    "balanced_accuracy",
    "band_bin_count",
    "band_power",
    "bandpass_filter",
    "benjamini_hochberg",
    "bp_feature_names",
    "build_signature",
    "canonical_feature_names",
    "coh_feature_names",
    "coherence_band_features",
    "cross_block_split",
    "downsample",
    "evaluate",
    "expected_bin_power_increase",
    "extract_all",
    "extract_epochs",
    "feature_space_columns",
    "fit_svm",
    "generate",
    "group_samples",
    "literature_signature",
    "mi_feature_names",
    "msc_spectrum",
    "mutual_information",
    "paired_bootstrap_f_test",
    "planted_feature_names",
    "predict",
    "rbf_kernel",
    "read_epochs",
    "read_eval_result",
    "read_events",
    "read_feature_scores",
    "read_feature_table",
    "read_manifest",
    "read_model",
    "read_recording",
    "read_signature",
    "read_test_result",
    "read_time_course",
    "repeated_kfold_split",
    "rereference",
    "select_channels",
    "select_top_percent",
    "sidecar_path",
    "signature_time_course",
    "signature_value",
    "spectral_power",
    "step_grid",
    "top_k_from_percent",
    "train_rbf_classifier",
    "wilcoxon_signed_rank",
    "windowed_average",
    "write_epochs",
    "write_eval_result",
    "write_events",
    "write_feature_scores",
    "write_feature_table",
    "write_manifest",
    "write_model",
    "write_recording",
    "write_signature",
    "write_signature_values",
    "write_test_result",
    "write_time_course",
]
