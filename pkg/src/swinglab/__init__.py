"""Racquet-swing assessment toolkit.

Parses marker motion clips, reconstructs the racquet's virtual sweet-spot
marker, compresses each swing's kinematics into a fixed 12-value spatial
pattern, classifies technique quality with a seeded Gaussian RBF network,
and evaluates with repeated leave-one-out cross-validation. A synthetic
swing generator provides labelled ground-truth datasets for every stage.
"""

from .errors import (
    ClipFormatError,
    DegenerateFitError,
    DegenerateGeometryError,
    LabelFileError,
    MissingSampleError,
    ModelStateError,
    RoiError,
    SwinglabError,
    TrainingRefusedError,
)
from .evaluation import (
    FoldResult,
    LoocvReport,
    accuracy,
    loocv,
    majority_baseline,
    render_sweep_table,
    repeat_loocv,
    sweep_hidden_units,
)
from .features import (
    FEATURE_COUNT,
    FEATURE_LABELS,
    FeatureVector,
    Normalizer,
    QuadFit,
    apply_normalizer,
    assemble_features,
    fit_normalizer,
    fit_quadratic,
    fit_quality_report,
    plane_fits,
    project_plane,
    read_features,
    reduction_report,
    write_features,
)
from .kinematics import (
    acceleration,
    circumcenter,
    compute_sweet_spot,
    compute_vector_tips,
    gradient_flow,
    velocity,
)
from .mocap_io import (
    LabelRecord,
    RoiSpec,
    SwingClip,
    convert_handedness,
    labels_by_criterion,
    load_labels,
    load_roi_file,
    parse_clip,
    slice_roi,
    write_clip,
    write_labels,
    write_roi_file,
)
from .pipeline import (
    SwingKinematics,
    build_viewer_bundle,
    extract_swing_features,
    load_viewer_bundle,
    swing_kinematics,
    write_viewer_bundle,
)
from .rbfnet import (
    RbfModel,
    TrainConfig,
    activation_matrix,
    descend_output_weights,
    load_model,
    min_training_size,
    model_from_dict,
    model_to_dict,
    place_centers,
    predict_label,
    predict_score,
    save_model,
    set_widths,
    solve_output_weights,
    targets_from_labels,
    train,
)
from .seeds import derive_seed
from .synthgen import (
    MARKER_NAMES,
    SKELETON_EDGES,
    SwingArchetype,
    default_preset,
    generate_dataset,
    generate_swing,
    random_archetype,
)

__version__ = "0.1.0"
