"""Bregman-Tweedie divergences, losses and box-constrained linear classifiers."""

from .alpha_domain import (
    RealCategory,
    as_rational,
    classify_rational,
    format_rational,
    rational_of_string,
    reciprocal_category,
    signed_pow,
)
from .bench import (
    BenchmarkReport,
    DatasetEntry,
    MethodSpec,
    default_methods,
    emit_report,
    friedman_ranking,
    read_manifest,
    run_benchmark,
)
from .classifier import (
    DEFAULT_LAMBDA_GRID,
    Hyperplane,
    TrainConfig,
    accuracy,
    fit,
    load_model,
    predict,
    predict_many,
    save_model,
    select_lambda,
)
from .dataset import CVPlan, Dataset, kfold_indices, load_csv, preprocess, rescale_l1, standardize, two_gaussians
from .errors import *  # noqa: F401,F403
from .extended import (
    BranchChoice,
    DomainSpec,
    c_alpha,
    domain_exp,
    domain_ln,
    exp_alpha,
    exp_alpha_c,
    ln_alpha,
    ln_alpha_c,
)
from .legendre import (
    BaseFunction,
    bregman_div,
    conjugate_check,
    domain_phi,
    domain_psi,
    is_legendre_type,
    legendre_transform,
    phi,
    phi_prime,
    psi,
    psi_prime,
)
from .losses import HingeSpec, LossSpec, Mode, bt_loss, bt_loss_grad, higher_order_hinge, make_spec, objective_and_grad
from .optimizer import BoxConstraint, OptimConfig, OptimResult, minimize, project_box

__version__ = "0.1.0"
