"""Structural SVMs for partial-AUC maximisation over an FPR range."""

from .data import ALGOS, DataError, Dataset, FprInterval, Model, ZScoreStats, \
    apply_zscore, dump_svmlight, normalize_zscore, parse_svmlight, score
from .estimator import PartialAUCSVM, ZScoreScaler
from .metrics import RocCurve, empirical_auc, empirical_pauc, partial_area, pauc_risk, \
    roc_curve, tpr_at_fpr
from .mvc import MostViolated, most_violated, mvc_auc, mvc_pauc_0beta, mvc_pauc_general
from .ordering import Constraint, OrderingCounts, build_constraint, joint_feature_map
from .qp import QpSolution, solve as solve_qp
from .trainers import ConvergenceError, CVResult, TrainConfig, TrainReport, cross_validate_C, \
    train, train_cccp, train_cutting_plane

__version__ = "0.1.0"

__all__ = [
    "ALGOS", "CVResult", "Constraint", "ConvergenceError", "DataError", "Dataset",
    "FprInterval", "Model", "MostViolated", "OrderingCounts", "PartialAUCSVM",
    "QpSolution", "RocCurve", "TrainConfig", "TrainReport", "ZScoreScaler", "ZScoreStats",
    "apply_zscore", "build_constraint", "cross_validate_C", "dump_svmlight",
    "empirical_auc", "empirical_pauc", "joint_feature_map", "most_violated", "mvc_auc",
    "mvc_pauc_0beta", "mvc_pauc_general", "normalize_zscore", "parse_svmlight",
    "partial_area", "pauc_risk", "roc_curve", "score", "solve_qp", "tpr_at_fpr", "train",
    "train_cccp", "train_cutting_plane",
]
