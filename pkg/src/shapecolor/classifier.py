"""Logistic verification model: hypothesis, cost, gradient-descent training,
and one-shot category prediction against stored exemplars."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateLabelsError,
    DivergenceError,
    FingerprintMismatchError,
    ModelFormatError,
)
from .imaging import ImageAttributes
from .similarity import FeaturePair, ScalerParams, apply_scaler, compare

MODEL_FORMAT_VERSION = 1

# Cost is undefined at h in {0, 1}; log arguments are clamped instead.
PROB_EPS = 1e-15

DIVERGENCE_PATIENCE = 10


@dataclass(frozen=True)
class Theta:
    """Coefficients of the logistic hypothesis."""

    intercept: float = 0.0
    w_delta: float = 0.0
    w_epsilon: float = 0.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.intercept, self.w_delta, self.w_epsilon))):
            raise ValueError("theta components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.intercept, self.w_delta, self.w_epsilon])

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Theta":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]))


@dataclass(frozen=True)
class TrainConfig:
    """Gradient-descent settings.

    ``seed`` is carried as run metadata only; optimization starts from zero
    coefficients and is fully deterministic.
    """

    learning_rate: float = 0.1
    max_iterations: int = 10_000
    convergence_tol: float = 1e-8
    l2_lambda: float = 0.0
    use_intercept: bool = True
    seed: int = 0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.convergence_tol > 0:
            raise ValueError("convergence_tol must be positive")
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be nonnegative")


@dataclass(frozen=True)
class TrainingSet:
    """Scaled feature pairs with binary same-category labels."""

    features: tuple[FeaturePair, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        features = tuple(self.features)
        labels = tuple(int(v) for v in self.labels)
        if len(features) != len(labels):
            raise ValueError("features and labels must have equal length")
        if len(features) < 1:
            raise ValueError("training set must contain at least one example")
        if any(label not in (0, 1) for label in labels):
            raise ValueError("labels must be 0 or 1")
        if any(not pair.scaled for pair in features):
            raise ValueError("training features must be scaled")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def m(self) -> int:
        return len(self.features)

    def design_matrix(self) -> np.ndarray:
        """(m, 3) matrix with a leading column of ones for the intercept."""
        rows = [(1.0, p.delta, p.epsilon) for p in self.features]
        return np.asarray(rows, dtype=np.float64)

    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=np.float64)


@dataclass(frozen=True)
class CategoryModel:
    """A named category backed by one or more exemplar images' attributes."""

    name: str
    exemplars: tuple[ImageAttributes, ...]

    def __post_init__(self):
        exemplars = tuple(self.exemplars)
        if len(exemplars) < 1:
            raise ValueError("a category needs at least one exemplar")
        object.__setattr__(self, "exemplars", exemplars)


@dataclass(frozen=True)
class VerificationModel:
    """Trained verifier: coefficients, feature scaler, and provenance."""

    theta: Theta
    scaler: ScalerParams
    train_config: TrainConfig
    preprocess_fingerprint: str

    def __post_init__(self):
        if not self.preprocess_fingerprint:
            raise ValueError("preprocess_fingerprint must be non-empty")


@dataclass(frozen=True)
class TrainResult:
    """Training outcome: best coefficients plus the cost trajectory."""

    theta: Theta
    costs: tuple[float, ...]
    iterations: int
    converged: bool

    @property
    def final_cost(self) -> float:
        return self.costs[-1]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def predict_probability(theta: Theta, pair: FeaturePair) -> float:
    """Logistic hypothesis on a scaled feature pair, kept strictly inside (0, 1)."""
    if not pair.scaled:
        raise ValueError("predict_probability requires a scaled pair")
    z = theta.intercept + theta.w_delta * pair.delta + theta.w_epsilon * pair.epsilon
    if z >= 0:
        prob = 1.0 / (1.0 + math.exp(-z))
    else:
        ez = math.exp(z)
        prob = ez / (1.0 + ez)
    return float(min(max(prob, PROB_EPS), 1.0 - PROB_EPS))


def cost(theta: Theta, ts: TrainingSet, l2_lambda: float = 0.0) -> float:
    """Mean negative log-likelihood, plus an optional L2 penalty on the weights."""
    x = ts.design_matrix()
    y = ts.label_array()
    h = np.clip(_sigmoid(x @ theta.as_array()), PROB_EPS, 1.0 - PROB_EPS)
    nll = -np.mean(y * np.log(h) + (1.0 - y) * np.log(1.0 - h))
    if l2_lambda > 0:
        nll += l2_lambda / (2.0 * ts.m) * (theta.w_delta**2 + theta.w_epsilon**2)
    return float(nll)


def gradient(theta: Theta, ts: TrainingSet, l2_lambda: float = 0.0) -> Theta:
    """Analytic cost gradient; the intercept is never penalized."""
    x = ts.design_matrix()
    y = ts.label_array()
    residual = _sigmoid(x @ theta.as_array()) - y
    grad = x.T @ residual / ts.m
    if l2_lambda > 0:
        grad[1] += l2_lambda / ts.m * theta.w_delta
        grad[2] += l2_lambda / ts.m * theta.w_epsilon
    return Theta.from_array(grad)


def train(ts: TrainingSet, cfg: TrainConfig) -> TrainResult:
    """Batch gradient descent from zero coefficients.

    Stops when the cost change drops below ``convergence_tol`` or after
    ``max_iterations``. Ten consecutive cost increases abort with
    ``DivergenceError``. Returns the lowest-cost coefficients visited, so the
    result never scores worse than the zero vector.
    """
    labels = set(ts.labels)
    if labels != {0, 1}:
        raise DegenerateLabelsError("training set must contain both labels")

    theta = Theta()
    costs = [cost(theta, ts, cfg.l2_lambda)]
    best_theta, best_cost = theta, costs[0]
    converged = False
    iterations = 0
    increase_streak = 0

    for iterations in range(1, cfg.max_iterations + 1):
        grad = gradient(theta, ts, cfg.l2_lambda)
        step = grad.as_array()
        if not cfg.use_intercept:
            step[0] = 0.0
        theta = Theta.from_array(theta.as_array() - cfg.learning_rate * step)
        current = cost(theta, ts, cfg.l2_lambda)
        costs.append(current)
        if current > costs[-2]:
            increase_streak += 1
            if increase_streak >= DIVERGENCE_PATIENCE:
                raise DivergenceError(
                    f"cost increased for {DIVERGENCE_PATIENCE} consecutive steps; "
                    "reduce the learning rate"
                )
        else:
            increase_streak = 0
        if current < best_cost:
            best_theta, best_cost = theta, current
        if abs(current - costs[-2]) < cfg.convergence_tol:
            converged = True
            break

    return TrainResult(
        theta=best_theta,
        costs=tuple(costs),
        iterations=iterations,
        converged=converged,
    )


def _exemplar_pairs(probe: ImageAttributes, category: CategoryModel) -> list[FeaturePair]:
    return [compare(probe, exemplar) for exemplar in category.exemplars]


def _mean_probability(pairs: Sequence[FeaturePair], model: VerificationModel) -> float:
    probs = [
        predict_probability(model.theta, apply_scaler(pair, model.scaler))
        for pair in pairs
    ]
    return float(np.mean(probs))


def score_category(
    probe: ImageAttributes, category: CategoryModel, model: VerificationModel
) -> float:
    """Mean verification probability of the probe against a category's exemplars.

    The probe must come from the same preprocessing settings the model's
    fingerprint records.
    """
    return _mean_probability(_exemplar_pairs(probe, category), model)


def classify(
    probe: ImageAttributes,
    categories: Sequence[CategoryModel],
    model: VerificationModel,
) -> list[tuple[str, float]]:
    """Rank categories by verification probability, best first.

    Ties break toward the smaller mean shape distance, then the
    lexicographically smaller category name.
    """
    if len(categories) == 0:
        raise ValueError("classify requires at least one category")
    ranked = []
    for category in categories:
        pairs = _exemplar_pairs(probe, category)
        prob = _mean_probability(pairs, model)
        mean_delta = float(np.mean([p.delta for p in pairs]))
        ranked.append((category.name, prob, mean_delta))
    ranked.sort(key=lambda item: (-item[1], item[2], item[0]))
    return [(name, prob) for name, prob, _ in ranked]


def save_model(model: VerificationModel, path: str | Path) -> None:
    """Write the model as a stable, portable JSON text file."""
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "preprocess_fingerprint": model.preprocess_fingerprint,
        "theta": {
            "intercept": model.theta.intercept,
            "w_delta": model.theta.w_delta,
            "w_epsilon": model.theta.w_epsilon,
        },
        "scaler": {
            "delta_min": model.scaler.delta_min,
            "delta_max": model.scaler.delta_max,
            "epsilon_min": model.scaler.epsilon_min,
            "epsilon_max": model.scaler.epsilon_max,
        },
        "train_config": {
            "learning_rate": model.train_config.learning_rate,
            "max_iterations": model.train_config.max_iterations,
            "convergence_tol": model.train_config.convergence_tol,
            "l2_lambda": model.train_config.l2_lambda,
            "use_intercept": model.train_config.use_intercept,
            "seed": model.train_config.seed,
        },
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def load_model(
    path: str | Path, expected_fingerprint: str | None = None
) -> VerificationModel:
    """Load a saved model, rejecting unknown versions and fingerprint drift."""
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot read model file: {exc}") from exc
    try:
        version = payload["format_version"]
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported model format version {version!r}; "
                f"expected {MODEL_FORMAT_VERSION}"
            )
        model = VerificationModel(
            theta=Theta(**payload["theta"]),
            scaler=ScalerParams(**payload["scaler"]),
            train_config=TrainConfig(**payload["train_config"]),
            preprocess_fingerprint=payload["preprocess_fingerprint"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    if expected_fingerprint is not None and (
        model.preprocess_fingerprint != expected_fingerprint
    ):
        raise FingerprintMismatchError(
            "preprocessing mismatch: model was trained under different settings"
        )
    return model
