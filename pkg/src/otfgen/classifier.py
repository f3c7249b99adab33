"""Streamed training demo: label daily profiles residential vs commercial.

A one-hidden-layer network (sigmoid activations, squared error) trains on
hour-averaged daily slices of generated batches. The training set is the
first epoch's batches; it is never stored, only its generation parameters
are, and every later epoch regenerates it bit-identically through a
replay generator. Error is accumulated across all of an epoch's batches
and the weights move once per epoch; per-batch updates would converge
faster, but the trainer must consume data strictly through request_data
and never hold more than the batch being sliced.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonDivisibleLength
from .generator import GeneratorConfig, Replay, SyntheticDataGenerator
from .ledger import Ledger, LedgerRecord
from .profiles import Batch

HOURS_PER_DAY = 24


@dataclass(frozen=True)
class DailySlice:
    """One day of consumption, reduced to 24 hourly means, plus its label."""

    features: np.ndarray  # shape (24,)
    label: int            # 1 residential, 0 commercial


def hourly_means(values: np.ndarray, samples_per_day: int) -> np.ndarray:
    """Per-hour means for each whole day in ``values``; shape (days, 24)."""
    if samples_per_day % HOURS_PER_DAY != 0:
        raise NonDivisibleLength(
            f"samples_per_day {samples_per_day} must divide into {HOURS_PER_DAY} hours"
        )
    if len(values) % samples_per_day != 0:
        raise NonDivisibleLength(
            f"profile length {len(values)} is not a multiple of samples_per_day {samples_per_day}"
        )
    days = len(values) // samples_per_day
    return values.reshape(days, HOURS_PER_DAY, samples_per_day // HOURS_PER_DAY).mean(axis=2)


def slice_batch(batch: Batch, samples_per_day: int) -> list[DailySlice]:
    """One DailySlice per day per profile, labels inherited from the seeds."""
    slices: list[DailySlice] = []
    for profile in batch.profiles:
        for day in hourly_means(profile.values, samples_per_day):
            slices.append(DailySlice(features=day, label=int(profile.label)))
    return slices


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class Classifier:
    """Feed-forward net: 24 inputs -> H sigmoid units -> 1 sigmoid output."""

    def __init__(self, w_hidden: np.ndarray, b_hidden: np.ndarray,
                 w_out: np.ndarray, b_out: float):
        self.w_hidden = w_hidden  # (H, 24)
        self.b_hidden = b_hidden  # (H,)
        self.w_out = w_out        # (H,)
        self.b_out = b_out

    @classmethod
    def initialize(cls, hidden: int = 16, init_seed: int = 7,
                   n_features: int = HOURS_PER_DAY) -> "Classifier":
        rng = np.random.default_rng(init_seed)
        scale = 1.0 / np.sqrt(n_features)
        return cls(
            w_hidden=rng.normal(0.0, scale, size=(hidden, n_features)),
            b_hidden=np.zeros(hidden),
            w_out=rng.normal(0.0, scale, size=hidden),
            b_out=0.0,
        )

    def copy(self) -> "Classifier":
        return Classifier(self.w_hidden.copy(), self.b_hidden.copy(),
                          self.w_out.copy(), self.b_out)

    def forward(self, features: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Outputs in (0,1) for a (n, 24) feature matrix; also returns hidden activations."""
        hidden = _sigmoid(features @ self.w_hidden.T + self.b_hidden)
        out = _sigmoid(hidden @ self.w_out + self.b_out)
        return out, hidden

    def predict(self, features: np.ndarray) -> np.ndarray:
        out, _ = self.forward(features)
        return out

    def grad_accumulate(self, features: np.ndarray, labels: np.ndarray,
                        grads: dict[str, np.ndarray]) -> float:
        """Add the gradients of summed squared error to ``grads``.

        Returns the summed squared error for the chunk so the caller can
        track epoch loss alongside the accumulated gradient.
        """
        out, hidden = self.forward(features)
        err = out - labels
        sse = float(np.dot(err, err))

        # d(sum err^2)/d(pre-activation of the output unit)
        d_out = 2.0 * err * out * (1.0 - out)
        grads["w_out"] += d_out @ hidden
        grads["b_out"] += d_out.sum()
        d_hidden = np.outer(d_out, self.w_out) * hidden * (1.0 - hidden)
        grads["w_hidden"] += d_hidden.T @ features
        grads["b_hidden"] += d_hidden.sum(axis=0)
        return sse

    def apply_update(self, grads: dict[str, np.ndarray], lr: float) -> None:
        """One gradient step on the accumulated (summed) squared error."""
        self.w_hidden -= lr * grads["w_hidden"]
        self.b_hidden -= lr * grads["b_hidden"]
        self.w_out -= lr * grads["w_out"]
        self.b_out -= lr * float(grads["b_out"])


def zero_grads(hidden: int, n_features: int = HOURS_PER_DAY) -> dict[str, np.ndarray]:
    return {
        "w_hidden": np.zeros((hidden, n_features)),
        "b_hidden": np.zeros(hidden),
        "w_out": np.zeros(hidden),
        "b_out": np.zeros(()),
    }


@dataclass
class TrainResult:
    classifier: Classifier
    epoch_losses: list[float]  # mean squared error per epoch, pre-update


def _params_ledger(generator: SyntheticDataGenerator,
                   batch_params: list[list]) -> Ledger:
    ledger = Ledger(generator.config.rng_seed, generator.config.batch_size,
                    generator.store.manifest_digest)
    for batch_index, params in enumerate(batch_params):
        ledger.append(LedgerRecord(batch_index, i, p) for i, p in enumerate(params))
    return ledger


def train(
    generator: SyntheticDataGenerator,
    epochs: int,
    batches_per_epoch: int,
    samples_per_day: int,
    hidden: int = 16,
    learning_rate: float = 0.05,
    init_seed: int = 7,
    classifier: Classifier | None = None,
) -> TrainResult:
    """Train on a fixed set of batches, regenerated on the fly every epoch.

    The first epoch consumes ``batches_per_epoch`` fresh batches from the
    caller's generator and keeps only their generation parameters; every
    later epoch replays them bit-identically through a replay generator,
    so the training set is stable across epochs without ever being
    stored. One accumulated gradient update per epoch.
    """
    net = classifier if classifier is not None else Classifier.initialize(hidden, init_seed)
    losses: list[float] = []
    train_ledger: Ledger | None = None
    for epoch in range(epochs):
        if epoch == 0:
            source = generator
            recorded: list[list] = []
        else:
            source = SyntheticDataGenerator(
                generator.store,
                GeneratorConfig(
                    batch_size=generator.config.batch_size,
                    rng_seed=generator.config.rng_seed,
                    param_policy=Replay(train_ledger),
                ),
            )
        grads = zero_grads(len(net.b_hidden))
        sum_error = 0.0
        count = 0
        for _ in range(batches_per_epoch):
            batch = source.request_data()
            slices = slice_batch(batch, samples_per_day)
            if epoch == 0:
                recorded.append([p.params for p in batch.profiles])
            del batch  # only the slices (24 floats per day) survive
            features = np.stack([s.features for s in slices])
            labels = np.array([s.label for s in slices], dtype=np.float64)
            sum_error += net.grad_accumulate(features, labels, grads)
            count += len(slices)
        if epoch == 0:
            train_ledger = _params_ledger(generator, recorded)
        losses.append(sum_error / count)
        net.apply_update(grads, learning_rate)
    return TrainResult(classifier=net, epoch_losses=losses)


def evaluate(
    classifier: Classifier,
    generator: SyntheticDataGenerator,
    num_batches: int,
    samples_per_day: int,
) -> float:
    """Accuracy over freshly generated batches; prediction is output > 0.5."""
    correct = 0
    total = 0
    for _ in range(num_batches):
        batch = generator.request_data()
        slices = slice_batch(batch, samples_per_day)
        del batch
        features = np.stack([s.features for s in slices])
        labels = np.array([s.label for s in slices])
        predictions = (classifier.predict(features) > 0.5).astype(int)
        correct += int((predictions == labels).sum())
        total += len(slices)
    return correct / total
