"""Shapley force values over the tokens of a single classified text.

The cooperative game: players are the text's tokens, the value of a token
subset is the model's probability of fake for the text rebuilt from exactly
those tokens in their original order (removal-based masking). Three
solvers: exact enumeration (n <= 12), kernel-weighted least squares over
sampled coalitions, and Monte-Carlo permutation sampling. Positive force
pushes the prediction toward fake.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from fakenewskit.corpus import normalize_text
from fakenewskit.features import Token, tokenize
from fakenewskit.models.base import LoadedModel, ModelArtifact

EXACT_MAX_TOKENS = 12
DEFAULT_BUDGET = 4096


class ExplainError(Exception):
    pass


class ExactSizeError(ExplainError):
    """Too many tokens for full enumeration; use an estimator."""


class EmptyTextError(ExplainError):
    """Nothing to explain after normalization."""


class CoalitionGame:
    """Token-subset game with memoized, batched model evaluation.

    Subsets are bitmasks over token positions; bit i set means token i is
    retained. value_batch receives the reconstructed texts for all masks
    not seen before and returns their probabilities of fake.
    """

    def __init__(self, tokens: Sequence[Token],
                 value_batch: Callable[[list[str]], np.ndarray]) -> None:
        self.tokens = tuple(tokens)
        self._value_batch = value_batch
        self._memo: dict[int, float] = {}

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def text_for(self, mask: int) -> str:
        return " ".join(tok.surface for i, tok in enumerate(self.tokens)
                        if mask >> i & 1)

    def values(self, masks: Sequence[int]) -> np.ndarray:
        missing = sorted({m for m in masks if m not in self._memo})
        if missing:
            outputs = self._value_batch([self.text_for(m) for m in missing])
            for mask, value in zip(missing, outputs):
                self._memo[mask] = float(value)
        return np.array([self._memo[m] for m in masks], dtype=np.float64)

    def value(self, mask: int) -> float:
        return float(self.values([mask])[0])

    @property
    def evaluations(self) -> int:
        return len(self._memo)


def game_for_artifact(artifact: ModelArtifact, text: str) -> CoalitionGame:
    """Build the token game for one input text against a trained model."""
    normalized = normalize_text(text)
    model = LoadedModel(artifact)
    return CoalitionGame(tokenize(normalized), model.predict_proba_batch)


@dataclass(frozen=True)
class Explanation:
    """Additive attribution: base_value + sum(force) equals p_fake within
    the reporting method's tolerance."""

    base_value: float
    force: tuple[float, ...]
    p_fake: float
    predicted_label: str
    method: str
    samples_used: int
    tokens: tuple[Token, ...]
    standard_errors: tuple[float, ...] | None = None
    regularized: bool = False


def _label(p_fake: float) -> str:
    return "fake" if p_fake >= 0.5 else "real"


def _subset_weights(n: int) -> list[float]:
    # weight of a coalition S (not containing i) in the exact formula:
    # |S|! (n-|S|-1)! / n!
    n_fact = math.factorial(n)
    return [math.factorial(s) * math.factorial(n - s - 1) / n_fact for s in range(n)]


def shapley_exact(game: CoalitionGame) -> Explanation:
    """Full 2^n enumeration with memoized coalition values."""
    n = game.n
    if n > EXACT_MAX_TOKENS:
        raise ExactSizeError(
            f"{n} tokens exceeds the exact-enumeration cap of {EXACT_MAX_TOKENS}; "
            "use shapley_kernel or shapley_permutation")

    all_masks = list(range(1 << n))
    values = game.values(all_masks)
    base = float(values[0])
    total = float(values[game.full_mask])
    if n == 0:
        return Explanation(base_value=base, force=(), p_fake=total,
                           predicted_label=_label(total), method="exact",
                           samples_used=game.evaluations, tokens=game.tokens)

    popcount = np.array([bin(m).count("1") for m in range(1 << n)])
    weights = np.array(_subset_weights(n))
    masks = np.arange(1 << n)
    force = []
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        diffs = values[without | bit] - values[without]
        force.append(float(np.sum(weights[popcount[without]] * diffs)))

    return Explanation(
        base_value=base, force=tuple(force), p_fake=total,
        predicted_label=_label(total), method="exact",
        samples_used=game.evaluations, tokens=game.tokens)


def _kernel_weight(n: int, size: int) -> float:
    return (n - 1) / (math.comb(n, size) * size * (n - size))


def _collect_coalitions(n: int, n_samples: int, rng: np.random.Generator
                        ) -> dict[int, float]:
    """Coalition masks and their regression weights.

    Size groups are enumerated outright (with exact kernel weights) while
    the remaining budget covers them, smallest |z| and its complement first;
    whatever mass is left is spread over coalitions sampled from the
    remaining sizes in proportion to the kernel. With n_samples >= 2^n - 2
    every interior coalition is enumerated, which recovers exact Shapley
    values.
    """
    coalitions: dict[int, float] = {}
    remaining_sizes = list(range(1, n))
    budget = n_samples

    half = (n - 1) // 2 + 1
    for size in range(1, half + 1):
        group = [size] if (size == n - size or n - size < size) else [size, n - size]
        group = [s for s in group if s in remaining_sizes]
        if not group:
            continue
        group_count = sum(math.comb(n, s) for s in group)
        if group_count > budget:
            break
        for s in group:
            weight = _kernel_weight(n, s)
            for combo in combinations(range(n), s):
                mask = 0
                for i in combo:
                    mask |= 1 << i
                coalitions[mask] = weight
            remaining_sizes.remove(s)
        budget -= group_count

    if remaining_sizes and budget > 0:
        size_mass = np.array([(n - 1) / (s * (n - s)) for s in remaining_sizes])
        total_mass = float(size_mass.sum())
        probs = size_mass / total_mass
        per_sample = total_mass / budget
        for _ in range(budget):
            s = remaining_sizes[int(rng.choice(len(remaining_sizes), p=probs))]
            members = rng.choice(n, size=s, replace=False)
            mask = 0
            for i in members:
                mask |= 1 << int(i)
            coalitions[mask] = coalitions.get(mask, 0.0) + per_sample
    return coalitions


def shapley_kernel(game: CoalitionGame, n_samples: int, seed: int = 0) -> Explanation:
    """Weighted least squares over sampled coalitions under the kernel
    weight pi(z) = (n-1) / (C(n,|z|) |z| (n-|z|)), constrained so that the
    attributions plus the base value reproduce the full prediction."""
    n = game.n
    if n < 2:
        raise ExplainError("kernel estimator needs at least 2 tokens")
    if n_samples < 2 * n:
        raise ExplainError(f"n_samples must be at least 2n = {2 * n}")

    rng = np.random.default_rng(seed)
    coalitions = _collect_coalitions(n, n_samples, rng)
    masks = sorted(coalitions)
    weights = np.array([coalitions[m] for m in masks])

    base = game.value(0)
    total = game.value(game.full_mask)
    values = game.values(masks)
    delta = total - base

    # Eliminate the last attribution via the efficiency constraint:
    # regress v(z) - base - z_last*delta on features z_i - z_last.
    Z = np.zeros((len(masks), n))
    for row, mask in enumerate(masks):
        for i in range(n):
            Z[row, i] = mask >> i & 1
    last = Z[:, n - 1]
    targets = values - base - last * delta
    features = Z[:, :n - 1] - last[:, None]

    wf = features * weights[:, None]
    A = wf.T @ features
    b = wf.T @ targets
    regularized = False
    try:
        head = np.linalg.solve(A, b)
        if not np.all(np.isfinite(head)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        regularized = True
        head = np.linalg.solve(A + 1e-10 * np.eye(n - 1), b)
    force = np.append(head, delta - head.sum())

    return Explanation(
        base_value=base, force=tuple(float(f) for f in force), p_fake=total,
        predicted_label=_label(total), method="kernel",
        samples_used=game.evaluations, tokens=game.tokens,
        regularized=regularized)


def shapley_permutation(game: CoalitionGame, n_permutations: int,
                        seed: int = 0) -> Explanation:
    """Average marginal contributions over uniformly sampled token
    orderings; reports a per-token standard error."""
    if n_permutations < 1:
        raise ExplainError("n_permutations must be >= 1")
    n = game.n
    base = game.value(0)
    total = game.value(game.full_mask)
    if n == 0:
        return Explanation(base_value=base, force=(), p_fake=total,
                           predicted_label=_label(total), method="permutation",
                           samples_used=game.evaluations, tokens=game.tokens,
                           standard_errors=())

    rng = np.random.default_rng(seed)
    sums = np.zeros(n)
    sq_sums = np.zeros(n)
    for _ in range(n_permutations):
        order = rng.permutation(n)
        prefix_masks = [0]
        mask = 0
        for i in order:
            mask |= 1 << int(i)
            prefix_masks.append(mask)
        prefix_values = game.values(prefix_masks)
        marginals = np.diff(prefix_values)
        for pos, i in enumerate(order):
            sums[i] += marginals[pos]
            sq_sums[i] += marginals[pos] ** 2

    force = sums / n_permutations
    if n_permutations > 1:
        variance = (sq_sums - n_permutations * force ** 2) / (n_permutations - 1)
        errors = np.sqrt(np.maximum(variance, 0.0) / n_permutations)
    else:
        errors = np.zeros(n)

    return Explanation(
        base_value=base, force=tuple(float(f) for f in force), p_fake=total,
        predicted_label=_label(total), method="permutation",
        samples_used=n_permutations, tokens=game.tokens,
        standard_errors=tuple(float(e) for e in errors))


def explain(artifact: ModelArtifact, text: str, budget: int = DEFAULT_BUDGET,
            seed: int = 0) -> Explanation:
    """Explain one prediction: exact enumeration up to 12 tokens, otherwise
    the kernel estimator with n_samples = min(budget, 4n + 2048)."""
    if not normalize_text(text):
        raise EmptyTextError("text is empty after normalization")
    game = game_for_artifact(artifact, text)
    if game.n <= EXACT_MAX_TOKENS:
        return shapley_exact(game)
    n_samples = max(min(budget, 4 * game.n + 2048), 2 * game.n)
    return shapley_kernel(game, n_samples, seed=seed)


def explanation_payload(explanation: Explanation) -> dict:
    """The wire form served to clients."""
    return {
        "base_value": explanation.base_value,
        "p_fake": explanation.p_fake,
        "label": explanation.predicted_label,
        "method": explanation.method,
        "samples_used": explanation.samples_used,
        "tokens": [
            {"surface": tok.surface, "start": tok.start, "end": tok.end,
             "force": force}
            for tok, force in zip(explanation.tokens, explanation.force)
        ],
    }
