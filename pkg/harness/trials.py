"""Deterministic random instances and the trial runner.

Every trial draws from its own stream, ``numpy.random.default_rng([seed,
trial_index, stream])``, so a trial can be replayed from its descriptor alone
and trials may run in any order or in parallel. Results are reduced in
trial-index order, which makes the final report independent of scheduling.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Callable, Dict, Iterator, List, Optional

import numpy as np
from tqdm import tqdm

from spectral.circle import CirclePoint
from spectral.cmv import build
from spectral.codec import encode_complex, encode_word
from spectral.errors import SpectralError
from spectral.rankone import unitary_eigs
from spectral.szego import VerblunskyWord

from .report import TheoremReport

logger = logging.getLogger(__name__)

# Minimum distance between zeros of a usable random instance.
MIN_SEPARATION = 1e-6
MAX_DRAWS = 16

# Set POPUC_PROGRESS=1 to show per-theorem progress bars on stderr
SHOW_PROGRESS = os.getenv("POPUC_PROGRESS", "0").lower() in {"1", "true", "yes"}


class AmbiguousInstance(Exception):
    """Floating point cannot classify this instance; draw another one."""


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    trials: int = 100
    n_min: int = 1
    n_max: int = 20
    alpha_radius_max: float = 0.95
    # not part of the report: results do not depend on it
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_min < 1:
            raise SpectralError(f"n_min must be at least 1, got {self.n_min}")
        if self.n_max < self.n_min:
            raise SpectralError(f"n_max {self.n_max} is below n_min {self.n_min}")
        if not 0.0 < self.alpha_radius_max < 1.0:
            raise SpectralError(f"alpha_radius_max must lie in (0, 1), got {self.alpha_radius_max}")
        if self.trials < 0:
            raise SpectralError("trials must be non-negative")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "n_min": self.n_min,
            "n_max": self.n_max,
            "alpha_radius_max": self.alpha_radius_max,
        }


def trial_rng(seed: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed, trial_index, stream])


def random_disk(rng: np.random.Generator, radius: float, size: int) -> np.ndarray:
    """Uniform samples from the disk of the given radius."""
    r = radius * np.sqrt(rng.uniform(size=size))
    return r * np.exp(2j * np.pi * rng.uniform(size=size))


def random_circle(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.exp(2j * np.pi * rng.uniform(size=size))


def random_unit_vector(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, size: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Ginibre matrix."""
    z = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def min_separation(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=complex).reshape(-1)
    if values.size < 2:
        return np.inf
    diff = np.abs(values[:, None] - values[None, :])
    return float(np.min(diff[~np.eye(values.size, dtype=bool)]))


@dataclass(frozen=True)
class Instance:
    """``word = α_0 … α_{K−1}``, ``betas[k − 1] = β_k``, degrees ``n < m``."""

    word: VerblunskyWord
    betas: List[CirclePoint]
    n: int
    m: int
    seed: int
    trial_index: int
    draw: int = 0
    stream: int = 0
    # designed zero shared by Φ̃_n and Φ̃_{n+1}, exempt from the separation filter
    common: Optional[CirclePoint] = None

    def beta(self, k: int) -> CirclePoint:
        return self.betas[k - 1]

    def __iter__(self):
        return iter((self.word, self.betas, self.n))

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "seed": self.seed,
            "trial_index": self.trial_index,
            "draw": self.draw,
            "n": self.n,
            "m": self.m,
            "word": encode_word(self.word),
            "betas": [encode_complex(b.value) for b in self.betas],
            "stream": self.stream,
        }
        if self.common is not None:
            out["common"] = encode_complex(self.common.value)
        return out


Sampler = Callable[[TrialConfig, np.random.Generator, int, int], Instance]


def _draw(cfg: TrialConfig, rng: np.random.Generator, trial_index: int, draw: int) -> Instance:
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    m = int(rng.integers(n + 1, max(n + 1, cfg.n_max) + 1))
    length = cfg.n_max + 1
    word = VerblunskyWord(random_disk(rng, cfg.alpha_radius_max, length))
    betas = [CirclePoint(b / abs(b)) for b in random_circle(rng, length + 1)]
    return Instance(word, betas, n, m, cfg.seed, trial_index, draw)


def _drop_nearest(values: np.ndarray, point: complex) -> np.ndarray:
    return np.delete(values, int(np.argmin(np.abs(values - point))))


def zero_separation(inst: Instance) -> float:
    """Smallest distance among the zeros of ``Φ̃_n`` and ``Φ̃_{n+1}``, within and across.

    ``inst.common`` is removed from both sets before the cross distances are taken.
    """
    zn = unitary_eigs(build(inst.word.prefix(inst.n - 1), inst.beta(inst.n)).dense).values
    zn1 = unitary_eigs(build(inst.word.prefix(inst.n), inst.beta(inst.n + 1)).dense).values
    within = min(min_separation(zn), min_separation(zn1))
    if inst.common is not None:
        zn, zn1 = _drop_nearest(zn, inst.common.value), _drop_nearest(zn1, inst.common.value)
    if zn.size == 0 or zn1.size == 0:
        return within
    cross = float(np.min(np.abs(zn[:, None] - zn1[None, :])))
    return min(within, cross)


def instance_stream(
    cfg: TrialConfig,
    trial_index: int,
    stream: int = 0,
    sampler: Sampler = _draw,
) -> Iterator[Instance]:
    """Well-separated instances for one trial, at most ``MAX_DRAWS`` draws in total."""
    rng = trial_rng(cfg.seed, trial_index, stream)
    for draw in range(MAX_DRAWS):
        inst = replace(sampler(cfg, rng, trial_index, draw), stream=stream)
        if zero_separation(inst) >= MIN_SEPARATION:
            yield inst
        else:
            logger.debug("trial %d stream %d draw %d: zeros too close, redrawing", trial_index, stream, draw)


def random_instance(cfg: TrialConfig, trial_index: int) -> Optional[Instance]:
    """First well-separated instance of the trial, or None once draws run out."""
    return next(instance_stream(cfg, trial_index), None)


@dataclass
class TrialOutcome:
    report: TheoremReport
    skipped: bool = False


def run_instances(
    theorem: str,
    cfg: TrialConfig,
    check: Callable[[Instance], TheoremReport],
    stream: int = 0,
    sampler: Sampler = _draw,
) -> Callable[[int], TrialOutcome]:
    """Wrap *check* into a trial function that redraws on ambiguity."""

    def trial(trial_index: int) -> TrialOutcome:
        redraws = 0
        for inst in instance_stream(cfg, trial_index, stream, sampler):
            try:
                rep = check(inst)
            except AmbiguousInstance as exc:
                redraws += 1
                logger.debug("trial %d draw %d ambiguous (%s), redrawing", trial_index, inst.draw, exc)
                continue
            if redraws:
                rep.tallies["resampled"] += redraws
            return TrialOutcome(rep)
        empty = TheoremReport(theorem)
        empty.notes.append(f"trial {trial_index}: no usable instance in {MAX_DRAWS} draws, skipped")
        empty.tallies["skipped"] += 1
        return TrialOutcome(empty, skipped=True)

    return trial


def run_trials(
    theorem: str,
    cfg: TrialConfig,
    trial: Callable[[int], TrialOutcome],
    *,
    label: Optional[str] = None,
) -> TheoremReport:
    """Run ``cfg.trials`` independent trials and reduce them in index order."""
    report = TheoremReport(theorem, seed=cfg.seed, config=cfg.to_dict(), label=label)
    indices = range(cfg.trials)
    progress = dict(total=cfg.trials, desc=f"theorem {theorem}", unit="trial", disable=not SHOW_PROGRESS)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(tqdm(pool.map(trial, indices), **progress))
    else:
        outcomes = [trial(i) for i in tqdm(indices, **progress)]
    for outcome in outcomes:
        rep = outcome.report
        if outcome.skipped:
            report.notes.extend(rep.notes)
            report.tallies.update(rep.tallies)
            continue
        report.absorb(rep)
    return report


__all__ = [
    "MIN_SEPARATION",
    "MAX_DRAWS",
    "AmbiguousInstance",
    "TrialConfig",
    "Instance",
    "TrialOutcome",
    "trial_rng",
    "random_disk",
    "random_circle",
    "random_unit_vector",
    "haar_unitary",
    "min_separation",
    "zero_separation",
    "Sampler",
    "instance_stream",
    "random_instance",
    "run_instances",
    "run_trials",
]
