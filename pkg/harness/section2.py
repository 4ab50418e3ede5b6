"""Rank-one perturbation checks for general finite unitaries.

Each ``check_*`` function verifies one statement on a single, fully specified
instance and returns a one-trial :class:`TheoremReport`; :func:`check_section_2`
draws random or constructed instances for the selected statements and merges
everything into one report with a tally per statement.

``V = U + (λ − 1)(Uφ)φ*`` throughout.
"""

from __future__ import annotations

import logging
from typing import Callable, Dict, Iterable, Sequence

import numpy as np

from spectral.circle import TAU_MATCH, CirclePoint, OpenArc, as_point, count_inside, cyclic_order, strictly_interlace
from spectral.cmv import krylov_cyclic
from spectral.codec import encode_array, encode_complex, encode_matrix, encode_measure, encode_points
from spectral.errors import DuplicatePointError, PreconditionError, SharedPointError
from spectral.rankone import RankOnePair, perturb, schur_shift_check, spectral_measure, spiral_grid, unitary_eigs

from .report import TheoremReport
from .trials import (
    MAX_DRAWS,
    MIN_SEPARATION,
    AmbiguousInstance,
    TrialConfig,
    TrialOutcome,
    haar_unitary,
    min_separation,
    random_unit_vector,
    run_trials,
    trial_rng,
)

logger = logging.getLogger(__name__)

PROPS = ("2.2", "2.3", "2.4", "2.5", "2.6")

SHIFT_TOL = 1e-8
SHIFT_GRID = 50
SHIFT_RADIUS = 0.9
# largest random unitary drawn by the suite
MAX_SIZE = 12


def _eigs(mat) -> np.ndarray:
    return unitary_eigs(mat).values


def _pair_descriptor(u, phi, lam) -> Dict:
    return {
        "U": encode_matrix(u),
        "phi": encode_array(phi),
        "lambda": encode_complex(as_point(lam).value),
    }


def check_shift(pair: RankOnePair, grid) -> TheoremReport:
    """Schur functions of ``(V, φ)`` and ``(U, φ)`` differ by the factor ``conj(λ)``."""
    rep = TheoremReport("2.2", trials=1)
    deviation = schur_shift_check(pair, grid)
    rep.slack(deviation)
    if deviation > SHIFT_TOL:
        rep.fail(
            _pair_descriptor(pair.base.entries, pair.direction, pair.multiplier),
            deviation=deviation,
            measure=encode_measure(spectral_measure(pair.base, pair.direction)),
        )
    return rep


def check_gap_count(u, phi, lam, arc: OpenArc) -> TheoremReport:
    """At most one eigenvalue of ``V`` in the closed arc when ``U`` has none in the open arc."""
    pair = RankOnePair(u, phi, lam)
    rep = TheoremReport("2.3", trials=1)
    if count_inside(arc, _eigs(pair.base)) != 0:
        raise PreconditionError("U has an eigenvalue inside the arc")
    v_eigs = _eigs(perturb(pair))
    inside = count_inside(arc, v_eigs, closed=True)
    if inside > 1:
        rep.fail(
            _pair_descriptor(pair.base.entries, pair.direction, pair.multiplier),
            arc=arc.to_json(),
            count=inside,
            eigenvalues=encode_array(v_eigs),
        )
    return rep


def check_cyclic_interlace(u, phi, lam) -> TheoremReport:
    """For cyclic ``φ`` and ``λ ≠ 1`` the spectra of ``U`` and ``V`` strictly interlace.

    Raises
    ------
    AmbiguousInstance
        If either spectrum has numerically coincident eigenvalues.
    """
    pair = RankOnePair(u, phi, lam)
    rep = TheoremReport("2.4", trials=1)
    descriptor = _pair_descriptor(pair.base.entries, pair.direction, pair.multiplier)
    if not krylov_cyclic(pair.base.entries, pair.direction).is_cyclic:
        raise PreconditionError("φ is not cyclic for U")
    u_eig = unitary_eigs(pair.base)
    v_eig = unitary_eigs(perturb(pair))
    rep.eigen_defect(descriptor, max(u_eig.defect, v_eig.defect))
    try:
        a, b = u_eig.points(), v_eig.points()
    except DuplicatePointError as exc:
        raise AmbiguousInstance(str(exc)) from exc
    try:
        verdict = strictly_interlace(a, b)
    except SharedPointError as exc:
        rep.fail(descriptor, reason="shared eigenvalue", point=encode_complex(exc.point))
        return rep
    if not verdict:
        rep.fail(descriptor, reason="not interlaced", **verdict.to_json())
    return rep


def check_closed_arcs(u, phi, lam) -> TheoremReport:
    """Between any two adjacent eigenvalues of ``U``, ``V`` has one in the closed arc.

    No cyclicity is assumed; with non-cyclic ``φ`` eigenvalues of ``U`` may
    persist in ``V`` and land on arc endpoints.
    """
    pair = RankOnePair(u, phi, lam)
    rep = TheoremReport("2.5", trials=1)
    try:
        u_pts = cyclic_order(_eigs(pair.base))
    except DuplicatePointError as exc:
        raise AmbiguousInstance(str(exc)) from exc
    v_eigs = _eigs(perturb(pair))
    for arc in u_pts.gaps():
        if count_inside(arc, v_eigs, closed=True) == 0:
            rep.fail(
                _pair_descriptor(pair.base.entries, pair.direction, pair.multiplier),
                arc=arc.to_json(),
                eigenvalues=encode_array(v_eigs),
            )
    return rep


def direct_sum(u1, u2) -> np.ndarray:
    u1, u2 = np.asarray(u1, dtype=complex), np.asarray(u2, dtype=complex)
    out = np.zeros((u1.shape[0] + u2.shape[0],) * 2, dtype=complex)
    out[: u1.shape[0], : u1.shape[0]] = u1
    out[u1.shape[0]:, u1.shape[0]:] = u2
    return out


def check_direct_sum(u1, u2, phi1, phi2, a: complex, b: complex, lam, common: Sequence) -> TheoremReport:
    """Common eigenvalues of ``U_1`` and ``U_2`` persist in ``V``; the rest interlace.

    ``U = U_1 ⊕ U_2`` and ``φ = aφ_1 ⊕ bφ_2`` with ``φ_j`` cyclic for ``U_j``.
    *common* lists the ``ℓ`` eigenvalues shared by the two blocks. After one
    copy of each is removed from the spectrum of ``V``, the remaining
    eigenvalues strictly interlace the distinct eigenvalues of ``U``.
    """
    rep = TheoremReport("2.6", trials=1)
    u = direct_sum(u1, u2)
    phi = np.concatenate([a * np.asarray(phi1, dtype=complex), b * np.asarray(phi2, dtype=complex)])
    pair = RankOnePair(u, phi, lam)
    descriptor = _pair_descriptor(u, pair.direction, pair.multiplier)
    descriptor["common"] = encode_array(common)

    v_eig = unitary_eigs(perturb(pair))
    rep.eigen_defect(descriptor, v_eig.defect)
    remaining = list(v_eig.values)
    for c in common:
        dist = np.abs(np.array(remaining) - complex(c))
        k = int(np.argmin(dist))
        rep.slack(float(dist[k]))
        if dist[k] > TAU_MATCH:
            rep.fail(descriptor, reason="common eigenvalue did not persist", eigenvalue=encode_complex(c))
            return rep
        remaining.pop(k)

    u_vals = _eigs(u)
    distinct = []
    for z in u_vals:
        if all(abs(z - w) > TAU_MATCH for w in distinct):
            distinct.append(z)
    try:
        a_set, b_set = cyclic_order(distinct), cyclic_order(remaining)
    except DuplicatePointError as exc:
        raise AmbiguousInstance(str(exc)) from exc
    try:
        verdict = strictly_interlace(a_set, b_set)
    except SharedPointError as exc:
        rep.fail(descriptor, reason="shared eigenvalue", point=encode_complex(exc.point))
        return rep
    if not verdict:
        rep.fail(descriptor, reason="not interlaced", first=encode_points(a_set), second=encode_points(b_set))
    return rep


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def _size(cfg: TrialConfig, rng: np.random.Generator, low: int = 2) -> int:
    hi = max(low, min(cfg.n_max, MAX_SIZE))
    return int(rng.integers(max(low, min(cfg.n_min, hi)), hi + 1))


def _multiplier(rng: np.random.Generator) -> CirclePoint:
    # stay away from λ = 1, where V = U
    return CirclePoint.from_angle(rng.uniform(0.05, 2 * np.pi - 0.05))


def _separated(values: Iterable[complex]) -> None:
    if min_separation(np.asarray(list(values))) < MIN_SEPARATION:
        raise AmbiguousInstance("eigenvalues too close")


def _draw_shift(cfg, rng):
    size = _size(cfg, rng, low=1)
    pair = RankOnePair(haar_unitary(rng, size), random_unit_vector(rng, size), _multiplier(rng))
    return check_shift(pair, spiral_grid(SHIFT_GRID, SHIFT_RADIUS))


def _draw_gap(cfg, rng):
    size = _size(cfg, rng)
    start = rng.uniform(0, 2 * np.pi)
    length = rng.uniform(0.5, 2.0)
    angles = start + length + rng.uniform(0.01, 0.99, size=size) * (2 * np.pi - length)
    q = haar_unitary(rng, size)
    u = q @ np.diag(np.exp(1j * angles)) @ q.conj().T
    arc = OpenArc(CirclePoint.from_angle(start), CirclePoint.from_angle(start + length))
    return check_gap_count(u, random_unit_vector(rng, size), _multiplier(rng), arc)


def _draw_interlace(cfg, rng):
    size = _size(cfg, rng)
    u = haar_unitary(rng, size)
    phi = random_unit_vector(rng, size)
    lam = _multiplier(rng)
    _separated(_eigs(u))
    if not krylov_cyclic(u, phi).is_cyclic:
        raise AmbiguousInstance("φ is numerically not cyclic")
    v = perturb(RankOnePair(u, phi, lam))
    _separated(np.concatenate([_eigs(u), _eigs(v)]))
    return check_cyclic_interlace(u, phi, lam)


def _draw_closed_arcs(cfg, rng):
    size = _size(cfg, rng)
    angles = rng.uniform(0, 2 * np.pi, size=size)
    _separated(np.exp(1j * angles))
    q = haar_unitary(rng, size)
    u = q @ np.diag(np.exp(1j * angles)) @ q.conj().T
    # φ lives in a proper invariant subspace, so it is not cyclic
    k = int(rng.integers(1, size))
    support = rng.choice(size, size=k, replace=False)
    phi = q[:, support] @ (rng.standard_normal(k) + 1j * rng.standard_normal(k))
    return check_closed_arcs(u, phi / np.linalg.norm(phi), _multiplier(rng))


def _draw_direct_sum(cfg, rng):
    s1, s2 = _size(cfg, rng), _size(cfg, rng)
    ell = int(rng.integers(1, min(s1, s2) + 1))
    angles = rng.uniform(0, 2 * np.pi, size=s1 + s2 - ell)
    _separated(np.exp(1j * angles))
    common = np.exp(1j * angles[:ell])
    own1 = np.exp(1j * angles[ell:s1])
    own2 = np.exp(1j * angles[s1:])
    q1, q2 = haar_unitary(rng, s1), haar_unitary(rng, s2)
    u1 = q1 @ np.diag(np.concatenate([common, own1])) @ q1.conj().T
    u2 = q2 @ np.diag(np.concatenate([common, own2])) @ q2.conj().T
    theta = rng.uniform(0.1, np.pi / 2 - 0.1)
    a = np.cos(theta) * np.exp(2j * np.pi * rng.uniform())
    b = np.sin(theta) * np.exp(2j * np.pi * rng.uniform())
    phi1, phi2 = random_unit_vector(rng, s1), random_unit_vector(rng, s2)
    lam = _multiplier(rng)
    v = perturb(RankOnePair(direct_sum(u1, u2), np.concatenate([a * phi1, b * phi2]), lam))
    v_eigs = _eigs(v)
    # the persisting copies sit exactly on common eigenvalues; everything else must be separated
    rest = [z for z in v_eigs if np.min(np.abs(common - z)) > TAU_MATCH]
    _separated(np.concatenate([np.exp(1j * angles), rest]))
    return check_direct_sum(u1, u2, phi1, phi2, a, b, lam, list(common))


_DRAWS: Dict[str, Callable[[TrialConfig, np.random.Generator], TheoremReport]] = {
    "2.2": _draw_shift,
    "2.3": _draw_gap,
    "2.4": _draw_interlace,
    "2.5": _draw_closed_arcs,
    "2.6": _draw_direct_sum,
}


def _trial_fn(prop: str, cfg: TrialConfig) -> Callable[[int], TrialOutcome]:
    stream = 20 + PROPS.index(prop)

    def trial(trial_index: int) -> TrialOutcome:
        rng = trial_rng(cfg.seed, trial_index, stream)
        for draw in range(MAX_DRAWS):
            try:
                rep = _DRAWS[prop](cfg, rng)
            except AmbiguousInstance as exc:
                logger.debug("%s trial %d draw %d ambiguous (%s)", prop, trial_index, draw, exc)
                continue
            rep.theorem = prop
            rep.tallies[prop] += 1
            for failure in rep.failures:
                failure.instance.update(seed=cfg.seed, trial_index=trial_index, draw=draw, prop=prop)
            if draw:
                rep.tallies["resampled"] += draw
            return TrialOutcome(rep)
        empty = TheoremReport(prop)
        empty.notes.append(f"{prop} trial {trial_index}: no usable instance in {MAX_DRAWS} draws, skipped")
        empty.tallies["skipped"] += 1
        return TrialOutcome(empty, skipped=True)

    return trial


def check_section_2(props: Iterable[str], cfg: TrialConfig) -> TheoremReport:
    """Run ``cfg.trials`` instances of each selected statement and merge the results."""
    selected = sorted(set(props))
    unknown = [p for p in selected if p not in PROPS]
    if unknown or not selected:
        raise PreconditionError(f"unknown section-2 statements {unknown}; choose from {PROPS}")
    name = "2.x" if tuple(selected) == PROPS else "+".join(selected)
    report = TheoremReport(name, seed=cfg.seed, config=cfg.to_dict())
    for prop in selected:
        sub = run_trials(prop, cfg, _trial_fn(prop, cfg))
        logger.info(sub.summary())
        report.absorb(sub)
    return report


__all__ = [
    "PROPS",
    "SHIFT_TOL",
    "check_shift",
    "check_gap_count",
    "check_cyclic_interlace",
    "check_closed_arcs",
    "check_direct_sum",
    "direct_sum",
    "check_section_2",
]
