"""Executable checkers for the interlacing theorems on paraorthogonal zeros.

Zero sets always come from eigenvalues of finite CMV matrices (never from
polynomial root finding), so every comparison shares one tolerance budget.

Theorem ids used in reports:

* ``1.1``: at most one zero in a gap of the support (empirical gaps);
* ``1.2``: ``Φ_n(·; β)`` versus second kind ``Ψ_n(·; −β)`` interlace;
* ``1.3``: ``Φ_n(·; β)`` versus ``Φ_n(·; β′)`` interlace;
* ``1.4``: successive degrees with the decoupled value ``λ_n``;
* ``3.4``: a zero of ``Φ̃_m`` between any two zeros of ``Φ̃_n``, ``m > n``.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from spectral.circle import TAU_MATCH, CirclePoint, CyclicSet, OpenArc, as_point, count_inside, strictly_interlace
from spectral.cmv import build, build_m_tilde, delta, krylov_cyclic, split, truncated
from spectral.codec import encode_complex, encode_matrix, encode_points, encode_word
from spectral.errors import DuplicatePointError, PreconditionError, SharedPointError
from spectral.rankone import RANK_TOL, unitary_eigs
from spectral.szego import VerblunskyWord, WordLike, as_word, evaluate, popuc_first

from .report import TheoremReport
from .trials import (
    AmbiguousInstance,
    Instance,
    TrialConfig,
    TrialOutcome,
    random_circle,
    random_disk,
    run_instances,
    run_trials,
    trial_rng,
)

logger = logging.getLogger(__name__)

# Degree of Φ_N whose zeros estimate the support, and the shrink per side.
GAP_DEGREE = 400
GAP_SHRINK = 0.2
# narrower estimated gaps are indistinguishable from zero spacing
GAP_MIN_SPACINGS = 10
# Common-zero sequences must make λ a zero to this accuracy.
COMMON_ZERO_TOL = 1e-9
# Below 10·TAU_MATCH a near-coincidence cannot be classified.
AMBIGUITY_BAND = 10 * TAU_MATCH
# RNG stream of the instances built with a designed common zero
CONSTRUCTED_STREAM = 14

LambdaRule = Callable[[complex, CirclePoint, CirclePoint], CirclePoint]


def _word_descriptor(word: VerblunskyWord, **extra) -> Dict:
    out = {"word": encode_word(word)}
    for key, val in extra.items():
        if isinstance(val, CirclePoint):
            val = encode_complex(val.value)
        elif isinstance(val, (list, tuple)) and val and isinstance(val[0], CirclePoint):
            val = [encode_complex(v.value) for v in val]
        out[key] = val
    return out


def popuc_zeros(word: WordLike, beta, n: int) -> tuple:
    """Zeros of ``Φ_n(·; β)`` as CMV eigenvalues, with the eigen defect.

    Raises
    ------
    AmbiguousInstance
        If two zeros coincide numerically.
    """
    eig = unitary_eigs(build(as_word(word).prefix(n - 1), beta).dense)
    try:
        return eig.points(), eig.defect
    except DuplicatePointError as exc:
        raise AmbiguousInstance(str(exc)) from exc


# ---------------------------------------------------------------------------
# 1.1: zeros inside a gap
# ---------------------------------------------------------------------------


def estimate_gap(word: WordLike, degree: int = GAP_DEGREE, shrink: float = GAP_SHRINK) -> Optional[OpenArc]:
    """Largest arc free of (projected) zeros of ``Φ_degree``, shrunk per side.

    Zeros of the orthogonal polynomials accumulate on the support of the
    measure, so this approximates a gap from inside. Returns None for the
    zero word and whenever no arc clearly wider than the zero spacing exists.
    """
    word = as_word(word)
    if np.all(word.coefficients == 0):
        return None
    zeros = sla.eigvals(truncated(word, degree))
    zeros = zeros[np.abs(zeros) > 0.5]
    if zeros.size < 2:
        return None
    args = np.sort(np.mod(np.angle(zeros), 2 * np.pi))
    spacing = np.diff(np.append(args, args[0] + 2 * np.pi))
    j = int(np.argmax(spacing))
    if spacing[j] < GAP_MIN_SPACINGS * 2 * np.pi / degree:
        return None
    start, end = args[j], args[j] + spacing[j]
    return OpenArc(CirclePoint.from_angle(start), CirclePoint.from_angle(end)).shrink(shrink)


def check_thm_1_1(
    word: WordLike,
    gap: Optional[OpenArc],
    betas: Sequence,
    ns: Sequence[int],
    instance: Optional[Dict] = None,
) -> TheoremReport:
    """At most one zero of ``Φ_n(·; β)`` in an arc disjoint from the support.

    The caller vouches for *gap*; with ``gap=None`` the check is vacuous.
    """
    word = as_word(word)
    rep = TheoremReport("1.1", trials=1, label="empirical-gap")
    if gap is None:
        rep.notes.append("no admissible gap; vacuous pass")
        rep.tallies["vacuous"] += 1
        return rep
    descriptor = instance or _word_descriptor(word, gap=gap.to_json())
    for beta in betas:
        beta = as_point(beta)
        for n in ns:
            zeros, residual = popuc_zeros(word, beta, n)
            rep.eigen_defect(descriptor, residual)
            inside = count_inside(gap, zeros)
            rep.tallies[f"zeros_in_gap={min(inside, 2)}"] += 1
            if inside >= 2:
                rep.fail(
                    descriptor,
                    beta=encode_complex(beta.value),
                    n=n,
                    count=inside,
                    gap=gap.to_json(),
                    zeros=encode_points(zeros),
                )
    return rep


# ---------------------------------------------------------------------------
# 1.2 and 1.3: interlacing at a fixed degree
# ---------------------------------------------------------------------------


def _interlace_or_fail(rep: TheoremReport, descriptor: Dict, a: CyclicSet, b: CyclicSet) -> None:
    try:
        verdict = strictly_interlace(a, b)
    except SharedPointError as exc:
        rep.fail(descriptor, reason="shared zero", point=encode_complex(exc.point))
        return
    if not verdict:
        rep.fail(
            descriptor,
            reason="not interlaced",
            arc=verdict.witness.to_json(),
            counts=list(verdict.counts),
            first=encode_points(a),
            second=encode_points(b),
        )


def check_thm_1_2(word: WordLike, beta, n: int, instance: Optional[Dict] = None) -> TheoremReport:
    """Zeros of ``Φ_n(·; β)`` and of the second-kind ``Ψ_n(·; −β)`` strictly interlace.

    Also confirms the route the proof takes: ``L M̃`` differs from ``C_n`` by
    rank one and is isospectral with ``C_n(−α, −β)``.
    """
    word = as_word(word).prefix(n - 1)
    beta = as_point(beta)
    rep = TheoremReport("1.2", trials=1)
    descriptor = instance or _word_descriptor(word, beta=beta, n=n)

    first, r1 = popuc_zeros(word, beta, n)
    second, r2 = popuc_zeros(word.negate(), CirclePoint(-beta.value), n)
    rep.eigen_defect(descriptor, max(r1, r2))
    _interlace_or_fail(rep, descriptor, first, second)

    c = build(word, beta).dense
    tilde = build_m_tilde(word, beta).dense
    sv = np.linalg.svd(c - tilde, compute_uv=False)
    sigma2 = float(sv[1]) if sv.size > 1 else 0.0
    rep.slack(sigma2)
    if sigma2 > RANK_TOL:
        rep.fail(descriptor, reason="C − LM̃ is not rank one", second_singular_value=sigma2)
    tilde_spec = unitary_eigs(tilde).values
    mismatch = float(max(np.min(np.abs(second.values - z)) for z in tilde_spec))
    rep.slack(mismatch)
    if mismatch > TAU_MATCH:
        rep.fail(descriptor, reason="LM̃ spectrum differs from the second-kind zeros", mismatch=mismatch)
    return rep


def check_thm_1_3(word: WordLike, n: int, beta, beta_prime, instance: Optional[Dict] = None) -> TheoremReport:
    """Zeros of ``Φ_n(·; β)`` and ``Φ_n(·; β′)`` strictly interlace for ``β ≠ β′``."""
    word = as_word(word).prefix(n - 1)
    beta, beta_prime = as_point(beta), as_point(beta_prime)
    if beta.near(beta_prime):
        raise PreconditionError("suite 1.3 needs distinct boundary coefficients")
    rep = TheoremReport("1.3", trials=1)
    descriptor = instance or _word_descriptor(word, beta=beta, beta_prime=beta_prime, n=n)

    first, r1 = popuc_zeros(word, beta, n)
    second, r2 = popuc_zeros(word, beta_prime, n)
    rep.eigen_defect(descriptor, max(r1, r2))
    _interlace_or_fail(rep, descriptor, first, second)

    # the two matrices differ only in the last row/column, along δ_{n−1}
    if not krylov_cyclic(build(word, beta), delta(n, n - 1)).is_cyclic:
        rep.fail(descriptor, reason="δ_{n−1} is not cyclic")
    return rep


# ---------------------------------------------------------------------------
# 1.4: decoupled value and the common-zero construction
# ---------------------------------------------------------------------------


def check_thm_1_4(
    word: WordLike,
    beta_n,
    beta_next,
    n: int,
    lambda_rule: Optional[LambdaRule] = None,
    instance: Optional[Dict] = None,
) -> TheoremReport:
    """Relate the zeros of ``Φ̃_n`` and ``Φ̃_{n+1}`` through ``λ_n``.

    Case (i), no common zero: ``Z_n ∪ {λ_n}`` strictly interlaces ``Z_{n+1}``.
    Case (ii), one common zero ``z*``: ``λ_n = z*`` and ``Z_n`` strictly
    interlaces ``Z_{n+1} \\ {z*}``. More than one common zero is a failure.

    ``lambda_rule(α_{n−1}, β_n, β_{n+1})`` replaces the value derived from the
    split; it exists so that a wrong formula can be shown to fail.

    Raises
    ------
    AmbiguousInstance
        If two zeros are closer than ``10·TAU_MATCH`` but not within ``TAU_MATCH``.
    """
    word = as_word(word).prefix(n)
    beta_n, beta_next = as_point(beta_n), as_point(beta_next)
    rep = TheoremReport("1.4", trials=1)
    descriptor = instance or _word_descriptor(word, beta_n=beta_n, beta_next=beta_next, n=n)

    c_next = build(word, beta_next)
    parts = split(c_next, beta_n)
    rep.slack(max(parts.reconstruction_error, parts.second_singular_value))
    if parts.reconstruction_error > 1e-10 or parts.second_singular_value > 1e-10:
        rep.fail(
            descriptor,
            reason="split is not a rank-one decoupling",
            reconstruction_error=parts.reconstruction_error,
            second_singular_value=parts.second_singular_value,
            replaced_block=encode_matrix(parts.replaced_block),
        )
    lam = parts.decoupled
    if lambda_rule is not None:
        lam = lambda_rule(word[n - 1], beta_n, beta_next)

    zn, r1 = popuc_zeros(word, beta_n, n)
    zn1, r2 = popuc_zeros(word, beta_next, n + 1)
    rep.eigen_defect(descriptor, max(r1, r2))

    dist = np.abs(zn.values[:, None] - zn1.values[None, :])
    if np.any((dist > TAU_MATCH) & (dist <= AMBIGUITY_BAND)):
        raise AmbiguousInstance("near-common zero of Φ̃_n and Φ̃_{n+1}")
    common = np.argwhere(dist <= TAU_MATCH)
    witness = dict(lambda_n=encode_complex(lam.value), zeros_n=encode_points(zn), zeros_next=encode_points(zn1))

    if len(common) > 1:
        rep.fail(descriptor, reason="more than one common zero", **witness)
        return rep

    if len(common) == 0:
        rep.tallies["case_i"] += 1
        closest = min(zn.nearest(lam)[1], zn1.nearest(lam)[1])
        if closest <= TAU_MATCH:
            rep.fail(descriptor, reason="λ_n is a zero although no zero is common", **witness)
            return rep
        if closest <= AMBIGUITY_BAND:
            raise AmbiguousInstance("λ_n nearly coincides with a zero")
        _interlace_or_fail(rep, descriptor, zn.union([lam]), zn1)
        return rep

    rep.tallies["case_ii"] += 1
    star_pt = zn[int(common[0][0])]
    gap = abs(lam.value - star_pt.value)
    rep.slack(gap)
    if gap > TAU_MATCH:
        rep.fail(descriptor, reason="λ_n is not the common zero", common=encode_complex(star_pt.value), distance=gap, **witness)
        return rep
    _interlace_or_fail(rep, descriptor, zn, zn1.without(star_pt))
    return rep


def corollary_beta_sequence(lam, word: WordLike, count: int) -> List[CirclePoint]:
    """``β_1 … β_count`` making ``λ`` a zero of every ``Φ̃_n``.

    Obtained by solving ``λ_n = λ`` in the split for ``β_{n+1}``::

        β_1 = conj(λ),  β_{n+1} = conj(λ) β_n (conj(β_n) α_{n−1} − 1)/(β_n conj(α_{n−1}) − 1)
    """
    lam = as_point(lam)
    word = as_word(word)
    if count > len(word) + 1:
        raise PreconditionError(f"{count} boundary coefficients need {count - 1} Verblunsky coefficients")
    betas = [lam.conj()] if count >= 1 else []
    for n in range(1, count):
        b = betas[-1].value
        a = word[n - 1]
        nxt = lam.value.conjugate() * b * (b.conjugate() * a - 1.0) / (b * a.conjugate() - 1.0)
        betas.append(CirclePoint(nxt / abs(nxt)))
    return betas


def common_zero_residuals(lam, word: WordLike, betas: Sequence) -> np.ndarray:
    """``|Φ̃_n(λ)|`` for ``n = 1 … len(betas)``."""
    lam = as_point(lam)
    word = as_word(word)
    return np.array([abs(evaluate(popuc_first(word, b, n), lam.value)) for n, b in enumerate(betas, start=1)])


# ---------------------------------------------------------------------------
# 3.4: zeros across degrees
# ---------------------------------------------------------------------------


def check_thm_3_4(word: WordLike, betas: Sequence, n: int, m: int, instance: Optional[Dict] = None) -> TheoremReport:
    """Every arc between cyclically adjacent zeros of ``Φ̃_n`` holds a zero of ``Φ̃_m``."""
    if m <= n:
        raise PreconditionError(f"suite 3.4 needs m > n, got n={n}, m={m}")
    word = as_word(word)
    betas = [as_point(b) for b in betas]
    rep = TheoremReport("3.4", trials=1)
    descriptor = instance or _word_descriptor(word.prefix(m - 1), betas=betas[:m], n=n, m=m)

    zn, r1 = popuc_zeros(word, betas[n - 1], n)
    zm, r2 = popuc_zeros(word, betas[m - 1], m)
    rep.eigen_defect(descriptor, max(r1, r2))
    if n == 1:
        rep.tallies["vacuous"] += 1
        return rep
    for arc in zn.gaps():
        if count_inside(arc, zm) == 0:
            rep.fail(descriptor, reason="empty arc", arc=arc.to_json(), zeros_m=encode_points(zm))

    if logger.isEnabledFor(logging.DEBUG):
        chain = [
            split(build(word.prefix(k), betas[k]), betas[k - 1]).decoupled.value
            for k in range(m - 1, n - 1, -1)
        ]
        logger.debug("3.4 split chain %d→%d decoupled values: %s", m, n, chain)
    return rep


# ---------------------------------------------------------------------------
# Randomized suites
# ---------------------------------------------------------------------------


def verify_thm_1_1(cfg: TrialConfig) -> TheoremReport:
    """Constant (Geronimus) words with empirically estimated gaps."""

    def trial(t: int):
        rng = trial_rng(cfg.seed, t, 11)
        modulus = rng.uniform(min(0.3, cfg.alpha_radius_max), cfg.alpha_radius_max)
        alpha = modulus * np.exp(2j * np.pi * rng.uniform())
        betas = [CirclePoint(b / abs(b)) for b in random_circle(rng, 8)]
        word = VerblunskyWord.constant(alpha, GAP_DEGREE)
        gap = estimate_gap(word)
        ns = list(range(cfg.n_min, cfg.n_max + 1))
        descriptor = {
            "seed": cfg.seed,
            "trial_index": t,
            "alpha": encode_complex(alpha),
            "gap": gap.to_json() if gap is not None else None,
        }
        try:
            rep = check_thm_1_1(word, gap, betas, ns, instance=descriptor)
        except AmbiguousInstance as exc:
            rep = TheoremReport("1.1")
            rep.notes.append(f"trial {t}: {exc}; skipped")
            return TrialOutcome(rep, skipped=True)
        return TrialOutcome(rep)

    return run_trials("1.1", cfg, trial, label="empirical-gap")


def verify_thm_1_2(cfg: TrialConfig) -> TheoremReport:
    return run_trials(
        "1.2",
        cfg,
        run_instances("1.2", cfg, lambda inst: check_thm_1_2(inst.word, inst.beta(inst.n), inst.n, instance=inst.to_dict())),
    )


def verify_thm_1_3(cfg: TrialConfig) -> TheoremReport:
    def check(inst: Instance) -> TheoremReport:
        # β′ is the next boundary coefficient of the instance
        beta, beta_prime = inst.beta(inst.n), inst.beta(inst.n + 1)
        if beta.near(beta_prime, AMBIGUITY_BAND):
            raise AmbiguousInstance("β and β′ nearly coincide")
        return check_thm_1_3(inst.word, inst.n, beta, beta_prime, instance=inst.to_dict())

    return run_trials("1.3", cfg, run_instances("1.3", cfg, check))


def verify_thm_1_4(cfg: TrialConfig, lambda_rule: Optional[LambdaRule] = None) -> TheoremReport:
    """Random instances (generically case (i)) plus one constructed case-(ii)
    instance per ten trials, built with :func:`corollary_beta_sequence`."""

    def random_check(inst: Instance) -> TheoremReport:
        return check_thm_1_4(inst.word, inst.beta(inst.n), inst.beta(inst.n + 1), inst.n, lambda_rule, instance=inst.to_dict())

    def constructed_check(inst: Instance) -> TheoremReport:
        rep = random_check(inst)
        if rep.passed and rep.tallies.get("case_ii", 0) != 1:
            rep.fail(inst.to_dict(), reason="constructed instance did not classify as case (ii)")
        return rep

    report = run_trials("1.4", cfg, run_instances("1.4", cfg, random_check))
    sub = replace(cfg, trials=-(-cfg.trials // 10))
    report.absorb(run_trials("1.4", sub, run_instances("1.4", sub, constructed_check, CONSTRUCTED_STREAM, _constructed_instance)))
    return report


def _constructed_instance(cfg: TrialConfig, rng: np.random.Generator, t: int, draw: int) -> Instance:
    n = int(rng.integers(cfg.n_min, cfg.n_max + 1))
    word = VerblunskyWord(random_disk(rng, cfg.alpha_radius_max, n + 1))
    lam = CirclePoint.from_angle(2 * np.pi * rng.uniform())
    betas = corollary_beta_sequence(lam, word, n + 1)
    return Instance(word, betas, n, n + 1, cfg.seed, t, draw, common=lam)


def verify_thm_3_4(cfg: TrialConfig) -> TheoremReport:
    return run_trials(
        "3.4",
        cfg,
        run_instances("3.4", cfg, lambda inst: check_thm_3_4(inst.word, inst.betas, inst.n, inst.m, instance=inst.to_dict())),
    )


__all__ = [
    "GAP_DEGREE",
    "COMMON_ZERO_TOL",
    "popuc_zeros",
    "estimate_gap",
    "check_thm_1_1",
    "check_thm_1_2",
    "check_thm_1_3",
    "check_thm_1_4",
    "check_thm_3_4",
    "corollary_beta_sequence",
    "common_zero_residuals",
    "verify_thm_1_1",
    "verify_thm_1_2",
    "verify_thm_1_3",
    "verify_thm_1_4",
    "verify_thm_3_4",
]
