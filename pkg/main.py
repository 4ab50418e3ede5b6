"""Command-line entry point.

Subcommands:

* ``zeros``: zeros of a paraorthogonal polynomial (JSON or CSV);
* ``verify``: run a randomized theorem suite and print its JSON report;
* ``common-zero``: boundary coefficients that make a given point a zero of every degree;
* ``schur``: Carathéodory and Schur function samples for plotting.

Exit codes: 0 pass, 1 property violation, 2 usage or input error. Data goes
to stdout (or ``--out``); logging goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from harness import section2, theorems
from harness.report import write_json_report
from harness.trials import TrialConfig
from spectral import codec
from spectral.circle import CirclePoint
from spectral.cmv import build, delta, printed_lambda
from spectral.errors import SpectralError
from spectral.rankone import SchurConvention, caratheodory_F, schur_f, spectral_measure, spiral_grid, unitary_eigs
from spectral.szego import VerblunskyWord, popuc_first

# Load environment variables from .env if present (safe-no-op if file missing)
load_dotenv()

# ---------------------------------------------------------------------------
# Logging setup (controlled by POPUC_LOGLEVEL, default INFO)
# ---------------------------------------------------------------------------

logging.basicConfig(
    level=os.getenv("POPUC_LOGLEVEL", "INFO").upper(),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    datefmt="%H:%M:%S",
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

THEOREMS = ("1.1", "1.2", "1.3", "1.4", "3.4", "2.x") + section2.PROPS

SCHUR_RADIUS = 0.9


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _word(args: argparse.Namespace, length: int) -> VerblunskyWord:
    """Word from ``--alphas FILE`` or ``--alpha-const C`` repeated *length* times."""
    if args.alphas:
        return codec.load_word(args.alphas)
    return VerblunskyWord.constant(codec.parse_complex(args.alpha_const), length)


def _add_word_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--alphas", metavar="FILE", help="JSON array of [re, im] Verblunsky coefficients")
    src.add_argument("--alpha-const", metavar="C", help="constant coefficient [re, im]")


def _degree(args: argparse.Namespace) -> int:
    if args.alphas:
        return len(codec.load_word(args.alphas)) + 1
    if args.n is None:
        raise SpectralError("--alpha-const needs --n")
    if args.n < 1:
        raise SpectralError("--n must be at least 1")
    return args.n


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_zeros(args: argparse.Namespace) -> int:
    n = _degree(args)
    word = _word(args, n - 1)
    beta = CirclePoint(codec.parse_complex(args.beta))
    zeros = unitary_eigs(build(word.prefix(n - 1), beta).dense).points()
    logger.info("Φ_%d has %d zeros on the circle", n, len(zeros))
    if args.format == "csv":
        _emit(codec.to_csv(codec.points_frame(zeros)), args.out)
    else:
        payload = {
            "n": n,
            "beta": codec.encode_complex(beta.value),
            "coefficients": codec.encode_poly(popuc_first(word.prefix(n - 1), beta, n)),
            "zeros": codec.encode_points(zeros),
        }
        _emit(codec.dumps(payload) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = TrialConfig(
        seed=args.seed,
        trials=args.trials,
        n_min=args.n_min,
        n_max=args.n_max,
        alpha_radius_max=args.alpha_radius,
        workers=args.workers,
    )
    rule = printed_lambda if args.lambda_rule == "printed" else None
    if rule is not None and args.theorem != "1.4":
        logger.warning("--lambda-rule only affects theorem 1.4; ignored for %s", args.theorem)

    logger.info("Running theorem %s: %d trials, seed %d", args.theorem, cfg.trials, cfg.seed)
    if args.theorem == "1.1":
        report = theorems.verify_thm_1_1(cfg)
    elif args.theorem == "1.2":
        report = theorems.verify_thm_1_2(cfg)
    elif args.theorem == "1.3":
        report = theorems.verify_thm_1_3(cfg)
    elif args.theorem == "1.4":
        report = theorems.verify_thm_1_4(cfg, lambda_rule=rule)
    elif args.theorem == "3.4":
        report = theorems.verify_thm_3_4(cfg)
    elif args.theorem == "2.x":
        report = section2.check_section_2(section2.PROPS, cfg)
    else:
        report = section2.check_section_2([args.theorem], cfg)

    _emit(write_json_report(report), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_common_zero(args: argparse.Namespace) -> int:
    lam = CirclePoint(codec.parse_complex(args.lam))
    word = _word(args, args.n_max)
    betas = theorems.corollary_beta_sequence(lam, word, args.n_max)
    residuals = theorems.common_zero_residuals(lam, word, betas)
    worst = float(residuals.max()) if residuals.size else 0.0
    payload = {
        "lambda": codec.encode_complex(lam.value),
        "betas": codec.encode_points(betas),
        "residuals": [float(r) for r in residuals],
        "max_residual": worst,
    }
    _emit(codec.dumps(payload) + "\n", args.out)
    if worst > theorems.COMMON_ZERO_TOL:
        logger.error("λ is not a common zero: max residual %.2e", worst)
        return EXIT_VIOLATION
    logger.info("λ is a zero of Φ̃_1 … Φ̃_%d (max residual %.1e)", args.n_max, worst)
    return EXIT_OK


def cmd_schur(args: argparse.Namespace) -> int:
    n = _degree(args)
    word = _word(args, n - 1)
    beta = CirclePoint(codec.parse_complex(args.beta))
    cmv = build(word.prefix(n - 1), beta)
    measure = spectral_measure(cmv.dense, delta(cmv.size, 0))
    grid = spiral_grid(args.grid, SCHUR_RADIUS)
    big_f = np.atleast_1d(caratheodory_F(measure, grid))
    small_f = np.atleast_1d(schur_f(measure, grid, SchurConvention(args.convention)))
    frame = pd.DataFrame(
        {
            "re": grid.real,
            "im": grid.imag,
            "ReF": big_f.real,
            "ImF": big_f.imag,
            "Ref": small_f.real,
            "Imf": small_f.imag,
        },
        columns=["re", "im", "ReF", "ImF", "Ref", "Imf"],
    )
    _emit(codec.to_csv(frame), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="popuc", description="Zeros of paraorthogonal polynomials and CMV matrices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("zeros", help="zeros of Φ̃_n as CMV eigenvalues")
    _add_word_args(p)
    p.add_argument("--n", type=int, help="degree (with --alpha-const)")
    p.add_argument("--beta", default="[1, 0]", help="boundary coefficient [re, im]")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("verify", help="randomized theorem suite")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=int(os.getenv("POPUC_SEED", "0")))
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--alpha-radius", type=float, default=0.95)
    p.add_argument("--workers", type=int, default=int(os.getenv("POPUC_WORKERS", "1")))
    p.add_argument("--lambda-rule", choices=("derived", "printed"), default="derived")
    p.add_argument("--out", help="write the report to FILE instead of stdout")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("common-zero", help="β sequence with a prescribed common zero")
    p.add_argument("--lambda", dest="lam", required=True, help="common zero [re, im] on the circle")
    _add_word_args(p)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_common_zero)

    p = sub.add_parser("schur", help="F and f of (C, δ_0) on a spiral grid, as CSV")
    _add_word_args(p)
    p.add_argument("--n", type=int, help="matrix size (with --alpha-const)")
    p.add_argument("--beta", default="[1, 0]")
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--convention", choices=[c.value for c in SchurConvention], default=SchurConvention.POLE.value)
    p.add_argument("--out")
    p.set_defaults(func=cmd_schur)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpectralError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
