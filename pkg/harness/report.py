"""Report module: theorem reports as JSON plus a one-line human summary."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from spectral.codec import dumps
from spectral.rankone import UNITARY_TOL

logger = logging.getLogger(__name__)


@dataclass
class Failure:
    """A failed trial: a re-runnable instance descriptor plus what went wrong."""

    instance: Dict[str, Any]
    witness: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"instance": self.instance, "witness": self.witness}


@dataclass
class TheoremReport:
    theorem: str
    trials: int = 0
    failures: List[Failure] = field(default_factory=list)
    max_slack: float = 0.0
    seed: Optional[int] = None
    config: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    tallies: Counter = field(default_factory=Counter)
    label: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, instance: Dict[str, Any], **witness: Any) -> None:
        self.failures.append(Failure(instance, witness))

    def slack(self, value: float) -> None:
        self.max_slack = max(self.max_slack, float(value))

    def eigen_defect(self, instance: Dict[str, Any], value: float) -> None:
        """Record an eigen-decomposition defect; above ``UNITARY_TOL`` the trial fails."""
        self.slack(value)
        if value > UNITARY_TOL:
            self.fail(instance, reason="eigen-decomposition outside tolerance", defect=float(value))

    def absorb(self, other: "TheoremReport") -> "TheoremReport":
        """Fold a single-instance report into this one (trial count included)."""
        self.trials += other.trials
        self.failures.extend(other.failures)
        self.max_slack = max(self.max_slack, other.max_slack)
        self.notes.extend(other.notes)
        self.tallies.update(other.tallies)
        return self

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "theorem": self.theorem,
            "trials": self.trials,
            "failures": [f.to_dict() for f in self.failures],
            # three significant digits keep the JSON stable across BLAS builds
            "max_slack": float(f"{self.max_slack:.3e}"),
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.tallies:
            out["tallies"] = dict(sorted(self.tallies.items()))
        if self.label:
            out["label"] = self.label
        return out

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (
            f"theorem {self.theorem}: {status}, {self.trials} trials, "
            f"{len(self.failures)} failures, max slack {self.max_slack:.1e}"
        )
        if self.label:
            line += f" [{self.label}]"
        return line


def render(reports: Union[TheoremReport, Iterable[TheoremReport]]) -> str:
    """Canonical JSON for one report or a list of them."""
    if isinstance(reports, TheoremReport):
        return dumps(reports.to_dict()) + "\n"
    return dumps([r.to_dict() for r in reports]) + "\n"


def write_json_report(
    reports: Union[TheoremReport, Iterable[TheoremReport]],
    output_path: Union[str, Path, None] = None,
) -> str:
    """Render the report(s), log the summary lines, and write to *output_path* if given.

    Parameters
    ----------
    reports : TheoremReport or iterable of TheoremReport
        What to write.
    output_path : Union[str, Path, None], optional
        Destination file; when omitted the caller prints the returned text.
    """
    batch = [reports] if isinstance(reports, TheoremReport) else list(reports)
    for rep in batch:
        logger.info(rep.summary())
    text = render(reports if isinstance(reports, TheoremReport) else batch)
    if output_path is not None:
        Path(output_path).write_text(text, encoding="utf-8")
    return text


__all__ = ["Failure", "TheoremReport", "render", "write_json_report"]
