"""JSON/CSV encodings for the spectral types.

Complex numbers are always ``[re, im]`` pairs, on the command line as in
files; strings such as ``"1+2j"`` are never parsed. Bare JSON reals are
accepted as a shorthand for ``[re, 0]``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, List, Union

import numpy as np
import pandas as pd

from .circle import CirclePoint, CyclicSet
from .errors import SpectralError
from .rankone import SpectralMeasure
from .szego import MonicPoly, VerblunskyWord


class DecodeError(SpectralError):
    """Malformed ``[re, im]`` data."""


def encode_complex(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(obj: Any) -> complex:
    if isinstance(obj, bool):
        raise DecodeError(f"not a number: {obj!r}")
    if isinstance(obj, (int, float)):
        return complex(float(obj), 0.0)
    if isinstance(obj, (list, tuple)) and len(obj) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj
    ):
        return complex(float(obj[0]), float(obj[1]))
    raise DecodeError(f"expected [re, im], got {obj!r}")


def parse_complex(text: str) -> complex:
    """Parse a command-line value such as ``[0.5, -0.2]`` or ``1``."""
    try:
        return decode_complex(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DecodeError(f"expected [re, im], got {text!r}") from exc


def encode_array(values: Iterable[complex]) -> List[List[float]]:
    return [encode_complex(z) for z in values]


def encode_points(points: Union[CyclicSet, Iterable[CirclePoint]]) -> List[List[float]]:
    return [encode_complex(p.value) for p in points]


def encode_word(word: VerblunskyWord) -> List[List[float]]:
    return encode_array(word.coefficients)


def decode_word(obj: Any) -> VerblunskyWord:
    if not isinstance(obj, list):
        raise DecodeError("a Verblunsky word is a JSON array of [re, im] pairs")
    return VerblunskyWord(np.array([decode_complex(v) for v in obj], dtype=complex))


def load_word(path: Union[str, Path]) -> VerblunskyWord:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DecodeError(f"cannot read Verblunsky word from {path}: {exc}") from exc
    return decode_word(obj)


def encode_poly(p: MonicPoly) -> List[List[float]]:
    return encode_array(p.coefficients)


def encode_matrix(a: np.ndarray) -> List[List[List[float]]]:
    return [encode_array(row) for row in np.asarray(a)]


def encode_measure(m: SpectralMeasure) -> List[dict]:
    return [{"point": encode_complex(p), "weight": float(w)} for p, w in zip(m.points, m.weights)]


def dumps(obj: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, shortest float repr."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def points_frame(points: Union[CyclicSet, Iterable[CirclePoint]]) -> pd.DataFrame:
    rows = [
        {"index": idx, "re": p.value.real, "im": p.value.imag, "arg": p.arg}
        for idx, p in enumerate(points)
    ]
    return pd.DataFrame(rows, columns=["index", "re", "im", "arg"])


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


__all__ = [
    "DecodeError",
    "encode_complex",
    "decode_complex",
    "parse_complex",
    "encode_array",
    "encode_points",
    "encode_word",
    "decode_word",
    "load_word",
    "encode_poly",
    "encode_matrix",
    "encode_measure",
    "dumps",
    "points_frame",
    "to_csv",
]
