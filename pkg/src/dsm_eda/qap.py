"""Quadratic assignment instances in QAPLIB format and their objective."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .perm import Permutation


class QaplibFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QapInstance:
    """``f(sigma) = sum_ij B[i, j] * H[sigma(i), sigma(j)]``; B is the first matrix in the file."""

    name: str
    B: np.ndarray
    H: np.ndarray
    best_known: Optional[float] = None
    integral: bool = field(init=False)

    def __post_init__(self):
        b = np.asarray(self.B)
        h = np.asarray(self.H)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape != h.shape:
            raise ValueError(f"B and H must be square and of equal size, got {b.shape} and {h.shape}")
        if b.shape[0] < 2:
            raise ValueError("a QAP instance needs n >= 2")
        integral = bool(np.issubdtype(b.dtype, np.integer) and np.issubdtype(h.dtype, np.integer))
        for arr in (b, h):
            arr.setflags(write=False)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "H", h)
        object.__setattr__(self, "integral", integral)

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def __eq__(self, other):
        if not isinstance(other, QapInstance):
            return NotImplemented
        return (
            self.name == other.name
            and self.best_known == other.best_known
            and np.array_equal(self.B, other.B)
            and np.array_equal(self.H, other.H)
        )


def _number(tok: str):
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def parse_qaplib(text, name: str = "", best_known: Optional[float] = None) -> QapInstance:
    """Parse QAPLIB ``.dat`` content: ``n``, then two ``n x n`` matrices, any whitespace layout."""
    if isinstance(text, bytes):
        text = text.decode()
    tokens = text.split()
    if not tokens:
        raise QaplibFormatError("empty input")
    try:
        n = int(tokens[0])
    except ValueError:
        raise QaplibFormatError(f"token 1: expected the size n, got {tokens[0]!r}") from None
    if n < 2:
        raise QaplibFormatError(f"token 1: size must be >= 2, got {n}")
    expected = 1 + 2 * n * n
    if len(tokens) != expected:
        raise QaplibFormatError(
            f"expected {expected} tokens for n={n}, found {len(tokens)} "
            f"(mismatch at token {min(len(tokens), expected) + 1})"
        )
    values = []
    for pos, tok in enumerate(tokens[1:], start=2):
        try:
            values.append(_number(tok))
        except ValueError:
            raise QaplibFormatError(f"token {pos}: not a number: {tok!r}") from None
    dtype = np.int64 if all(isinstance(v, int) for v in values) else float
    arr = np.array(values, dtype=dtype)
    b = arr[: n * n].reshape(n, n)
    h = arr[n * n :].reshape(n, n)
    return QapInstance(name=name, B=b, H=h, best_known=best_known)


def parse_qaplib_solution(text) -> tuple[int, float, Permutation]:
    """Parse a QAPLIB ``.sln`` file: ``n value`` followed by the ``n`` entries of the permutation."""
    if isinstance(text, bytes):
        text = text.decode()
    tokens = text.replace(",", " ").split()
    if len(tokens) < 2:
        raise QaplibFormatError("solution file needs at least the size and the value")
    n = int(tokens[0])
    if len(tokens) != n + 2:
        raise QaplibFormatError(f"expected {n + 2} tokens for n={n}, found {len(tokens)}")
    return n, _number(tokens[1]), Permutation(tuple(int(t) for t in tokens[2:]))


def format_qaplib(inst: QapInstance) -> str:
    def fmt(x):
        return str(int(x)) if inst.integral else repr(float(x))

    lines = [str(inst.n), ""]
    lines += [" ".join(fmt(x) for x in row) for row in inst.B]
    lines.append("")
    lines += [" ".join(fmt(x) for x in row) for row in inst.H]
    return "\n".join(lines) + "\n"


def best_known_registry() -> dict[str, float]:
    """Best known objective values shipped with the package (``name<TAB>value`` lines)."""
    text = resources.files("dsm_eda").joinpath("data/best_known.tsv").read_text()
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, value = line.split("\t")
        out[name] = float(value)
    return out


def load_instance(path) -> QapInstance:
    path = Path(path)
    name = path.stem
    return parse_qaplib(path.read_text(), name=name, best_known=best_known_registry().get(name))


def evaluate(inst: QapInstance, sigma: Permutation) -> float:
    if sigma.n != inst.n:
        raise ValueError(f"permutation of size {sigma.n} for instance of size {inst.n}")
    s = sigma.zero_based()
    total = (inst.B * inst.H[np.ix_(s, s)]).sum()
    return int(total) if inst.integral else float(total)


def relative_deviation(found: float, best_known: float) -> float:
    if best_known <= 0:
        raise ValueError(f"best_known must be positive, got {best_known}")
    return (found - best_known) / best_known
