"""Dense matrix primitives and the dimension profile of a product chain.

Matrices are plain 2-D float64 numpy arrays; every public operation
validates its inputs and returns finite values. All functions are pure,
so values can be shared freely between concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Matrix = np.ndarray


def as_matrix(x) -> Matrix:
    """Coerce ``x`` to a 2-D float64 array with positive dims and finite entries."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a, b) -> Matrix:
    """Matrix product ``a @ b``; rejects mismatched shapes."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"shape mismatch for product: {a.shape[0]}x{a.shape[1]} @ {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def gram(x) -> Matrix:
    """Return X^T X, exactly symmetric.

    The raw BLAS product can carry tiny asymmetries; pairing each entry
    with its mirror (their exact mean) makes the result symmetric to the
    last bit, which downstream trace-of-square code relies on.
    """
    x = as_matrix(x)
    g = x.T @ x
    return (g + g.T) * 0.5


def trace(x) -> float:
    """Sum of diagonal entries; rejects non-square input."""
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise ValueError(f"trace requires a square matrix, got {x.shape}")
    return float(np.trace(x))


def frobenius_sq(x) -> float:
    """Sum of squared entries (squared Frobenius norm)."""
    x = as_matrix(x)
    return float((x * x).sum())


@dataclass(frozen=True)
class ChainSpec:
    """Dimension profile of a matrix-product ensemble.

    ``p`` and ``q`` are the output rows/columns; ``inner`` lists the
    intermediate dimensions of the chain, so the number of factors is
    ``r = len(inner) + 1``. An empty ``inner`` describes a single matrix.
    """

    p: int
    q: int
    inner: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(int(d) for d in self.inner))
        for name, value in (("p", self.p), ("q", self.q)):
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if any(d < 1 for d in self.inner):
            raise ValueError(f"inner dimensions must be positive integers, got {self.inner}")

    @property
    def r(self) -> int:
        """Number of factors in the chain."""
        return len(self.inner) + 1

    @property
    def d1(self) -> int:
        """First inner dimension; it also normalizes the last factor."""
        if not self.inner:
            raise ValueError("chain with a single factor has no inner dimension")
        return self.inner[0]

    def validate(self, strict: bool = False) -> "ChainSpec":
        """Structural checks; ``strict`` additionally requires d_i >= max(p, q).

        Chains with three or more factors must close up: the last inner
        dimension has to equal the first. Returns self so calls chain.
        """
        if len(self.inner) >= 2 and self.inner[-1] != self.inner[0]:
            raise ValueError(
                f"last inner dimension {self.inner[-1]} must equal the first {self.inner[0]}"
            )
        if strict:
            floor = max(self.p, self.q)
            if any(d < floor for d in self.inner):
                raise ValueError(
                    f"strict mode requires every inner dimension >= max(p, q) = {floor}, "
                    f"got {self.inner}"
                )
        return self
