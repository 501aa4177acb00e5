"""Weighted minwise hashing.

Vectors are sparse and non-negative. Three sketching schemes share one API:

>>> import wmh
>>> x = wmh.SparseVector([(0, 1.5), (3, 2.0)], dim=5)
>>> y = wmh.SparseVector([(0, 1.0), (1, 0.5), (3, 1.0)], dim=5)
>>> layout = wmh.Layout.from_vectors([x, y])
>>> a = wmh.sketch(x, k=256, seed=7, layout=layout)
>>> b = wmh.sketch(y, k=256, seed=7, layout=layout)
>>> round(wmh.exact_jaccard(x, y), 3)
0.5
>>> abs(wmh.estimate(a, b)["j_hat"] - 0.5) < 0.2
True
"""

from ._core import (
    DataError,
    DomainError,
    Error,
    FormatError,
    IncompatibleError,
    IoError,
    IterationCapError,
    Layout,
    MismatchError,
    ParseError,
    ResourceError,
    Sketch,
    SparseVector,
    UsageError,
    effective_sparsity,
    estimate,
    exact_jaccard,
    format_sparse_line,
    hash_one,
    l1_norm,
    load_sketches,
    max_iterations,
    optimize_alpha,
    parse_sparse_line,
    save_sketches,
    sketch,
)

SCHEMES = ("redgreen", "ioffe", "reduction")

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
