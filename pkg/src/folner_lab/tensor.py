"""Hilbert-Schmidt bound for commutator defects of tensor-product
compressions: the off-corner ratio of A (x) B against P (x) Q is controlled
by the factor ratios weighted with the factor operator norms."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .diagnostics import INF, schatten_norm
from .operators import OperatorSpec, padded_compression


class DimensionCapError(ValueError):
    """Kronecker evaluation would exceed the configured dimension cap."""


@dataclass(frozen=True)
class TensorBoundRecord:
    lhs: float           # ||(1 - P(x)Q)(A(x)B)(P(x)Q)||_2^2 / ||P(x)Q||_2^2
    middle: float        # two-term factorized bound
    rhs: float           # ||B||^2 r_A^2 + ||A||^2 r_B^2
    slack: float         # rhs - lhs
    ratio_a: float       # p=2 off-corner ratio of the left factor
    ratio_b: float
    norm_a: float        # operator norm of the padded left compression
    norm_b: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "lhs": self.lhs,
                "middle": self.middle,
                "rhs": self.rhs,
                "slack": self.slack,
                "ratio_a": self.ratio_a,
                "ratio_b": self.ratio_b,
                "norm_a": self.norm_a,
                "norm_b": self.norm_b,
            },
            sort_keys=True,
        )


def tensor_bound_check(a: OperatorSpec, p, b: OperatorSpec, q,
                       dim_cap: int = 4096) -> TensorBoundRecord:
    """Evaluate both sides of the tensor-product off-corner bound.

    The operator norms entering the right side are taken from the padded
    factor compressions; they lower-bound the true norms, so the reported
    slack can slightly undercut the ideal one (exact for dense factors).
    """
    ma, mask_a = padded_compression(a, p)
    mb, mask_b = padded_compression(b, q)
    if ma.shape[0] * mb.shape[0] > dim_cap:
        raise DimensionCapError(
            f"padded Kronecker dimension {ma.shape[0] * mb.shape[0]} exceeds cap {dim_cap}"
        )

    rank_p = float(p.rank)
    rank_q = float(q.rank)

    big = np.kron(ma, mb)
    mask = np.kron(mask_a, mask_b)
    off_big = big * ((1.0 - mask)[:, None] * mask[None, :])
    lhs = schatten_norm(off_big, 2) ** 2 / (rank_p * rank_q)

    off_a = schatten_norm(ma * ((1.0 - mask_a)[:, None] * mask_a[None, :]), 2)
    off_b = schatten_norm(mb * ((1.0 - mask_b)[:, None] * mask_b[None, :]), 2)
    bq = schatten_norm(mb * mask_b[None, :], 2)
    pap = schatten_norm(ma * (mask_a[:, None] * mask_a[None, :]), 2)
    middle = (off_a**2 / rank_p) * (bq**2 / rank_q) + (pap**2 / rank_p) * (off_b**2 / rank_q)

    norm_a = schatten_norm(ma, INF)
    norm_b = schatten_norm(mb, INF)
    r_a = off_a / math.sqrt(rank_p)
    r_b = off_b / math.sqrt(rank_q)
    rhs = norm_b**2 * r_a**2 + norm_a**2 * r_b**2

    return TensorBoundRecord(
        lhs=float(lhs),
        middle=float(middle),
        rhs=float(rhs),
        slack=float(rhs - lhs),
        ratio_a=float(r_a),
        ratio_b=float(r_b),
        norm_a=float(norm_a),
        norm_b=float(norm_b),
    )
