"""Discrete information measures and the distortion/bound decomposition.

All quantities use natural logarithms. The distortion bookkeeping tracks
three losses over a shared finite support: the cross-entropy from the
source distribution to the transmitter generator (l1), from the
transmitter generator to the receiver generator (l2), and the end-to-end
cross-entropy from source to receiver (ce), plus the mutual information
carried by the channel (mi). The combined distortion is

    l = l1 + l2 - gamma * mi

and the candidate bound is

    b = ce - gamma * mi.

Their gap decomposes exactly:

    b - l = -(H(p_tx) + delta_residual),
    delta_residual = sum_x (p_tx(x) - p_src(x)) * ln(p_tx(x) / p_rx(x)).

Because entropy is non-negative, the gap is negative whenever the
transmitter generator is non-deterministic and the residual does not
compensate, so ``b`` is not a one-sided bound in general. The trial
explorer therefore reports the empirical sign distribution of the gap
and asserts only the identity above; the gap is exactly zero when the
transmitter generator is deterministic and the residual vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AbsoluteContinuityError


def check_distribution(p, name: str = "p") -> np.ndarray:
    """Validate and return a 1-D probability vector as float64."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array")
    if np.any(arr < 0):
        raise ValueError(f"{name} has negative entries")
    if abs(float(arr.sum()) - 1.0) > 1e-12:
        raise ValueError(f"{name} must sum to 1, got {arr.sum()!r}")
    return arr


def check_joint(j, name: str = "joint") -> np.ndarray:
    """Validate and return a 2-D joint probability matrix as float64."""
    arr = np.asarray(j, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D array")
    if np.any(arr < 0):
        raise ValueError(f"{name} has negative entries")
    if abs(float(arr.sum()) - 1.0) > 1e-12:
        raise ValueError(f"{name} must sum to 1, got {arr.sum()!r}")
    return arr


def entropy(p) -> float:
    """-sum p ln p in nats, with 0 ln 0 taken as 0."""
    arr = check_distribution(p)
    nz = arr[arr > 0]
    return float(-np.sum(nz * np.log(nz)))


def _require_continuity(p: np.ndarray, q: np.ndarray, what: str) -> None:
    if p.shape != q.shape:
        raise ValueError("distributions must share one support")
    if np.any((q == 0) & (p > 0)):
        raise AbsoluteContinuityError(f"{what}: q is 0 where p > 0")


def kl_divergence(p, q) -> float:
    """sum p ln(p/q) in nats; requires q > 0 wherever p > 0."""
    p = check_distribution(p, "p")
    q = check_distribution(q, "q")
    _require_continuity(p, q, "kl_divergence")
    mask = p > 0
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def cross_entropy(p, q) -> float:
    """-sum p ln q in nats, evaluated on the shared indexed support.

    Equals entropy(p) + kl_divergence(p, q). One function covers the
    source-to-transmitter, transmitter-to-receiver, and end-to-end loss
    terms, which differ only in their argument pair.
    """
    p = check_distribution(p, "p")
    q = check_distribution(q, "q")
    _require_continuity(p, q, "cross_entropy")
    mask = p > 0
    return float(-np.sum(p[mask] * np.log(q[mask])))


def mutual_information(joint) -> float:
    """Exact plug-in mutual information of a finite joint, in nats."""
    j = check_joint(joint)
    row = j.sum(axis=1)
    col = j.sum(axis=0)
    outer = np.outer(row, col)
    mask = j > 0
    return float(np.sum(j[mask] * np.log(j[mask] / outer[mask])))


def distortion(l1: float, l2: float, mi: float, gamma: float) -> float:
    """Combined distortion l1 + l2 - gamma * mi (gamma >= 0)."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return l1 + l2 - gamma * mi


def distortion_bound(ce: float, mi: float, gamma: float) -> float:
    """Candidate bound ce - gamma * mi (gamma >= 0)."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return ce - gamma * mi


@dataclass(frozen=True)
class BoundReport:
    """One trial of the gap decomposition.

    Field names double as the CSV column names: l1, l2 and ce are the
    three cross-entropies, mi the channel mutual information, l the
    combined distortion, b the candidate bound, h_lambda the entropy of
    the transmitter generator's distribution, gap = b - l, and
    delta_residual the cross term defined in the module docstring.
    The identity gap + h_lambda + delta_residual = 0 holds exactly.
    """

    trial: int
    l1: float
    l2: float
    mi: float
    l: float
    ce: float
    h_lambda: float
    b: float
    gap: float
    delta_residual: float
    gamma: float


def delta_residual(p_src, p_tx, p_rx) -> float:
    """sum_x (p_tx(x) - p_src(x)) * ln(p_tx(x) / p_rx(x)).

    Terms with p_tx(x) == p_src(x) contribute zero regardless of the log
    factor; elsewhere both p_tx and p_rx must be positive.
    """
    p_src = check_distribution(p_src, "p_src")
    p_tx = check_distribution(p_tx, "p_tx")
    p_rx = check_distribution(p_rx, "p_rx")
    diff = p_tx - p_src
    mask = diff != 0
    if np.any(mask & ((p_tx == 0) | (p_rx == 0))):
        raise AbsoluteContinuityError("delta_residual: zero probability in log")
    return float(np.sum(diff[mask] * np.log(p_tx[mask] / p_rx[mask])))


def bound_report(p_src, p_tx, p_rx, joint, gamma: float, trial: int = 0) -> BoundReport:
    """Evaluate every distortion/bound quantity on one distribution triple."""
    l1 = cross_entropy(p_src, p_tx)
    l2 = cross_entropy(p_tx, p_rx)
    ce = cross_entropy(p_src, p_rx)
    mi = mutual_information(joint)
    l = distortion(l1, l2, mi, gamma)
    b = distortion_bound(ce, mi, gamma)
    return BoundReport(
        trial=trial,
        l1=l1,
        l2=l2,
        mi=mi,
        l=l,
        ce=ce,
        h_lambda=entropy(p_tx),
        b=b,
        gap=b - l,
        delta_residual=delta_residual(p_src, p_tx, p_rx),
        gamma=gamma,
    )


def bound_gap_trials(
    trials: int, support_size: int, gamma: float, seed: int = 0
) -> list[BoundReport]:
    """Sample random distribution triples and report the gap decomposition.

    Each trial draws p_src, p_tx, p_rx from a flat Dirichlet on a common
    support and an independent random joint for the mutual-information
    term. No sign of the gap is asserted; callers summarize it with
    :func:`gap_sign_counts`.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if support_size < 2:
        raise ValueError("support_size must be >= 2")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    rng = np.random.default_rng(seed)
    alpha = np.ones(support_size)
    reports = []
    for t in range(trials):
        p_src = rng.dirichlet(alpha)
        p_tx = rng.dirichlet(alpha)
        p_rx = rng.dirichlet(alpha)
        joint = rng.random((support_size, support_size))
        joint /= joint.sum()
        reports.append(bound_report(p_src, p_tx, p_rx, joint, gamma, trial=t))
    return reports


def gap_sign_counts(reports, tol: float = 1e-9) -> dict[str, int]:
    """Count trials with negative, (near-)zero, and positive gap."""
    neg = sum(1 for r in reports if r.gap < -tol)
    pos = sum(1 for r in reports if r.gap > tol)
    return {"negative": neg, "zero": len(reports) - neg - pos, "positive": pos}
