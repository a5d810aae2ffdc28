"""Mutual information between a continuous feature and class labels."""
from __future__ import annotations

import numpy as np

from ..errors import UsageError


def mutual_information(feature, labels, n_bins: int = 10) -> float:
    """Plug-in MI estimate (nats) after quantile-binning the feature.

    Quantile bins keep heavy-tailed count features from collapsing into a
    single cell; duplicate bin edges are merged, so a constant feature ends
    up in one bin and scores exactly 0.  Empty joint cells contribute 0.
    """
    x = np.asarray(feature, dtype=float)
    y = np.asarray(labels)
    if x.ndim != 1 or x.shape != y.shape:
        raise UsageError("feature and labels must be equal-length vectors")
    if n_bins < 2:
        raise UsageError("n_bins must be >= 2")
    n = len(x)
    if n == 0:
        raise UsageError("empty input")

    quantiles = np.quantile(x, [k / n_bins for k in range(1, n_bins)])
    edges = np.unique(quantiles)
    bins = np.searchsorted(edges, x, side="right")

    _, y_codes = np.unique(y, return_inverse=True)
    n_y = int(y_codes.max()) + 1
    n_b = int(bins.max()) + 1
    joint = np.zeros((n_b, n_y))
    np.add.at(joint, (bins, y_codes), 1.0)
    joint /= n
    p_b = joint.sum(axis=1, keepdims=True)
    p_y = joint.sum(axis=0, keepdims=True)
    mask = joint > 0
    mi = float(np.sum(joint[mask] * np.log(joint[mask] / (p_b @ p_y)[mask])))
    return max(mi, 0.0)
