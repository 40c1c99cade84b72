# Copyright (c) 2024, The rankerg developers. All rights reserved.
# See LICENSE.txt for complete terms.

"""
Composite Gauss-Legendre quadrature on short panels.

Each panel is integrated with a fixed-order rule and again as two halves; the
difference is the error estimate. Panels that miss the tolerance are split
and retried. Integrands receive the nodes together with a per-panel
reference point, which lets callers rescale exponentially growing integrands
panel by panel (see cumulative()).
"""

# stdlib
import functools
import logging

# external
import numpy as np
from scipy import special as sp_special

# internal
from rankerg import errors
from rankerg import utils

# Module-level logger
LOG = logging.getLogger(__name__)

ORDER = 20
MAX_PANEL = 0.25
RTOL = 1e-10
ATOL = 1e-12
MAX_DEPTH = 24


@functools.lru_cache(maxsize=8)
def gauss_legendre(order):
    """Return the (nodes, weights) of the `order`-point rule on [-1, 1]."""
    nodes, weights = sp_special.roots_legendre(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_edges(a, b, max_panel=MAX_PANEL, breaks=()):
    """Return sorted panel edges covering [a, b] with widths <= `max_panel`.

    Every point of `breaks` inside [a, b] becomes an edge.
    """
    utils.check_positive("max_panel", max_panel)
    count = max(int(np.ceil((b - a) / max_panel)), 1)
    edges = np.linspace(a, b, count + 1)
    breaks = utils.as_array(breaks) if len(breaks) else np.empty(0)
    breaks = breaks[(breaks > a) & (breaks < b)]
    edges = np.unique(np.concatenate([edges, breaks]))
    return edges


def _rule(fn, lo, hi, ref, order):
    """Apply the Gauss rule on each [lo[i], hi[i]] at once."""
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    taus = mid[:, None] + half[:, None] * nodes[None, :]
    refs = np.broadcast_to(ref[:, None], taus.shape)
    values = np.asarray(fn(taus.ravel(), refs.ravel())).reshape(taus.shape)
    return half * values.dot(weights)


def integrate_panels(fn, edges, order=ORDER, rtol=RTOL, atol=ATOL, refs=None):
    """Integrate `fn` over every panel [edges[k], edges[k+1]].

    Args:
        fn: Callable ``fn(tau, ref)`` evaluated on flat numpy arrays, where
            ``ref`` holds the reference point of the panel each node belongs
            to.
        edges: Increasing panel edges.
        order: Gauss-Legendre order.
        rtol: Relative tolerance per panel.
        atol: Absolute tolerance, shared among panels by width.
        refs: Reference point per panel; defaults to the right edges.

    Returns:
        A (integrals, errors) pair of arrays with one entry per panel.

    Raises:
        errors.QuadratureError: If a panel still misses the tolerance after
            MAX_DEPTH halvings.
    """
    edges = utils.as_array(edges)
    lo, hi = edges[:-1], edges[1:]
    refs = hi.copy() if refs is None else utils.as_array(refs)
    span = max(edges[-1] - edges[0], np.finfo(float).tiny)

    integrals = np.zeros(len(lo))
    error_est = np.zeros(len(lo))

    # Work items: (owner panel, lo, hi, ref).
    owner = np.arange(len(lo))
    pending = (owner, lo, hi, refs)

    for depth in range(MAX_DEPTH + 1):
        owner, p_lo, p_hi, p_ref = pending

        if not len(owner):
            break

        p_mid = 0.5 * (p_lo + p_hi)
        coarse = _rule(fn, p_lo, p_hi, p_ref, order)
        left = _rule(fn, p_lo, p_mid, p_ref, order)
        right = _rule(fn, p_mid, p_hi, p_ref, order)
        fine = left + right
        err = np.abs(fine - coarse)
        tol = np.maximum(atol * (p_hi - p_lo) / span, rtol * np.abs(fine))
        done = err <= tol

        np.add.at(integrals, owner[done], fine[done])
        np.add.at(error_est, owner[done], err[done])

        if np.all(done):
            pending = None
            break

        if depth == MAX_DEPTH:
            bad = np.flatnonzero(~done)[0]
            msg = "Quadrature did not converge on [{0}, {1}] after {2} halvings"
            raise errors.QuadratureError(
                msg.format(p_lo[bad], p_hi[bad], MAX_DEPTH),
                interval=(float(p_lo[bad]), float(p_hi[bad])),
                estimate=float(fine[bad]),
                error=float(err[bad]),
            )

        LOG.debug("Splitting %d panel(s) at depth %d", (~done).sum(), depth + 1)
        keep = ~done
        pending = (
            np.concatenate([owner[keep], owner[keep]]),
            np.concatenate([p_lo[keep], p_mid[keep]]),
            np.concatenate([p_mid[keep], p_hi[keep]]),
            np.concatenate([p_ref[keep], p_ref[keep]]),
        )

    return integrals, error_est


def cumulative(fn, edges, rate=0.0, order=ORDER, rtol=RTOL, atol=ATOL):
    """Scaled running integrals ``S_k = e^{-rate*b_k} * int_{b_0}^{b_k} F``.

    The integrand is supplied already scaled to each panel's right edge:
    ``fn(tau, b) = F(tau) * e^{-rate*b}``. The recurrence
    ``S_k = S_{k-1} e^{-rate (b_k - b_{k-1})} + J_k`` then never forms
    e^{rate*b}, so exponentially growing integrands stay in range.

    Returns:
        A numpy array of S at every edge (S_0 = 0).
    """
    edges = utils.as_array(edges)
    panels, _ = integrate_panels(fn, edges, order=order, rtol=rtol, atol=atol)
    decay = np.exp(-rate * np.diff(edges))
    totals = np.zeros(len(edges))

    for k, (value, factor) in enumerate(zip(panels, decay)):
        totals[k + 1] = totals[k] * factor + value

    return totals


def integrate(fn, a, b, max_panel=MAX_PANEL, order=ORDER, rtol=RTOL, atol=ATOL):
    """Integrate the vectorised callable ``fn(tau)`` over [a, b]."""
    if b == a:
        return 0.0

    edges = panel_edges(a, b, max_panel=max_panel)
    panels, _ = integrate_panels(lambda tau, ref: fn(tau), edges,
                                 order=order, rtol=rtol, atol=atol)
    return float(panels.sum())
