"""Adaptive Gauss-Legendre quadrature and segmented cumulative tables.

Two layers live here.

`integrate` is a globally adaptive composite 15-point Gauss-Legendre rule:
panels sit in a worst-first heap, the error of a panel is the difference
between its one-panel value and the sum over its two halves, and panels are
split until the total estimated error drops below the absolute tolerance.
Nodes are interior, so integrable endpoint singularities (u**-0.5 and the
like) are handled by geometric refinement toward the endpoint rather than
by evaluating at it.

`Segmentation` carries a fixed Chebyshev-spaced partition of [0, 1]
(quadratic clustering at both endpoints) together with the Gauss-Legendre
sub-nodes of every segment and the sub-sub-nodes needed to integrate up to
a sub-node exactly.  Cumulative tables built on it give F(x) = int_0^x f
at every partition node and every sub-node with panel-exact accuracy, and
`cum_eval` extends that to arbitrary interior points by re-integrating the
tail of one segment.  All heavy evaluation is vectorized; integrands must
accept numpy arrays.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import DivergentIntegral, NoConvergence

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)
# Reference data on [0, 1]: node positions XI and weights WH (sum to 1).
XI = 0.5 * (_GL_NODES + 1.0)
WH = 0.5 * _GL_WEIGHTS


def gl15(f, a: float, b: float) -> float:
    """One 15-point Gauss-Legendre panel over [a, b]."""
    x = a + (b - a) * XI
    v = np.asarray(f(x), dtype=float)
    return float((b - a) * np.dot(WH, v))


def integrate(f, a: float, b: float, tol: float = 1e-10,
              max_panels: int = 20000) -> float:
    """Adaptive integral of f over [a, b] to absolute tolerance tol.

    f must accept a numpy array of abscissas.  Raises NoConvergence when
    the panel budget runs out and DivergentIntegral when refinement drives
    a non-finite panel below representable width.
    """
    a = float(a)
    b = float(b)
    if b == a:
        return 0.0
    if b < a:
        return -integrate(f, b, a, tol=tol, max_panels=max_panels)

    seq = 0

    def split(lo, hi, q1):
        """Evaluate the two halves of [lo, hi]; heap entry with refined value."""
        nonlocal seq
        mid = 0.5 * (lo + hi)
        ql = gl15(f, lo, mid)
        qr = gl15(f, mid, hi)
        q2 = ql + qr
        if math.isfinite(q1) and math.isfinite(q2):
            err = abs(q1 - q2)
        else:
            err = math.inf
        seq += 1
        return (-err, seq, lo, mid, hi, ql, qr, q2)

    entry = split(a, b, gl15(f, a, b))
    heap = [entry]
    total = entry[7]
    total_err = -entry[0]
    n_panels = 3
    width_floor = 1e-15 * (b - a)
    while total_err > tol:
        if n_panels >= max_panels:
            raise NoConvergence(
                f"integrate: {n_panels} panels, est err {total_err:.3e} > tol {tol:.3e}"
            )
        neg, _s, lo, mid, hi, ql, qr, q2 = heapq.heappop(heap)
        err = -neg
        total -= q2
        total_err -= err
        if hi - lo < width_floor:
            if not math.isfinite(q2):
                raise DivergentIntegral(
                    f"integrate: non-finite panel at [{lo}, {hi}]"
                )
            # Width exhausted; freeze this panel at its refined value.
            total += q2
            heapq.heappush(heap, (0.0, seq, lo, mid, hi, ql, qr, q2))
            seq += 1
            continue
        for (l2, h2, q1c) in ((lo, mid, ql), (mid, hi, qr)):
            child = split(l2, h2, q1c)
            heapq.heappush(heap, child)
            total += child[7]
            total_err += -child[0]
            n_panels += 2
    return float(total)


def chebyshev_nodes(n_segments: int) -> np.ndarray:
    """n_segments + 1 Chebyshev-spaced nodes on [0, 1], endpoints included."""
    i = np.arange(n_segments + 1)
    return 0.5 * (1.0 - np.cos(np.pi * i / n_segments))


def _lagrange_matrix(points: np.ndarray) -> np.ndarray:
    """Rows evaluate the degree-14 interpolant through (XI, values) at `points`."""
    m = np.empty((points.size, XI.size))
    for q in range(XI.size):
        num = np.ones_like(points)
        den = 1.0
        for p in range(XI.size):
            if p == q:
                continue
            num *= points - XI[p]
            den *= XI[q] - XI[p]
        m[:, q] = num / den
    return m


class Segmentation:
    """Shared Chebyshev partition with nested Gauss-Legendre structure.

    nodes:    (n+1,) partition of [0, 1]
    sub:      (n, 15) GL nodes of each segment
    subsub:   (n, 15, 15) GL nodes of [node_k, sub_kj] for every sub-node
    interp:   (225, 15) in-segment degree-14 interpolation matrix mapping
              values at the segment's sub-nodes to values at its sub-sub
              points (used where a further exact nesting level would recurse)
    """

    def __init__(self, n_segments: int = 4096):
        self.n = int(n_segments)
        self.nodes = chebyshev_nodes(self.n)
        self.width = np.diff(self.nodes)
        a = self.nodes[:-1]
        self.sub = a[:, None] + self.width[:, None] * XI[None, :]
        # Panel lengths measured between stored coordinates, not w * XI[j]:
        # near r = 1 the rounded sub coordinate sits up to half an ulp of 1
        # away from the ideal point, which is 1e-16 absolute -- huge against
        # a tail integral of order 1e-9.  Subtraction is exact there.
        self.offs = self.sub - a[:, None]
        self.subsub = a[:, None, None] + self.offs[:, :, None] * XI[None, None, :]
        tt = (XI[:, None] * XI[None, :]).ravel()  # 225 reference positions
        self.interp = _lagrange_matrix(tt)

    def segment_integrals(self, v_sub: np.ndarray) -> np.ndarray:
        """(n,) integrals over each segment from integrand values at sub."""
        return self.width * (v_sub @ WH)

    def build_cumulative(self, v_sub: np.ndarray, v_subsub: np.ndarray):
        """Cumulative integral tables from integrand values.

        Returns (cum_nodes, cum_sub): the running integral from 0 at every
        node and at every sub-node.  Both levels are exact GL15 values, no
        interpolation involved.
        """
        seg = self.segment_integrals(v_sub)
        cum_nodes = np.concatenate(([0.0], np.cumsum(seg)))
        partial = np.einsum("njm,m->nj", v_subsub, WH)
        cum_sub = cum_nodes[:-1, None] + self.offs * partial
        return cum_nodes, cum_sub

    def build_reverse(
        self, v_sub: np.ndarray, v_subsub: np.ndarray, rel_floor: float = 0.0
    ):
        """Tail integral tables: int_x^1 f at nodes and sub-nodes.

        Accumulated from the right end so small tails never come out of a
        catastrophic total-minus-cumulative subtraction.

        seg - within still cancels catastrophically when the integrand
        vanishes to high order at the right end (cos^{d-1} at the Myers
        edge): the true remainder can sit far below the noise of the two
        operands, leaving garbage entries that poison sup searches through
        expressions like psi^{-1/2}.  Entries below the noise level of
        their own accumulation are flushed to an exact 0, which every
        consumer already treats as a degenerate/excluded point.  The base
        noise is summation rounding; callers whose integrand has a steep
        log-slope p near 1 should pass rel_floor ~ p * ulp(1) / width_min,
        the value noise induced by half-ulp coordinate rounding there.
        """
        seg = self.segment_integrals(v_sub)
        tail_nodes = np.concatenate((np.cumsum(seg[::-1])[::-1], [0.0]))
        partial = np.einsum("njm,m->nj", v_subsub, WH)
        within = self.offs * partial
        tail_sub = tail_nodes[1:, None] + (seg[:, None] - within)
        rel = max(64.0 * np.finfo(float).eps, rel_floor)
        floor = rel * np.abs(tail_nodes[:-1, None])
        tail_sub = np.where(np.abs(tail_sub) < floor, 0.0, tail_sub)
        return tail_nodes, tail_sub

    def tail_eval(self, tail_nodes: np.ndarray, f, x) -> np.ndarray:
        """Evaluate int_x^1 f at arbitrary x from a right-tail node table."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = self.locate(x)
        hi = self.nodes[k + 1]
        t = hi - x
        pts = x[:, None] + t[:, None] * XI[None, :]
        vals = np.asarray(f(pts), dtype=float)
        return tail_nodes[k + 1] + t * (vals @ WH)

    def interp_sub(self, v_sub: np.ndarray) -> np.ndarray:
        """Values at sub-sub points interpolated from values at sub-nodes."""
        out = v_sub @ self.interp.T
        return out.reshape(self.n, 15, 15)

    def _interp_pages(self, v_sub: np.ndarray) -> np.ndarray:
        """Interpolated sub-sub pages, clamped to each row's conditioning cap.

        A degree-14 interpolant through a row spanning many orders of
        magnitude (an integrand blowing up toward a segment edge at the
        Myers boundary) oscillates at amplitudes far beyond the row values,
        which would poison the within-segment partial integrals.  A genuine
        quadrature of the row can never see values past ~max|row|, so the
        pages are clipped there; resolved rows sit far inside the cap.
        """
        pages = self.interp_sub(v_sub)
        cap = 2.0 * np.max(np.abs(v_sub), axis=1)[:, None, None]
        return np.clip(pages, -cap, cap)

    def cumulative_from_sub(self, v_sub: np.ndarray):
        """build_cumulative with the sub-sub level filled by interpolation.

        Appropriate when the integrand is only known at sub-nodes (iterated
        test functions); the integrand restricted to one segment is smooth,
        so the degree-14 in-segment interpolant is panel-exact in practice.
        """
        return self.build_cumulative(v_sub, self._interp_pages(v_sub))

    def reverse_from_sub(self, v_sub: np.ndarray, rel_floor: float = 0.0):
        """build_reverse with the sub-sub level filled by interpolation."""
        return self.build_reverse(v_sub, self._interp_pages(v_sub), rel_floor)

    def locate(self, x: np.ndarray) -> np.ndarray:
        k = np.searchsorted(self.nodes, x, side="right") - 1
        return np.clip(k, 0, self.n - 1)

    def cum_eval(self, cum_nodes: np.ndarray, f, x) -> np.ndarray:
        """Evaluate int_0^x f at arbitrary x from a node table plus a local panel.

        f is the integrand callable (vectorized); the partial segment
        [node_k, x] is integrated with a fresh 15-point panel, so off-node
        queries carry full panel accuracy.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = self.locate(x)
        t = x - self.nodes[k]
        pts = self.nodes[k][:, None] + t[:, None] * XI[None, :]
        vals = np.asarray(f(pts), dtype=float)
        return cum_nodes[k] + t * (vals @ WH)


_SEGMENTATIONS: dict[int, Segmentation] = {}


def get_segmentation(n_segments: int = 4096) -> Segmentation:
    seg = _SEGMENTATIONS.get(n_segments)
    if seg is None:
        seg = Segmentation(n_segments)
        _SEGMENTATIONS[n_segments] = seg
    return seg
