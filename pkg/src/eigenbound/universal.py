"""Sup-of-integral functionals bracketing the reduced principal eigenvalue.

The coefficient profile (C, phi, psi) of a geometry determines five
functionals whose reciprocals pin the principal eigenvalue lam of the
reduced problem on (0, 1) from both sides:

    1/(4 delta) <= max(1/delta1, 1/delta1_star)
                <= lam
                <= min(1/delta1_prime, 1/delta1_star_prime)
                <= 1/delta

The same weighted double integral that generates these functionals also
generates monotone approximating sequences (iterate_lower, iterate_upper)
converging to lam from both sides, and variational_ratio turns any
positive test function into a certified lower bound for lam.

Everything here works on the shared Chebyshev/Gauss-Legendre lattice of
the profile: sups and infs are taken over the ~65k interior lattice points
where the cumulative tables are exact, then polished by a local golden
search with off-lattice panel evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EigenboundError, InvalidTestFunction
from .geometry import Alpha, CoefficientProfile, CurvatureSign
from .searches import golden_max, sup_on_unit_interval

DELTA_NAMES = (
    "delta",
    "delta1",
    "delta1_prime",
    "delta1_star",
    "delta1_star_prime",
)

MAX_ITERATIONS = 10


# -- lattice plumbing ---------------------------------------------------------


def _scrub(p: CoefficientProfile, vals: np.ndarray) -> np.ndarray:
    """Zero float-collapse artifacts in products of paired over/underflow.

    On the positive branch near |alpha| = pi/2 the coefficient C underflows
    in the same region where phi (and powers of it) overflow, so products
    like C * phi^{3/2} come out nan or inf although their true size there
    is below 1e-150 relative to the rest of the table.  The collapse zone
    is confined to 1 - u < ~1e-3 and every bracketing functional decays
    like (1 - u)^2 of its own sup inside it, so zeroing cannot move a sup
    or an inf.  On the other branches a non-finite product is a bug and is
    raised as such.
    """
    bad = ~np.isfinite(vals)
    if not bad.any():
        return vals
    if p.alpha.sign is not CurvatureSign.POSITIVE_K:
        raise EigenboundError(
            "non-finite integrand table on a branch where the coefficient "
            "cannot underflow; this indicates a bug in the profile"
        )
    out = vals.copy()
    out[bad] = 0.0
    return out


def _lattice(p: CoefficientProfile):
    """Interior evaluation lattice: all interior nodes plus all sub-nodes."""
    lat = p._cache.get("lattice")
    if lat is None:
        seg = p.seg
        xs = np.concatenate((seg.nodes[1:-1], seg.sub.ravel()))
        phi_l = np.concatenate((p.phi_nodes[1:-1], p.phi_sub.ravel()))
        psi_l = np.concatenate((p.psi_nodes[1:-1], p.psi_sub.ravel()))
        lat = (xs, phi_l, psi_l)
        p._cache["lattice"] = lat
    return lat


def _flat(table) -> np.ndarray:
    """Lattice-aligned view of a cumulative or tail table pair."""
    nodes, sub = table
    return np.concatenate((nodes[1:-1], sub.ravel()))


def _tables(p: CoefficientProfile):
    """The six cumulative/tail tables behind the five functionals.

    Forward tables accumulate from 0, tail tables from 1, so neither side
    ever comes out of a catastrophic subtraction.  Cached per profile.
    """
    tabs = p._cache.get("delta_tables")
    if tabs is not None:
        return tabs
    seg = p.seg
    with np.errstate(all="ignore"):
        sqphi = np.sqrt(p.phi_sub)
        sqpsi = np.sqrt(p.psi_sub)
        rows = {
            "A1": (p.c_sub * p.phi_sub * sqphi, True),
            "A2": (p.c_sub * sqphi, False),
            "A3": (p.c_sub * p.phi_sub * p.phi_sub, True),
            "B1": (p.cinv_sub * p.psi_sub * sqpsi, False),
            "B2": (p.cinv_sub * sqpsi, True),
            "B3": (p.cinv_sub * p.psi_sub * p.psi_sub, False),
        }
    pages = None
    if p.alpha.at_half_pi and p.d >= 4:
        # At the Myers edge the forward integrands C phi^{3/2}, C phi^2 and
        # C^{-1} psi^{1/2} blow up toward r = 1 hard enough to span dozens
        # of orders of magnitude inside the final graded segments, which no
        # in-segment polynomial interpolant can represent.  Build the pages
        # from direct evaluations instead; the panel quadratures then see
        # genuine (positive, monotone) values and stay bounded and sane.
        with np.errstate(all="ignore"):
            phi_ss = p.phi_at(seg.subsub)
            psi_ss = p.psi_at(seg.subsub)
            c_ss = p.coeff(seg.subsub)
            ci_ss = p.coeff_inv(seg.subsub)
            sqphi_ss = np.sqrt(phi_ss)
            sqpsi_ss = np.sqrt(psi_ss)
            pages = {
                "A1": c_ss * phi_ss * sqphi_ss,
                "A2": c_ss * sqphi_ss,
                "A3": c_ss * phi_ss * phi_ss,
                "B1": ci_ss * psi_ss * sqpsi_ss,
                "B2": ci_ss * sqpsi_ss,
                "B3": ci_ss * psi_ss * psi_ss,
            }
    tabs = {}
    for name, (vals, forward) in rows.items():
        vals = _scrub(p, vals)
        if pages is None:
            tabs[name] = (
                seg.cumulative_from_sub(vals)
                if forward
                else seg.reverse_from_sub(vals, p.tail_floor)
            )
        else:
            page = _scrub(p, pages[name])
            tabs[name] = (
                seg.build_cumulative(vals, page)
                if forward
                else seg.build_reverse(vals, page, p.tail_floor)
            )
    p._cache["delta_tables"] = tabs
    return tabs


def _guard_vals(p: CoefficientProfile, vals: np.ndarray) -> np.ndarray:
    """Functional values on the lattice with collapse-zone artifacts zeroed.

    Same justification as _scrub: only the positive branch can produce
    them, and only where the true functional value is O((1-r)^2) of its
    sup, far below any attained maximum.
    """
    bad = ~np.isfinite(vals)
    if not bad.any():
        return vals
    if p.alpha.sign is not CurvatureSign.POSITIVE_K:
        raise EigenboundError("non-finite functional values off the positive branch")
    return np.where(bad, 0.0, vals)


# -- the five functionals -----------------------------------------------------


def _lattice_vals(p: CoefficientProfile, name: str) -> np.ndarray:
    xs, phi_l, psi_l = _lattice(p)
    tabs = _tables(p)
    with np.errstate(all="ignore"):
        if name == "delta":
            vals = phi_l * psi_l
        elif name == "delta1":
            s = np.sqrt(phi_l)
            vals = _flat(tabs["A1"]) / s + s * _flat(tabs["A2"])
        elif name == "delta1_prime":
            vals = _flat(tabs["A3"]) / phi_l + phi_l * psi_l
        elif name == "delta1_star":
            s = np.sqrt(psi_l)
            vals = _flat(tabs["B1"]) / s + s * _flat(tabs["B2"])
        elif name == "delta1_star_prime":
            vals = _flat(tabs["B3"]) / psi_l + phi_l * psi_l
        else:
            raise DomainError(f"unknown functional {name!r}")
    return _guard_vals(p, vals)


def _pointwise(p: CoefficientProfile, name: str):
    """Scalar off-lattice evaluator for one functional (polish path).

    Partial-segment panels re-integrate the integrand, so an off-node r
    carries the same accuracy as the tables themselves.
    """
    seg = p.seg
    tabs = _tables(p)

    def cum(table, integrand, r):
        return float(seg.cum_eval(table[0], integrand, r)[0])

    def tail(table, integrand, r):
        return float(seg.tail_eval(table[0], integrand, r)[0])

    def a1(y):
        ph = p.phi_at(y)
        return p.coeff(y) * ph * np.sqrt(ph)

    def a2(y):
        return p.coeff(y) * np.sqrt(p.phi_at(y))

    def a3(y):
        ph = p.phi_at(y)
        return p.coeff(y) * ph * ph

    def b1(y):
        ps = p.psi_at(y)
        return p.coeff_inv(y) * ps * np.sqrt(ps)

    def b2(y):
        return p.coeff_inv(y) * np.sqrt(p.psi_at(y))

    def b3(y):
        ps = p.psi_at(y)
        return p.coeff_inv(y) * ps * ps

    if name == "delta":
        return lambda r: float(p.phi_psi_at(r))
    if name == "delta1":

        def f(r):
            s = math.sqrt(float(p.phi_at(r)))
            return cum(tabs["A1"], a1, r) / s + s * tail(tabs["A2"], a2, r)

        return f
    if name == "delta1_prime":

        def f(r):
            ph = float(p.phi_at(r))
            return cum(tabs["A3"], a3, r) / ph + float(p.phi_psi_at(r))

        return f
    if name == "delta1_star":

        def f(r):
            s = math.sqrt(float(p.psi_at(r)))
            return tail(tabs["B1"], b1, r) / s + s * cum(tabs["B2"], b2, r)

        return f
    if name == "delta1_star_prime":

        def f(r):
            ps = float(p.psi_at(r))
            return tail(tabs["B3"], b3, r) / ps + float(p.phi_psi_at(r))

        return f
    raise DomainError(f"unknown functional {name!r}")


def _polish_max(p: CoefficientProfile, xs, vals, pointwise):
    """Golden polish around the lattice argmax; never worse than the grid."""
    k = int(np.argmax(vals))
    x0 = float(xs[k])
    v0 = float(vals[k])
    if not math.isfinite(v0):
        return x0, v0
    w = float(p.seg.width[int(p.seg.locate(np.array([x0]))[0])])
    a = max(x0 - w, 1e-12)
    b = min(x0 + w, 1.0 - 1e-12)

    def safe(r):
        with np.errstate(all="ignore"):
            try:
                v = float(pointwise(r))
            except (ValueError, OverflowError, ZeroDivisionError):
                return -math.inf
        return v if math.isfinite(v) else -math.inf

    x1, v1 = golden_max(safe, a, b, tol=1e-12)
    if v1 > v0:
        return float(x1), float(v1)
    return x0, v0


def functional_sup(
    p: CoefficientProfile, name: str, resolution: int | None = None
) -> tuple[float, float]:
    """(argsup, sup) of one bracketing functional over r in (0, 1).

    With the default resolution the sup is taken over the full profile
    lattice (exact table values, no interpolation) and polished locally.
    An explicit resolution scans a uniform grid of that many points with
    the off-lattice evaluator instead; this is slower and only useful to
    study grid sensitivity.
    """
    if name not in DELTA_NAMES:
        raise DomainError(f"unknown functional {name!r}; expected one of {DELTA_NAMES}")
    if resolution is not None:
        pointwise = _pointwise(p, name)

        def vec(r):
            with np.errstate(all="ignore"):
                return pointwise(float(r))

        return sup_on_unit_interval(vec, resolution=resolution)
    key = ("delta_sup", name)
    got = p._cache.get(key)
    if got is None:
        xs, _, _ = _lattice(p)
        vals = _lattice_vals(p, name)
        got = _polish_max(p, xs, vals, _pointwise(p, name))
        p._cache[key] = got
    return got


def delta(p: CoefficientProfile, resolution: int | None = None) -> float:
    """sup of phi * psi; 1/delta and 1/(4 delta) are the crude bracket."""
    return functional_sup(p, "delta", resolution)[1]


def delta1(p: CoefficientProfile, resolution: int | None = None) -> float:
    """sup of (1/sqrt(phi)) int_0^r C phi^{3/2} + sqrt(phi) int_r^1 C phi^{1/2}."""
    return functional_sup(p, "delta1", resolution)[1]


def delta1_prime(p: CoefficientProfile, resolution: int | None = None) -> float:
    """sup of (1/phi) int_0^r C phi^2 + phi psi."""
    return functional_sup(p, "delta1_prime", resolution)[1]


def delta1_star(p: CoefficientProfile, resolution: int | None = None) -> float:
    """Dual of delta1: psi and 1/C take the roles of phi and C."""
    return functional_sup(p, "delta1_star", resolution)[1]


def delta1_star_prime(p: CoefficientProfile, resolution: int | None = None) -> float:
    """Dual of delta1_prime."""
    return functional_sup(p, "delta1_star_prime", resolution)[1]


# -- the bracket --------------------------------------------------------------


def _recip(x: float) -> float:
    return 0.0 if math.isinf(x) else 1.0 / x


@dataclass(frozen=True)
class BoundBracket:
    """The five functional values and the eigenvalue bracket they imply.

    All values live on the reduced scale (unit interval); multiply the
    bounds by 4/D^2 to reach the manifold eigenvalue scale.
    """

    d: int
    alpha: Alpha
    delta: float
    delta1: float
    delta1_prime: float
    delta1_star: float
    delta1_star_prime: float

    @property
    def lower(self) -> float:
        """Certified lower bound max(1/delta1, 1/delta1_star).

        If one functional overflowed to +inf its reciprocal contributes 0
        and the other carries the bound alone.
        """
        return max(_recip(self.delta1), _recip(self.delta1_star))

    @property
    def upper(self) -> float:
        """Certified upper bound min(1/delta1_prime, 1/delta1_star_prime)."""
        return min(_recip(self.delta1_prime), _recip(self.delta1_star_prime))

    @property
    def crude_lower(self) -> float:
        return 0.25 * _recip(self.delta)

    @property
    def crude_upper(self) -> float:
        return _recip(self.delta)

    def chain(self) -> tuple[float, float, float, float]:
        return (self.crude_lower, self.lower, self.upper, self.crude_upper)

    def chain_ok(self, slack: float = 1e-9) -> bool:
        a, b, c, d = self.chain()
        return a <= b + slack and b <= c + slack and c <= d + slack


def universal_bracket(
    d: int, alpha: Alpha, *, profile: CoefficientProfile | None = None
) -> BoundBracket:
    """Assemble all five functionals into the two-sided bracket."""
    if profile is None:
        profile = CoefficientProfile(d, alpha)
    elif profile.d != d or profile.alpha != alpha:
        raise DomainError("profile does not match the requested (d, alpha)")
    return BoundBracket(
        d=d,
        alpha=alpha,
        delta=delta(profile),
        delta1=delta1(profile),
        delta1_prime=delta1_prime(profile),
        delta1_star=delta1_star(profile),
        delta1_star_prime=delta1_star_prime(profile),
    )


# -- iteration sequences ------------------------------------------------------


@dataclass(frozen=True)
class IterationTrace:
    """Monotone approximation sequences from the smoothing double integral.

    lower_sequence[n-1] holds the n-th ratio sup whose reciprocals increase
    toward the reduced eigenvalue; upper_sequence and rayleigh_sequence
    hold the clamped sup-inf ratios and the clamped Rayleigh quotients,
    whose reciprocals decrease toward it.  test_functions carries coarse
    node samples of the iterates (normalized by each step's ratio value).
    """

    n: int
    lower_sequence: tuple[float, ...]
    upper_sequence: tuple[float, ...]
    rayleigh_sequence: tuple[float, ...]
    test_functions: dict[str, np.ndarray]


_SAMPLE_STRIDE = 64


def _check_n_max(n_max: int) -> None:
    if not isinstance(n_max, int) or n_max < 1 or n_max > MAX_ITERATIONS:
        raise DomainError(f"n_max must be an integer in [1, {MAX_ITERATIONS}]")


def _smooth_step(p: CoefficientProfile, f_sub: np.ndarray):
    """One application of f -> int_0^r 1/C int_s^1 C f, on the lattice."""
    seg = p.seg
    with np.errstate(all="ignore"):
        g_nodes, g_sub = seg.reverse_from_sub(_scrub(p, p.c_sub * f_sub), p.tail_floor)
        out = seg.cumulative_from_sub(_scrub(p, p.cinv_sub * g_sub))
    return out, (g_nodes, g_sub)


def iterate_lower(p: CoefficientProfile, n_max: int) -> IterationTrace:
    """Ratio sups of successive iterates starting from sqrt(phi).

    Each step divides the new iterate by the fresh ratio sup, so the
    stored samples stay O(1) while the ratios themselves are exact.
    """
    _check_n_max(n_max)
    with np.errstate(all="ignore"):
        f_nodes = np.sqrt(p.phi_nodes)
        f_sub = np.sqrt(p.phi_sub)
    samples = {"f1": f_nodes[::_SAMPLE_STRIDE].copy()}
    deltas = []
    for n in range(1, n_max + 1):
        (nf_nodes, nf_sub), _ = _smooth_step(p, f_sub)
        with np.errstate(all="ignore"):
            rat = np.concatenate(
                (nf_nodes[1:-1] / f_nodes[1:-1], (nf_sub / f_sub).ravel())
            )
        rat = _guard_vals(p, rat)
        d_n = float(np.max(rat))
        deltas.append(d_n)
        f_nodes = nf_nodes / d_n
        f_sub = nf_sub / d_n
        samples[f"f{n + 1}"] = f_nodes[::_SAMPLE_STRIDE].copy()
    return IterationTrace(
        n=n_max,
        lower_sequence=tuple(deltas),
        upper_sequence=(),
        rayleigh_sequence=(),
        test_functions=samples,
    )


def _clamped_sequences(p: CoefficientProfile, k: int, n_max: int, collect=None):
    """delta_n' and Rayleigh values at clamp radius r = nodes[k].

    The clamped smoothing operator integrates only up to r, so iterates
    stay constant beyond it and their derivative is exactly 1/C times the
    previous tail integral, vanishing past r; the Rayleigh denominators
    use that identity instead of numerical differentiation.
    """
    seg = p.seg
    phi_r = float(p.phi_nodes[k])
    f_nodes = np.minimum(p.phi_nodes, phi_r)
    f_sub = np.minimum(p.phi_sub, phi_r)
    g_prev_sub = None
    primes = []
    rayleigh = []
    for n in range(1, n_max + 1):
        with np.errstate(all="ignore"):
            num = float(np.sum(seg.segment_integrals(_scrub(p, p.c_sub * f_sub**2))))
            if g_prev_sub is None:
                den = phi_r
            else:
                contrib = seg.segment_integrals(
                    _scrub(p, p.cinv_sub * g_prev_sub**2)
                )
                den = float(np.sum(contrib[:k]))
        rayleigh.append(num / den if den > 0 else math.inf)

        with np.errstate(all="ignore"):
            _, g_sub = seg.reverse_from_sub(_scrub(p, p.c_sub * f_sub), p.tail_floor)
            integrand = _scrub(p, p.cinv_sub * g_sub)
            integrand[k:, :] = 0.0
            nf_nodes, nf_sub = seg.cumulative_from_sub(integrand)
            rat = np.concatenate(
                (nf_nodes[1:-1] / f_nodes[1:-1], (nf_sub / f_sub).ravel())
            )
        rat = np.where(np.isfinite(rat), rat, math.inf)
        d_n = float(np.min(rat))
        primes.append(d_n)
        if collect is not None:
            collect[f"clamped_f{n}"] = f_nodes[::_SAMPLE_STRIDE].copy()
        scale = d_n if d_n > 0 and math.isfinite(d_n) else 1.0
        f_nodes = nf_nodes / scale
        f_sub = nf_sub / scale
        g_prev_sub = g_sub / scale
    return primes, rayleigh


def _int_ternary_max(evaluate, lo: int, hi: int):
    """Maximize evaluate(k) over integers in [lo, hi] (unimodal assumed)."""
    while hi - lo > 2:
        m1 = lo + (hi - lo) // 3
        m2 = hi - (hi - lo) // 3
        if evaluate(m1) < evaluate(m2):
            lo = m1 + 1
        else:
            hi = m2
    best = max(range(lo, hi + 1), key=evaluate)
    return best, evaluate(best)


def iterate_upper(
    p: CoefficientProfile, n_max: int, r_candidates: int = 101
) -> IterationTrace:
    """Clamped sup-inf ratios and Rayleigh quotients over clamp radii.

    The sup over the clamp radius r scans r_candidates node-snapped
    quantiles, then refines around each per-depth argmax with an integer
    ternary search over the intervening nodes.  All probed radii share one
    cache, and the reported value at each depth is the max over every
    radius probed, which preserves the per-radius monotonicity in n.
    """
    _check_n_max(n_max)
    n_seg = p.seg.n
    qs = (np.arange(1, r_candidates + 1)) / (r_candidates + 1)
    theta = np.arccos(1.0 - 2.0 * qs)
    ks = np.unique(np.clip(np.rint(n_seg * theta / math.pi), 1, n_seg - 1).astype(int))

    cache: dict[int, tuple[list, list]] = {}

    def seqs(k: int):
        got = cache.get(k)
        if got is None:
            got = _clamped_sequences(p, k, n_max)
            cache[k] = got
        return got

    for k in ks:
        seqs(int(k))

    def probe(which: int, n_idx: int):
        def value(k: int) -> float:
            v = seqs(k)[which][n_idx]
            return v if math.isfinite(v) else -math.inf

        return value

    for which in (0, 1):
        for n_idx in range(n_max):
            value = probe(which, n_idx)
            snap = sorted(cache)
            kb = max(snap, key=value)
            pos = snap.index(kb)
            lo = snap[pos - 1] + 1 if pos > 0 else 1
            hi = snap[pos + 1] - 1 if pos + 1 < len(snap) else n_seg - 1
            if lo <= hi:
                _int_ternary_max(value, lo, hi)

    def finite_max(which: int, n_idx: int) -> float:
        best = -math.inf
        for k in cache:
            v = cache[k][which][n_idx]
            if math.isfinite(v) and v > best:
                best = v
        return best

    primes = [finite_max(0, n_idx) for n_idx in range(n_max)]
    rayleigh = [finite_max(1, n_idx) for n_idx in range(n_max)]

    best_k = max(cache, key=probe(0, n_max - 1))
    samples: dict[str, np.ndarray] = {}
    _clamped_sequences(p, best_k, n_max, collect=samples)
    samples["clamp_radius"] = np.array([p.seg.nodes[best_k]])
    return IterationTrace(
        n=n_max,
        lower_sequence=(),
        upper_sequence=tuple(primes),
        rayleigh_sequence=tuple(rayleigh),
        test_functions=samples,
    )


# -- variational lower bounds -------------------------------------------------


def _vectorized(f):
    """Adapt a scalar-or-vector test function to arbitrary array input."""

    def call(x):
        arr = np.asarray(x, dtype=float)
        try:
            out = np.asarray(f(arr), dtype=float)
            if out.shape == arr.shape:
                return out
        except (TypeError, ValueError):
            pass
        flat = np.array([float(f(float(t))) for t in arr.ravel()])
        return flat.reshape(arr.shape)

    return call


def variational_ratio(f, p: CoefficientProfile, form: str = "primal") -> float:
    """Certified lower bound for the reduced eigenvalue from a test function.

    For any f continuous and strictly positive on (0, 1),

        primal:  inf_r f(r) / (int_0^r 1/C int_s^1 C f)
        dual:    inf_r f(r) / (int_r^1 C   int_0^s 1/C f)

    is at most the reduced eigenvalue, so whatever this returns is a valid
    lower bound; better test functions just give better bounds.
    """
    if form not in ("primal", "dual"):
        raise DomainError(f"form must be 'primal' or 'dual', got {form!r}")
    seg = p.seg
    fv = _vectorized(f)
    f_sub = fv(seg.sub)
    f_nodes = fv(seg.nodes)
    if not np.all(np.isfinite(f_sub)) or np.any(f_sub <= 0.0):
        raise InvalidTestFunction(
            "test function must be finite and strictly positive on (0, 1)"
        )
    if np.any(f_nodes[1:-1] <= 0.0) or not np.all(np.isfinite(f_nodes[1:-1])):
        raise InvalidTestFunction(
            "test function must be finite and strictly positive on (0, 1)"
        )

    with np.errstate(all="ignore"):
        if form == "primal":
            g_nodes, g_sub = seg.reverse_from_sub(_scrub(p, p.c_sub * f_sub), p.tail_floor)
            den_nodes, den_sub = seg.cumulative_from_sub(
                _scrub(p, p.cinv_sub * g_sub)
            )

            def g_at(y):
                return seg.tail_eval(g_nodes, lambda z: p.coeff(z) * fv(z), y)

            def den_at(r):
                return float(
                    seg.cum_eval(
                        den_nodes, lambda z: p.coeff_inv(z) * g_at(z.ravel()).reshape(z.shape), r
                    )[0]
                )

        else:
            u_nodes, u_sub = seg.cumulative_from_sub(_scrub(p, p.cinv_sub * f_sub))
            den_nodes, den_sub = seg.reverse_from_sub(_scrub(p, p.c_sub * u_sub), p.tail_floor)

            def u_at(y):
                return seg.cum_eval(u_nodes, lambda z: p.coeff_inv(z) * fv(z), y)

            def den_at(r):
                return float(
                    seg.tail_eval(
                        den_nodes, lambda z: p.coeff(z) * u_at(z.ravel()).reshape(z.shape), r
                    )[0]
                )

        rat = np.concatenate(
            (f_nodes[1:-1] / den_nodes[1:-1], (f_sub / den_sub).ravel())
        )
    rat = np.where(np.isfinite(rat), rat, math.inf)
    xs, _, _ = _lattice(p)
    j = int(np.argmin(rat))
    x0 = float(xs[j])
    v0 = float(rat[j])

    def neg(r):
        with np.errstate(all="ignore"):
            try:
                dv = den_at(float(r))
                fvv = float(fv(np.array([r]))[0])
            except (ValueError, OverflowError, ZeroDivisionError):
                return -math.inf
            # a point where either factor degenerates cannot improve the inf
            if dv <= 0 or fvv <= 0 or not math.isfinite(dv) or not math.isfinite(fvv):
                return -math.inf
            return -fvv / dv

    w = float(seg.width[int(seg.locate(np.array([x0]))[0])])
    a = max(x0 - w, 1e-12)
    b = min(x0 + w, 1.0 - 1e-12)
    _, nv = golden_max(neg, a, b, tol=1e-12)
    if math.isfinite(nv) and -nv < v0:
        return float(-nv)
    return v0
