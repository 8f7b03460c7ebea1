"""Inequality verification harness.

Each check measures the two-sided ratios behind one comparison (energy vs
Wolff mass, the three cube-weight aggregates, duality constants, kernel
dilations, shifted-lattice averaging) on a concrete finite instance.  Checks
are deterministic functions of their inputs and a seed; empirical bounds for
constants the theory leaves implicit default to the band ``[1e-3, 1e3]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError, WolffpotError
from .kernels import (
    BarField,
    DyadicKernelMap,
    RadialKernel,
    bar_k,
    dlbo_constant,
    log_kernel,
)
from .lattice import LatticeWindow
from .measures import AtomicMeasure, cube_mass_table, lebesgue_grid
from .potentials import (
    DyadicScene,
    Exponents,
    a_functionals,
    energy_dyadic,
    t_continuous_trunc,
    xpow,
)

DEFAULT_BAND = (1e-3, 1e3)


@dataclass
class CheckReport:
    """Outcome of one check: measured values against configured bounds.

    ``wall_time`` is diagnostic only and is excluded from deterministic
    serialization, so reports from identical (config, seed) pairs are
    byte-identical.
    """

    name: str
    instance: dict
    values: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    status: str = "pass"  # pass | fail | not-applicable
    seed: int | None = None
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_jsonable(self, include_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "seed": self.seed,
            "instance": self.instance,
            "values": dict(self.values),
            "bounds": {k: list(v) for k, v in self.bounds.items()},
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


# -- random instances ---------------------------------------------------------


@dataclass
class Instance:
    window: LatticeWindow
    sigma: AtomicMeasure
    mu: AtomicMeasure
    K: DyadicKernelMap
    descriptor: dict


def random_instance(
    seed,
    n: int = 1,
    depth: int = 6,
    n_sigma: int = 50,
    n_mu: int = 50,
    kernel: str = "riesz",
) -> Instance:
    """Seeded random instance on the unit cube.

    Atoms are uniform in ``[0,1)^n`` with log-uniform weights in
    ``[2^-8, 2^8]``; the kernel is either a random Riesz profile or a random
    per-cube table (log-uniform values, full window enumeration, so keep the
    depth small for tables).
    """
    rng = np.random.default_rng(seed)
    window = LatticeWindow.from_box([(0.0, 1.0)] * n, 0, depth)
    sigma = AtomicMeasure(
        rng.uniform(0.0, 1.0, (n_sigma, n)), 2.0 ** rng.uniform(-8, 8, n_sigma)
    )
    mu = AtomicMeasure(
        rng.uniform(0.0, 1.0, (n_mu, n)), 2.0 ** rng.uniform(-8, 8, n_mu)
    )
    if kernel == "riesz":
        from .kernels import riesz_kernel

        alpha = float(rng.uniform(0.15 * n, 0.85 * n))
        K = DyadicKernelMap.from_radial(riesz_kernel(alpha, n))
        kdesc = {"type": "riesz", "alpha": alpha, "n": n}
    elif kernel == "table":
        table = {key: float(2.0 ** rng.uniform(-4, 4)) for key in window.keys()}
        K = DyadicKernelMap.from_table(table)
        kdesc = {"type": "table", "cubes": len(table)}
    else:
        raise WolffpotError(f"unknown kernel kind {kernel!r}")
    descriptor = {
        "seed": seed,
        "n": n,
        "depth": depth,
        "n_sigma": n_sigma,
        "n_mu": n_mu,
        "kernel": kdesc,
    }
    return Instance(window, sigma, mu, K, descriptor)


# -- identities and aggregate comparisons ---------------------------------------


def fubini_pair(K, mu, sigma, exps, window) -> tuple[float, float]:
    """Both sides of the energy identity, computed along independent routes.

    Left: ``int T[mu]^{p'} dsigma``.  Right: ``int T[(T[mu])^{p'-1} dsigma] dmu``,
    assembled through the operator itself rather than by rearranging the sum.
    """
    lhs = energy_dyadic(K, mu, sigma, exps, window)
    scene = DyadicScene(K, sigma, mu, window)
    pp = exps.p_prime
    gw = np.array(
        [
            w * xpow(scene.t_mu(p), pp - 1.0) if w > 0 else 0.0
            for p, w in zip(sigma.positions, sigma.weights)
        ]
    )
    rho = AtomicMeasure(sigma.positions, gw)
    rho_mass = cube_mass_table(rho, window)
    rhs = 0.0
    for p, w in zip(mu.positions, mu.weights):
        if w <= 0 or not window.contains_point(p):
            continue
        rhs += w * scene.t(rho_mass, p)
    return lhs, rhs


def check_fubini(K, mu, sigma, exps, window) -> float:
    """Relative gap of the energy identity; NaN when either side is infinite."""
    lhs, rhs = fubini_pair(K, mu, sigma, exps, window)
    if math.isinf(lhs) or math.isinf(rhs):
        return math.nan
    return abs(lhs - rhs) / max(lhs, 1e-300)


def summation_by_parts_min_slack(lam: dict, window, points, s: float) -> float:
    """Minimum relative slack of the chain-telescoping power inequality.

    For each point ``x`` with chain weights ``c_l`` (coarse to fine) the
    inequality reads ``(sum c)^s <= s * sum_l c_l (suffix_l)^{s-1}`` with
    ``suffix_l`` the sum of the chain weights at levels ``>= l``.  Returns the
    minimum of ``(rhs - lhs)/max(lhs, tiny)`` over the points.
    """
    if s < 1.0:
        raise WolffpotError("need s >= 1")
    worst = math.inf
    for x in points:
        chain = window.chain_keys(x)
        c = np.array([lam.get(key, 0.0) for key in chain])
        suffix = np.cumsum(c[::-1])[::-1]
        lhs = xpow(float(np.sum(c)), s)
        rhs = s * float(np.sum(c * suffix ** (s - 1.0)))
        worst = min(worst, (rhs - lhs) / max(lhs, 1e-300))
    return worst


def check_a_chain(lam: dict, sigma, s: float, window):
    """Ratios of the three aggregates: ``(A1/A2, A2/(A1^{1/s} A3^{1/s'}), A3/A1, A1/A3)``."""
    a1, a2, a3 = a_functionals(lam, sigma, s, window)
    if a1 <= 0.0 and a2 <= 0.0 and a3 <= 0.0:
        raise DegenerateInputError("all aggregates vanish")
    sp = s / (s - 1.0)
    holder = a1 ** (1.0 / s) * a3 ** (1.0 / sp)
    return (
        a1 / a2 if a2 > 0 else math.inf,
        a2 / holder if holder > 0 else math.inf,
        a3 / a1 if a1 > 0 else math.inf,
        a1 / a3 if a3 > 0 else math.inf,
    )


def wolff_integral(K, sigma, mu, exps, window, power: float = 1.0) -> float:
    """``int W^power dmu`` over the mu-atoms (exact weighted sum)."""
    scene = DyadicScene(K, sigma, mu, window)
    total = 0.0
    for p, w in zip(mu.positions, mu.weights):
        if w <= 0 or not window.contains_point(p):
            continue
        total += w * xpow(scene.wolff(p, exps.p_prime), power)
    return total


def check_energy_wolff_ratio(K, mu, sigma, exps, window) -> float:
    """Energy over Wolff mass, ``E / int W dmu``; NaN when degenerate."""
    e = energy_dyadic(K, mu, sigma, exps, window)
    wm = wolff_integral(K, sigma, mu, exps, window)
    if e <= 0.0 or wm <= 0.0 or math.isinf(e) or math.isinf(wm):
        return math.nan
    return e / wm


# -- duality (q = 1) -------------------------------------------------------------


@dataclass
class DualityResult:
    dual_constant: float       # E^(1/p')
    achieved_ratio: float      # ||T f*||_L1(mu) / ||f*||_Lp(sigma) at f* = (T mu)^(p'-1)
    probe_max: float           # best ratio among random nonnegative probes
    pairing_gap: float         # operator-path vs pairing-identity agreement on probes


def trace_constant_q1(
    K, mu, sigma, exps: Exponents, window, probes: int = 0, seed: int | None = None
) -> DualityResult:
    """Duality constant of the ``q = 1`` trace inequality and its extremal probe.

    The extremal function ``f* = (T[mu])^{p'-1}`` achieves the dual constant
    ``E^{1/p'}``; it is pushed through the full operator path.  Random probes
    use the exact pairing ``int T[f dsigma] dmu = int T[mu] f dsigma`` (a few
    are cross-checked against the operator path; the gap is reported).
    """
    e = energy_dyadic(K, mu, sigma, exps, window)
    if math.isinf(e):
        raise DegenerateInputError("energy is infinite; trace inequality fails")
    pp = exps.p_prime
    p = exps.p
    scene = DyadicScene(K, sigma, mu, window)
    tvals = np.array([scene.t_mu(pos) for pos in sigma.positions])
    sw = sigma.weights

    def ratio_operator(fvals) -> float:
        rho = AtomicMeasure(sigma.positions, sw * fvals)
        rmass = cube_mass_table(rho, window)
        num = sum(
            w * scene.t(rmass, pos)
            for pos, w in zip(mu.positions, mu.weights)
            if w > 0 and window.contains_point(pos)
        )
        den = float(np.sum(sw * fvals ** p)) ** (1.0 / p)
        return num / den if den > 0 else math.nan

    fstar = tvals ** (pp - 1.0)
    achieved = ratio_operator(fstar)

    probe_max = 0.0
    gap = 0.0
    if probes:
        rng = np.random.default_rng(seed)
        pairing_den = None
        for t in range(probes):
            f = 2.0 ** rng.uniform(-8, 8, sigma.n_atoms)
            f[rng.uniform(size=sigma.n_atoms) < 0.2] = 0.0
            den = float(np.sum(sw * f ** p)) ** (1.0 / p)
            if den <= 0:
                continue
            num = float(np.sum(sw * f * tvals))  # pairing identity
            probe_max = max(probe_max, num / den)
            if t < 8:
                gap = max(gap, abs(ratio_operator(f) - num / den) / max(num / den, 1e-300))
    return DualityResult(e ** (1.0 / pp), achieved, probe_max, gap)


# -- upper triangle (1 < q < p) ---------------------------------------------------


@dataclass
class TraceTestResult:
    wolff_norm: float      # (int W^{q(p-1)/(p-q)} dmu)^{(p-q)/(q(p-1))}
    empirical_sup: float   # max probe ratio ||Tf||_Lq(mu) / ||f||_Lp(sigma)
    dlbo: float            # measured oscillation constant of (K, sigma)


def trace_test_upper_triangle(
    K, mu, sigma, exps: Exponents, window, trials: int = 50, seed: int = 0
) -> TraceTestResult:
    """Two-sided evidence for the upper-triangle trace inequality.

    Probes the operator norm from below with random nonnegative ``f`` (primal
    side) and with dual probes ``g = (HL-maximal of psi)^{1/p'}`` (the adjoint
    ratio equals the primal one), and reports the Wolff-potential norm at the
    trace exponent plus the measured oscillation constant; equivalence is only
    claimed when the latter is finite.
    """
    if exps.q is None or not (1.0 < exps.q < exps.p):
        raise WolffpotError("upper-triangle test needs 1 < q < p")
    q, p, pp = exps.q, exps.p, exps.p_prime
    qp = q / (q - 1.0)
    t_exp = exps.trace_exponent
    scene = DyadicScene(K, sigma, mu, window)

    wolff_mass = 0.0
    for pos, w in zip(mu.positions, mu.weights):
        if w > 0 and window.contains_point(pos):
            wolff_mass += w * xpow(scene.wolff(pos, pp), t_exp)
    wolff_norm = xpow(wolff_mass, 1.0 / t_exp)

    rng = np.random.default_rng(seed)
    sup_ratio = 0.0
    mu_in = [
        (pos, w)
        for pos, w in zip(mu.positions, mu.weights)
        if w > 0 and window.contains_point(pos)
    ]
    sig_in = [
        (pos, w)
        for pos, w in zip(sigma.positions, sigma.weights)
        if w > 0 and window.contains_point(pos)
    ]
    for _ in range(trials):
        f = 2.0 ** rng.uniform(-8, 8, sigma.n_atoms)
        f[rng.uniform(size=sigma.n_atoms) < 0.2] = 0.0
        den = float(np.sum(sigma.weights * f ** p)) ** (1.0 / p)
        if den <= 0:
            continue
        rho = AtomicMeasure(sigma.positions, sigma.weights * f)
        rmass = cube_mass_table(rho, window)
        num = sum(w * scene.t(rmass, pos) ** q for pos, w in mu_in) ** (1.0 / q)
        sup_ratio = max(sup_ratio, num / den)
    mu_mass = scene.mu_mass
    for _ in range(trials):
        psi = 2.0 ** rng.uniform(-8, 8, mu.n_atoms)
        psi_nu = AtomicMeasure(mu.positions, mu.weights * psi)
        psi_mass = cube_mass_table(psi_nu, window)
        g = np.zeros(mu.n_atoms)
        for i, (pos, w) in enumerate(zip(mu.positions, mu.weights)):
            if w <= 0 or not window.contains_point(pos):
                continue
            best = 0.0
            for key in window.chain_keys(pos):
                mm = mu_mass.get(key, 0.0)
                if mm > 0.0:
                    best = max(best, psi_mass.get(key, 0.0) / mm)
            g[i] = best ** (1.0 / pp)
        den = float(np.sum(mu.weights * g ** qp)) ** (1.0 / qp)
        if den <= 0:
            continue
        eta = AtomicMeasure(mu.positions, mu.weights * g)
        emass = cube_mass_table(eta, window)
        num = sum(w * scene.t(emass, pos) ** pp for pos, w in sig_in) ** (1.0 / pp)
        sup_ratio = max(sup_ratio, num / den)
    return TraceTestResult(wolff_norm, sup_ratio, dlbo_constant(K, sigma, window))


# -- the borderline log-kernel instance -------------------------------------------


def counterexample_series(beta: float, C: float, n: int, L: int) -> tuple[float, float]:
    """Partial sums of the two scalar series of the borderline instance.

    ``S_E(L) = sum_{l=0}^{L} ln(C 2^l)^{-beta}`` (convergent for ``beta > 1``)
    and ``S_Wbar(L) = sum_{l=0}^{L} ln(C 2^l)^{-(2 beta - 2)}`` (divergent for
    ``beta <= 3/2``): the energy stays bounded while the bar-kernel potential
    accumulates without bound.
    """
    if not (1.0 < beta <= 1.5):
        raise WolffpotError(f"need 1 < beta <= 3/2, got {beta}")
    if C < math.exp(beta / n) * (1.0 - 1e-12):
        raise WolffpotError(f"need C >= e^(beta/n), got {C}")
    logs = math.log(C) + np.arange(L + 1, dtype=float) * math.log(2.0)
    return float(np.sum(logs ** -beta)), float(np.sum(logs ** -(2.0 * beta - 2.0)))


def check_counterexample_fields(
    beta: float, C: float, depth: int
) -> tuple[float, float, float]:
    """Full-field borderline instance at one window depth.

    ``mu`` is the unit-interval Lebesgue grid at the window depth, ``sigma``
    its extension to ``[-1, 2)``, and the kernel the borderline log profile.
    Returns ``(E, min over mu-atoms of Wbar, int W dmu)``.
    """
    kern = log_kernel(beta, C, 1)
    window = LatticeWindow.from_box([(-1.0, 2.0)], 0, depth)
    sigma = lebesgue_grid([(-1.0, 2.0)], depth)
    mu = lebesgue_grid([(0.0, 1.0)], depth)
    K = DyadicKernelMap.from_radial(kern)
    exps = Exponents(p=2.0)
    scene = DyadicScene(K, sigma, mu, window)
    pp = exps.p_prime

    e = 0.0
    for pos, w in zip(sigma.positions, sigma.weights):
        e += w * xpow(scene.t_mu(pos), pp)
    min_wbar = math.inf
    int_w = 0.0
    for pos, w in zip(mu.positions, mu.weights):
        min_wbar = min(min_wbar, scene.wolff_bar(pos, pp))
        int_w += w * scene.wolff(pos, pp)
    return e, min_wbar, int_w


# -- shifted-lattice averaging ------------------------------------------------------


def _shifted_dyadic_potential(kernel, mu, xs, zs, j: int, j0: int):
    """``T`` over shifted lattices with the quarter-dilated kernel.

    Evaluates ``sum_l k(2^-l / 4) mu(Q_{l,z}(x))`` for each shift ``z`` in
    ``zs``, where ``Q_{l,z}(x)`` is the level-``l`` cube of the lattice
    shifted by ``z`` containing ``x``.  Levels run from the coarsest scale the
    kernel can see down to the separation scale of the atoms, which loses only
    nonnegative terms (a conservative truncation for an upper-bound check).
    """
    pos, w = mu.positions, mu.weights
    x = np.asarray(xs, dtype=float)
    if kernel.cutoff is not None:
        l_min = -int(math.floor(math.log2(4.0 * kernel.cutoff)))
    else:
        l_min = -(j + j0 + 4)
    d_inf = np.max(np.abs(pos - x), axis=1)
    d_pos = d_inf[d_inf > 0]
    if d_pos.size:
        l_max = int(math.floor(-math.log2(float(np.min(d_pos))))) + 1
    else:
        l_max = l_min + 50
    l_max = min(max(l_max, l_min + 1), l_min + 52)
    levels = np.arange(l_min, l_max + 1)
    kvals = np.array([kernel(2.0 ** (-float(l)) / 4.0) for l in levels])
    live = kvals > 0.0
    levels, kvals = levels[live], kvals[live]
    out = np.zeros(zs.shape[0])
    chunk = 2048
    lev_scale = 2.0 ** levels.astype(float)
    for lo in range(0, zs.shape[0], chunk):
        z = zs[lo : lo + chunk]  # (c, n)
        ix = np.floor((x[None, None, :] - z[:, None, :]) * lev_scale[None, :, None])
        ip = np.floor(
            (pos[None, None, :, :] - z[:, None, None, :])
            * lev_scale[None, :, None, None]
        )  # (c, L, m, n)
        same = np.all(ip == ix[:, :, None, :], axis=3)  # (c, L, m)
        out[lo : lo + chunk] = (same @ w) @ kvals
    return out


def shifted_average_check(
    kernel: RadialKernel,
    mu: AtomicMeasure,
    j: int,
    shift_samples: int,
    x_samples,
    seed: int,
) -> dict:
    """Truncated-operator vs averaged-shifted-lattice comparison.

    Estimates ``(1/2^{jn}) int_{|z| <= 2^{j+j0}} T_shifted[mu](x) dz`` by Monte
    Carlo (uniform shifts in the ball) and returns the worst ratio of
    ``T^{2^j}[mu](x)`` to the estimate minus three standard errors, over the
    sample points.  ``j0`` is the smallest integer with ``2^{j0} > 2 sqrt(n) + 1``.
    """
    n = mu.dimension
    j0 = 1
    while 2.0 ** j0 <= 2.0 * math.sqrt(n) + 1.0:
        j0 += 1
    R = 2.0 ** (j + j0)
    rng = np.random.default_rng(seed)
    if n == 1:
        zs = rng.uniform(-R, R, (shift_samples, 1))
        vol = 2.0 * R
    else:
        direc = rng.normal(size=(shift_samples, n))
        direc /= np.linalg.norm(direc, axis=1, keepdims=True)
        rad = R * rng.uniform(size=shift_samples) ** (1.0 / n)
        zs = direc * rad[:, None]
        vol = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * R ** n
    ratios = []
    details = []
    for x in x_samples:
        lhs = t_continuous_trunc(kernel, mu, 2.0 ** j, x)
        vals = _shifted_dyadic_potential(kernel, mu, x, zs, j, j0)
        est = vol * float(np.mean(vals))
        se = vol * float(np.std(vals, ddof=1)) / math.sqrt(len(vals))
        rhs = max(est - 3.0 * se, 0.0) / 2.0 ** (j * n)
        if lhs == 0.0:
            continue  # vacuous point
        ratios.append(lhs / rhs if rhs > 0 else math.inf)
        details.append({"lhs": lhs, "estimate": est, "stderr": se})
    if not ratios:
        return {"max_ratio": 0.0, "n_points": 0, "j0": j0, "details": []}
    return {
        "max_ratio": max(ratios),
        "n_points": len(ratios),
        "j0": j0,
        "details": details,
    }


# -- kernel dilation and bar-kernel lemmas -------------------------------------------


def check_kernel_dilation(
    kernel: RadialKernel,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    exps: Exponents,
    window: LatticeWindow,
    c: float,
) -> tuple[float, float]:
    """Dilated-to-undilated ratios of the Wolff-type sums.

    Compares ``sum_Q k(c r_Q) sigma(Q) bar(Q)^{p'-1} mu(Q)^{p'}`` against the
    ``c = 1`` sum, and likewise the ``L^r(dmu)`` norms of the corresponding
    chain functions at the trace exponent ``r``.  The bar factor is the
    radial cumulative kernel at the cube's scale and center.
    """
    pp = exps.p_prime
    r_exp = exps.trace_exponent if exps.q is not None else 1.0
    sig = cube_mass_table(sigma, window)
    mut = cube_mass_table(mu, window)
    support = [
        key for key, mm in mut.items() if mm > 0.0 and sig.get(key, 0.0) > 0.0
    ]
    bar_vals = {}
    for key in support:
        cube = window.cube(*key)
        bar_vals[key] = bar_k(kernel, sigma, cube.center(), cube.side)

    def summand(key, kval):
        bv = bar_vals[key]
        if bv <= 0.0 or math.isinf(bv):
            return 0.0
        return kval * sig[key] * xpow(bv, pp - 1.0) * xpow(mut[key], pp)

    s_dil = sum(summand(k2, kernel(c * 2.0 ** -k2[0])) for k2 in support)
    s_one = sum(summand(k2, kernel(2.0 ** -k2[0])) for k2 in support)
    sum_ratio = s_dil / s_one if s_one > 0 else math.nan

    def chain_norm(dilation):
        total = 0.0
        for pos, w in zip(mu.positions, mu.weights):
            if w <= 0 or not window.contains_point(pos):
                continue
            val = 0.0
            for key in window.chain_keys(pos):
                if key not in bar_vals:
                    continue
                bv = bar_vals[key]
                if bv <= 0.0 or math.isinf(bv):
                    continue
                val += (
                    kernel(dilation * 2.0 ** -key[0])
                    * sig[key]
                    * xpow(bv, pp - 1.0)
                    * xpow(mut[key], pp - 1.0)
                )
            total += w * xpow(val, r_exp)
        return xpow(total, 1.0 / r_exp)

    n_dil, n_one = chain_norm(c), chain_norm(1.0)
    norm_ratio = n_dil / n_one if n_one > 0 else math.nan
    return sum_ratio, norm_ratio


def check_bar_lemmas(
    kernel: RadialKernel,
    sigma: AtomicMeasure,
    window: LatticeWindow,
    samples,
) -> tuple[float, float, float]:
    """Two-sided ratio bounds for the three bar-kernel reformulations.

    For sampled ``(x, r)``: ball average of ``k(|x-.|)`` vs ``bar_k(r)(x)``;
    the dyadic ``bar_K(Q)(x)`` at the cube of scale ``r`` vs ``bar_k(r)(x)``;
    and ``bar_k(r)`` vs ``bar_k(2r)``.  Returns the three worst two-sided
    ratios; degenerate samples are skipped.
    """
    bf = BarField(DyadicKernelMap.from_radial(kernel), sigma, window)
    reform = relation = doubling = None

    def two_sided(a, b, cur):
        if a <= 0 or b <= 0 or math.isinf(a) or math.isinf(b):
            return cur
        ratio = max(a / b, b / a)
        return ratio if cur is None or ratio > cur else cur

    for x, r in samples:
        mass = sigma.ball_mass(x, r)
        if mass <= 0.0:
            continue
        bk = bar_k(kernel, sigma, x, r)
        davg = t_continuous_trunc(kernel, sigma, r, x) / mass
        reform = two_sided(davg, bk, reform)
        level = round(-math.log2(r))
        if window.coarse_level <= level <= window.fine_level and window.contains_point(x):
            cube = window.cube_at(x, level)
            bK = bf.bar(cube, x)
            relation = two_sided(bK, bar_k(kernel, sigma, x, cube.side), relation)
        doubling = two_sided(bk, bar_k(kernel, sigma, x, 2.0 * r), doubling)
    if reform is None and relation is None and doubling is None:
        raise DegenerateInputError("all samples degenerate")
    return (
        reform if reform is not None else math.nan,
        relation if relation is not None else math.nan,
        doubling if doubling is not None else math.nan,
    )


# -- truncation sweeps -----------------------------------------------------------------


@dataclass
class SweepResult:
    depths: list
    values: list
    rel_changes: list
    converged: bool


def truncation_sweep(fn, depths, rtol: float = 0.05, atol: float = 1e-9) -> SweepResult:
    """Re-run a depth-parametrized quantity and report successive changes.

    ``converged`` holds when the final change is below ``rtol`` relative or
    ``atol`` absolute; divergent quantities (the borderline bar-potential)
    keep failing this and are thereby flagged.
    """
    depths = list(depths)
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise WolffpotError("depths must be strictly increasing")
    values = [float(fn(d)) for d in depths]
    rel = []
    for prev, cur in zip(values, values[1:]):
        diff = abs(cur - prev)
        rel.append(diff / max(abs(prev), 1e-300))
    if not rel:
        return SweepResult(depths, values, rel, True)
    last_abs = abs(values[-1] - values[-2])
    converged = rel[-1] <= rtol or last_abs <= atol
    return SweepResult(depths, values, rel, converged)
