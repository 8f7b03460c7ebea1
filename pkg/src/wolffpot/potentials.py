"""Dyadic and continuous potential-theoretic functionals.

Dyadic objects, for a per-cube kernel ``K`` and measures ``sigma, mu`` on a
window:

* ``T[nu](x)      = sum_Q K(Q) nu(Q) chi_Q(x)``
* ``E             = int T[mu]^{p'} dsigma``
* ``W(x)          = sum_Q K(Q) sigma(Q) (int_Q bar_K(Q) dmu)^{p'-1} chi_Q(x)``
* ``Wbar(x)       = sum_Q sigma(Q) bar_K(Q)(x) (int_Q bar_K(Q) dmu)^{p'-1} chi_Q(x)``
* ``M(x)          = sup_{x in Q} (1/sigma(Q)) sum_{Q' subset Q} K(Q') sigma(Q') mu(Q')``
* ``A1, A2, A3``  for per-cube weights ``lambda_Q`` and an exponent ``s``.

Continuous counterparts for a radial kernel ``k``:

* ``T_k^R[nu](x)  = sum over atoms within distance R of k(|x-y|) w_y``
* ``W_k(x)        = int_0^R k(r) sigma(B(x,r)) (int_{B(x,r)} bar_k(r) dmu)^{p'-1} dr/r``
* ``M_k(x)        = sup_r bar_k(r)(x) mu(B(x,r))``
* ``E_k           = int T_k[mu]^{p'} dsigma``

All dyadic integrals against atomic measures are exact weighted sums; the
only quadrature anywhere is inside kernels whose log-primitive has no closed
form.  Extended arithmetic follows the potential-theoretic convention
``0 * inf = 0``, and ``+inf`` is a legitimate value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, OutOfWindowError, WolffpotError
from .kernels import BarField, DyadicKernelMap, RadialKernel, bar_k
from .lattice import Key, LatticeWindow
from .measures import AtomicMeasure, cube_mass_table


@dataclass(frozen=True)
class Exponents:
    """Integrability exponents ``p`` (and optionally ``q``) with derived values."""

    p: float
    q: float | None = None

    def __post_init__(self):
        if not (self.p > 1.0 and math.isfinite(self.p)):
            raise WolffpotError(f"need 1 < p < inf, got p={self.p}")
        if self.q is not None and not (1.0 <= self.q < self.p):
            raise WolffpotError(f"need 1 <= q < p, got q={self.q}, p={self.p}")

    @property
    def p_prime(self) -> float:
        return self.p / (self.p - 1.0)

    @classmethod
    def from_p_prime(cls, p_prime: float, q: float | None = None) -> "Exponents":
        if not (p_prime > 1.0):
            raise WolffpotError(f"need p' > 1, got {p_prime}")
        return cls(p_prime / (p_prime - 1.0), q)

    @property
    def trace_exponent(self) -> float:
        """``q (p-1) / (p-q)``, the Wolff-potential exponent of the trace bound."""
        if self.q is None:
            raise WolffpotError("trace exponent needs q")
        return self.q * (self.p - 1.0) / (self.p - self.q)


def xpow(base: float, e: float) -> float:
    """``base ** e`` with ``0**0 = 1`` and infinities propagated, never NaN."""
    if math.isinf(base):
        return math.inf if e > 0 else (1.0 if e == 0 else 0.0)
    return base ** e


class DyadicScene:
    """Shared precomputations for one ``(K, sigma, mu, window)`` quadruple.

    Everything is built lazily from sparse cube-mass tables, so costs scale
    with atoms times depth rather than with the full cube count.  After
    construction all structures are immutable-by-convention and queries are
    pure.
    """

    def __init__(
        self,
        K: DyadicKernelMap,
        sigma: AtomicMeasure,
        mu: AtomicMeasure,
        window: LatticeWindow,
    ):
        self.K = K
        self.sigma = sigma
        self.mu = mu
        self.window = window
        self.bar = BarField(K, sigma, window)
        self.sigma_mass = self.bar.mass
        self.mu_mass = cube_mass_table(mu, window)
        self._inner: dict[Key, float] | None = None
        self._subtree: dict[Key, float] | None = None

    # -- generic chain sums ----------------------------------------------------

    def t(self, mass_table: dict[Key, float], x) -> float:
        """``sum over the ancestor chain of x of K(Q) * table(Q)``."""
        total = 0.0
        for key in self.window.chain_keys(x):
            m = mass_table.get(key, 0.0)
            if m > 0.0:
                total += self.K(key) * m
        return total

    def t_mu(self, x) -> float:
        return self.t(self.mu_mass, x)

    # -- inner integrals int_Q bar_K(Q) dmu -------------------------------------

    def _mu_prefix_table(self) -> dict[Key, float]:
        """``S(Q) = sum over mu-atoms b in Q of w_b P(leaf(b))``."""
        table: dict[Key, float] = {}
        window, bar = self.window, self.bar
        for pos, w in zip(self.mu.positions, self.mu.weights):
            if w <= 0.0 or not window.contains_point(pos):
                continue
            leaf = window.leaf_key(pos)
            val = w * bar.prefix(leaf)
            idx = leaf[1]
            for level in range(window.coarse_level, window.fine_level + 1):
                d = window.fine_level - level
                key = (level, tuple(k >> d for k in idx))
                table[key] = table.get(key, 0.0) + val
        return table

    def inner(self, key: Key) -> float:
        """``I(Q) = int_Q bar_K(Q) dmu``, zero when ``sigma(Q) = 0``.

        Uses the chain-sum identity: summing ``bar_K(Q)(b)`` over mu-atoms
        gives ``(S(Q) - mu(Q) P(parent Q)) / sigma(Q)``.
        """
        if self._inner is None:
            s_table = self._mu_prefix_table()
            inner: dict[Key, float] = {}
            for key2, s_val in s_table.items():
                sig = self.sigma_mass.get(key2, 0.0)
                if sig <= 0.0:
                    continue
                parent = self.window.parent_key(key2)
                above = self.bar.prefix(parent) if parent is not None else 0.0
                inner[key2] = (s_val - self.mu_mass[key2] * above) / sig
            self._inner = inner
        return self._inner.get(key, 0.0)

    # -- subtree sums for the maximal function ----------------------------------

    def subtree(self, key: Key) -> float:
        """``N(Q) = sum_{Q' subset Q} K(Q') sigma(Q') mu(Q')`` (inclusive)."""
        if self._subtree is None:
            acc: dict[Key, float] = {}
            for k2, mm in self.mu_mass.items():
                sm = self.sigma_mass.get(k2, 0.0)
                if sm > 0.0 and mm > 0.0:
                    acc[k2] = self.K(k2) * sm * mm
            # the support is ancestor-closed (cube masses are monotone under
            # inclusion), so accumulating fine-to-coarse closes the sums
            for k2 in sorted(acc, key=lambda kk: -kk[0]):
                parent = self.window.parent_key(k2)
                if parent is not None and parent in acc:
                    acc[parent] += acc[k2]
            self._subtree = acc
        return self._subtree.get(key, 0.0)

    # -- potentials --------------------------------------------------------------

    def wolff(self, x, p_prime: float) -> float:
        total = 0.0
        for key in self.window.chain_keys(x):
            sig = self.sigma_mass.get(key, 0.0)
            if sig <= 0.0:
                continue
            inner = self.inner(key)
            if inner > 0.0:
                total += self.K(key) * sig * xpow(inner, p_prime - 1.0)
        return total

    def wolff_bar(self, x, p_prime: float) -> float:
        """As :meth:`wolff` but with ``bar_K(Q)(x)`` as the outer kernel factor."""
        chain = self.window.chain_keys(x)
        p_leaf = self.bar.prefix(chain[-1])
        total = 0.0
        above = 0.0
        for key in chain:
            sig = self.sigma_mass.get(key, 0.0)
            if sig > 0.0:
                inner = self.inner(key)
                if inner > 0.0:
                    # sigma(Q) * bar_K(Q)(x) = P(leaf(x)) - P(parent(Q))
                    total += (p_leaf - above) * xpow(inner, p_prime - 1.0)
            above += self.bar.weight(key)
        return total

    def maximal(self, x) -> float:
        best = 0.0
        for key in self.window.chain_keys(x):
            sig = self.sigma_mass.get(key, 0.0)
            if sig <= 0.0:
                continue  # term is zero by the sigma(Q) = 0 convention
            val = self.subtree(key) / sig
            if val > best:
                best = val
        return best


# -- functional surface -------------------------------------------------------------


def t_dyadic(K: DyadicKernelMap, nu: AtomicMeasure, window: LatticeWindow, x) -> float:
    """``T[nu](x) = sum_{x in Q} K(Q) nu(Q)`` over the window chain of ``x``."""
    if not window.contains_point(x):
        raise OutOfWindowError(f"point {tuple(x)} outside window")
    table = cube_mass_table(nu, window)
    total = 0.0
    for key in window.chain_keys(x):
        m = table.get(key, 0.0)
        if m > 0.0:
            total += K(key) * m
    return total


def energy_dyadic(
    K: DyadicKernelMap,
    mu: AtomicMeasure,
    sigma: AtomicMeasure,
    exps: Exponents,
    window: LatticeWindow,
) -> float:
    """``E = int T[mu]^{p'} dsigma``, exact for atomic ``sigma``."""
    scene = DyadicScene(K, sigma, mu, window)
    pp = exps.p_prime
    total = 0.0
    for pos, w in zip(sigma.positions, sigma.weights):
        if w <= 0.0 or not window.contains_point(pos):
            continue
        total += w * xpow(scene.t_mu(pos), pp)
    return total


def wolff_dyadic(
    K: DyadicKernelMap,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    exps: Exponents,
    window: LatticeWindow,
    x,
) -> float:
    """Dyadic Wolff potential ``W(x)`` (see module docstring)."""
    if not window.contains_point(x):
        raise OutOfWindowError(f"point {tuple(x)} outside window")
    return DyadicScene(K, sigma, mu, window).wolff(x, exps.p_prime)


def wolff_bar_dyadic(
    K: DyadicKernelMap,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    exps: Exponents,
    window: LatticeWindow,
    x,
) -> float:
    """Bar-kernel Wolff potential ``Wbar(x) >= W(x)``."""
    if not window.contains_point(x):
        raise OutOfWindowError(f"point {tuple(x)} outside window")
    return DyadicScene(K, sigma, mu, window).wolff_bar(x, exps.p_prime)


def maximal_dyadic(
    K: DyadicKernelMap,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    window: LatticeWindow,
    x,
) -> float:
    """Kernel maximal function ``M(x)`` over the ancestor chain of ``x``."""
    if not window.contains_point(x):
        raise OutOfWindowError(f"point {tuple(x)} outside window")
    return DyadicScene(K, sigma, mu, window).maximal(x)


def hl_maximal_dyadic(
    sigma: AtomicMeasure, nu: AtomicMeasure, window: LatticeWindow, x
) -> float:
    """Dyadic Hardy-Littlewood maximal function ``sup_{x in Q} nu(Q)/sigma(Q)``."""
    if not window.contains_point(x):
        raise OutOfWindowError(f"point {tuple(x)} outside window")
    sig = cube_mass_table(sigma, window)
    nut = cube_mass_table(nu, window)
    best = None
    for key in window.chain_keys(x):
        s = sig.get(key, 0.0)
        if s <= 0.0:
            continue
        val = nut.get(key, 0.0) / s
        if best is None or val > best:
            best = val
    if best is None:
        raise DegenerateInputError("chain of x carries no sigma mass")
    return best


def lambda_substitution(
    K: DyadicKernelMap,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    window: LatticeWindow,
) -> dict[Key, float]:
    """The weights ``lambda_Q = K(Q) mu(Q) sigma(Q)`` on their sparse support."""
    sig = cube_mass_table(sigma, window)
    mut = cube_mass_table(mu, window)
    lam: dict[Key, float] = {}
    for key, mm in mut.items():
        sm = sig.get(key, 0.0)
        if sm > 0.0 and mm > 0.0:
            val = K(key) * sm * mm
            if val > 0.0:
                lam[key] = val
    return lam


def a_functionals(
    lam: dict,
    sigma: AtomicMeasure,
    s: float,
    window: LatticeWindow,
) -> tuple[float, float, float]:
    """The three equivalent aggregates of a per-cube weight family.

    ``A1 = int (sum_Q lambda_Q/sigma(Q) chi_Q)^s dsigma``,
    ``A2 = sum_Q lambda_Q ((1/sigma(Q)) sum_{Q' subset Q} lambda_{Q'})^{s-1}``,
    ``A3 = int sup_{x in Q} ((1/sigma(Q)) sum_{Q' subset Q} lambda_{Q'})^s dsigma``.

    Weights on cubes with ``sigma(Q) = 0`` are forced to zero.
    """
    if not (s > 1.0):
        raise WolffpotError(f"need s > 1, got {s}")
    sig = cube_mass_table(sigma, window)
    norm: dict[Key, float] = {}
    for k, v in lam.items():
        key = k if isinstance(k, tuple) and len(k) == 2 and isinstance(k[0], int) else k.key
        if v < 0:
            raise WolffpotError("lambda weights must be nonnegative")
        if v > 0.0 and sig.get(key, 0.0) > 0.0:
            norm[key] = float(v)

    # subtree sums Lambda(Q) = sum_{Q' subset Q} lambda_{Q'} on an ancestor-closed support
    subtree: dict[Key, float] = dict(norm)
    for key in sorted(norm, key=lambda kk: -kk[0]):
        k = key
        while True:
            parent = window.parent_key(k)
            if parent is None:
                break
            subtree.setdefault(parent, 0.0)
            k = parent
    for key in sorted(subtree, key=lambda kk: -kk[0]):
        parent = window.parent_key(key)
        if parent is not None:
            subtree[parent] = subtree.get(parent, 0.0) + subtree[key]

    a2 = 0.0
    for key, l in norm.items():
        a2 += l * xpow(subtree[key] / sig[key], s - 1.0)

    a1 = 0.0
    a3 = 0.0
    for pos, w in zip(sigma.positions, sigma.weights):
        if w <= 0.0 or not window.contains_point(pos):
            continue
        chain_sum = 0.0
        sup_ratio = 0.0
        for key in window.chain_keys(pos):
            sg = sig.get(key, 0.0)
            if sg <= 0.0:
                continue
            chain_sum += norm.get(key, 0.0) / sg
            ratio = subtree.get(key, 0.0) / sg
            if ratio > sup_ratio:
                sup_ratio = ratio
        a1 += w * xpow(chain_sum, s)
        a3 += w * xpow(sup_ratio, s)
    return a1, a2, a3


# -- continuous (radial) operations ------------------------------------------------


def t_continuous_trunc(kernel: RadialKernel, nu: AtomicMeasure, R: float, x) -> float:
    """Truncated convolution ``T_k^R[nu](x) = sum_{|x-y| <= R} k(|x-y|) w_y``."""
    if R <= 0:
        raise WolffpotError(f"truncation radius must be positive, got {R}")
    if nu.n_atoms == 0:
        return 0.0
    d = np.linalg.norm(nu.positions - np.asarray(x, dtype=float), axis=1)
    total = 0.0
    for dist, w in zip(d, nu.weights):
        if dist > R or w <= 0.0:
            continue
        total += w * (kernel.limit_at_zero if dist == 0.0 else kernel(float(dist)))
        if math.isinf(total):
            return math.inf
    return total


def energy_continuous(
    kernel: RadialKernel, mu: AtomicMeasure, sigma: AtomicMeasure, exps: Exponents
) -> float:
    """``E_k = int T_k[mu]^{p'} dsigma`` (untruncated), exact for atomic data."""
    pp = exps.p_prime
    total = 0.0
    for pos, w in zip(sigma.positions, sigma.weights):
        if w <= 0.0:
            continue
        total += w * xpow(t_continuous_trunc(kernel, mu, math.inf, pos), pp)
        if math.isinf(total):
            return math.inf
    return total


def wolff_continuous(
    kernel: RadialKernel,
    sigma: AtomicMeasure,
    mu: AtomicMeasure,
    exps: Exponents,
    x,
    R: float = math.inf,
) -> float:
    """Continuous Wolff potential ``W_k^R(x)``, exact per radial segment.

    The radii where any ingredient jumps are the distances from ``x`` to the
    sigma- and mu-atoms and from each mu-atom to the sigma-atoms.  Between
    consecutive jump radii every ball mass is constant, so the inner integral
    is affine in ``u(r) = int k ds/s`` and the whole segment integrates in
    closed form:

        ``int k(r) S (A + B u(r))^{p'-1} dr/r = S [(A+Bu)^{p'} - A^{p'}]/(p' B)``.

    No outer quadrature is needed; only kernels without a closed-form
    log-primitive introduce quadrature error (inside ``u``).
    """
    if R <= 0:
        raise WolffpotError(f"truncation radius must be positive, got {R}")
    pp = exps.p_prime
    x = np.asarray(x, dtype=float)
    upper = R if kernel.cutoff is None else min(R, kernel.cutoff)
    if not math.isfinite(upper):
        upper = math.inf

    dx_sigma = (
        np.linalg.norm(sigma.positions - x, axis=1) if sigma.n_atoms else np.zeros(0)
    )
    dx_mu = np.linalg.norm(mu.positions - x, axis=1) if mu.n_atoms else np.zeros(0)
    track = (
        (dx_mu <= upper) & (mu.weights > 0.0)
        if math.isfinite(upper)
        else (mu.weights > 0.0)
    )
    mu_pos = mu.positions[track]
    mu_w = mu.weights[track]
    mu_dist = dx_mu[track]
    m = mu_pos.shape[0]

    # distances from each tracked mu-atom to every sigma-atom
    if m and sigma.n_atoms:
        cross = np.linalg.norm(mu_pos[:, None, :] - sigma.positions[None, :, :], axis=2)
    else:
        cross = np.zeros((m, 0))

    bps = [dx_sigma, mu_dist, cross.ravel()]
    if math.isfinite(upper):
        bps.append(np.array([upper]))
    breakpoints = np.unique(np.concatenate(bps))
    breakpoints = breakpoints[(breakpoints > 0.0)]
    if math.isfinite(upper):
        breakpoints = breakpoints[breakpoints <= upper]
    else:
        breakpoints = np.append(breakpoints, np.inf)
    if breakpoints.size == 0:
        return 0.0

    sw = sigma.weights
    N = np.zeros(m)  # int_0^r k(s) sigma(B(b, s)) ds/s per tracked mu-atom b
    # sigma-atoms coincident with a mu-atom belong to every ball around it
    M = ((cross <= 0.0) @ sw) if m and sigma.n_atoms else np.zeros(m)
    S = float(np.sum(sw[dx_sigma <= 0.0])) if sigma.n_atoms else 0.0
    total = 0.0
    prev = 0.0
    for b in breakpoints:
        a = prev
        L = kernel.log_primitive(a, float(b))
        active = mu_dist <= a
        if L > 0.0 and S > 0.0 and np.any(active):
            act_w = mu_w[active]
            act_M = M[active]
            act_N = N[active]
            pos = act_M > 0.0
            if np.any(np.isinf(act_N[pos])):
                return math.inf
            A = float(np.sum(act_w[pos] * act_N[pos] / act_M[pos]))
            B = float(np.sum(act_w[pos]))
            if math.isinf(L):
                if A > 0.0 or B > 0.0:
                    return math.inf
            elif B > 0.0:
                total += S * (xpow(A + B * L, pp) - xpow(A, pp)) / (pp * B)
            elif A > 0.0:
                total += S * xpow(A, pp - 1.0) * L
            if math.isinf(total):
                return math.inf
        # accrue the inner numerators over the segment (ball masses constant)
        if m and L > 0.0:
            if math.isinf(L):
                N = np.where(M > 0.0, math.inf, N)
            else:
                N = N + np.where(M > 0.0, M * L, 0.0)
        if not math.isinf(b):
            # jump events at radius b (balls are closed)
            if sigma.n_atoms:
                S += float(np.sum(sw[dx_sigma == b]))
            if m and cross.size:
                M = M + (cross == b) @ sw
        prev = float(b)
    return total


def m_k_maximal(kernel: RadialKernel, sigma: AtomicMeasure, mu: AtomicMeasure, x) -> float:
    """Kernel maximal function ``M_k(x) = sup_{r>0} bar_k(r)(x) mu(B(x,r))``.

    Between consecutive atom distances both ball masses are constant while the
    bar-kernel numerator grows, so the supremum over each segment sits at its
    endpoints (the point value at the left end, the left-limit at the right
    end); the scan over this finite candidate set is exact.  The final
    unbounded segment contributes its limit value, which is finite exactly
    when ``int^inf k(s) ds/s`` is.
    """
    x = np.asarray(x, dtype=float)
    sd, scum = sigma.radial_profile(x)
    md, mcum = mu.radial_profile(x)
    if md.size == 0 or sd.size == 0:
        return 0.0
    radii = np.unique(np.concatenate([sd, md]))
    radii = radii[radii >= 0.0]
    best = 0.0
    num = 0.0

    def sigma_at(r):  # closed-ball sigma mass
        i = np.searchsorted(sd, r, side="right") - 1
        return float(scum[i]) if i >= 0 else 0.0

    def mu_at(r):
        i = np.searchsorted(md, r, side="right") - 1
        return float(mcum[i]) if i >= 0 else 0.0

    for j, r in enumerate(radii):
        den = sigma_at(r)
        mb = mu_at(r)
        if den > 0.0 and mb > 0.0 and num > 0.0:
            best = max(best, (num / den) * mb)  # point value at r (numerator continuous)
        nxt = radii[j + 1] if j + 1 < len(radii) else math.inf
        if den > 0.0:
            seg = kernel.log_primitive(float(r), float(nxt))
            new_num = num + den * seg if seg > 0.0 else num
            if mb > 0.0 and seg > 0.0:
                best = max(best, (new_num / den) * mb)  # left limit at nxt / r->inf limit
            num = new_num
        if math.isinf(num):
            # bar_k is infinite from here on; mu is nonempty, so the sup is too
            return math.inf
    return best
