"""Independent checks on the scattering engine.

* :func:`term2b_quadrature_3d` integrates the thermal-thermal term over
  momentum magnitude and polar angle numerically, with no analytic angular
  step.
* :func:`term2b_monte_carlo` estimates the same integral by importance
  sampling.
* :class:`BoxModel` replaces the continuum by the single-particle modes of a
  periodic box. :func:`box_rate` sums ``n_i (n_f + 1)`` directly and
  :func:`stimulated_energy_balance` checks that Bose-stimulated transitions
  move no net energy.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .bose_math import bose_factor, zeta_three_halves
from .config import QuadratureConfig
from .errors import ConvergenceError, DomainError
from .scattering import _bose, _quad, momentum_cutoff

__all__ = [
    "term2b_quadrature_3d",
    "term2b_monte_carlo",
    "BoxModel",
    "build_box_model",
    "box_model_for_delta",
    "box_rate",
    "box_rate_components",
    "EnergyBalance",
    "stimulated_energy_balance",
    "BoxCutoffWarning",
    "TARGET_DENSITY",
]

# particles per unit volume at T_c, hbar = 1: zeta(3/2) / (2 pi)^{3/2}
TARGET_DENSITY = zeta_three_halves() / (2.0 * math.pi) ** 1.5

_MC_CHUNK = 1 << 18
_MC_BINS = 4096


class BoxCutoffWarning(UserWarning):
    """Occupancy at the edge of the mode box is not negligible."""


# --------------------------------------------------------------------------
# direct quadrature


def term2b_quadrature_3d(point, thermo, config=None):
    """Thermal-thermal term by nested adaptive quadrature.

    After removing ``p'`` with the momentum delta function the integrand is
    ``n(p) n(|p - delta|)``; both the radial and the polar integrals are
    done numerically. Returns ``(value, abserr)`` normalized like
    :func:`bosescatter.scattering.thermal_thermal_term`.
    """
    config = config or QuadratureConfig()
    delta, tau, eps = point.delta, point.tau, thermo.eps
    two_tau = 2.0 * tau
    inner_tol = max(config.rel_tol * 1e-2, 1e-12)
    outer = QuadratureConfig(rel_tol=max(config.rel_tol, 1e-9),
                             max_subdivisions=config.max_subdivisions,
                             n_total_convention=config.n_total_convention,
                             p_truncation_multiplier=config.p_truncation_multiplier)

    def polar(p):
        # t = 1 - cos(angle between p and delta); |p - delta|^2 = (p-delta)^2 + 2 p delta t
        base = (p - delta) ** 2
        cross = 2.0 * p * delta

        def g(t):
            return _bose((base + cross * t) / two_tau + eps)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(g, 0.0, 2.0, epsabs=0.0, epsrel=inner_tol,
                                    limit=config.max_subdivisions)
        return val

    def radial(p):
        if p == 0.0:
            return 0.0
        return 2.0 * math.pi * p * p * _bose(p * p / two_tau + eps) * polar(p)

    upper = momentum_cutoff(tau, config) + delta
    breaks = (1e-4, 1e-3, 1e-2, 1e-1, delta)
    value, err = _quad(radial, 0.0, upper, breaks, outer, "quad3d")
    return value / thermo.n_total, err / thermo.n_total


# --------------------------------------------------------------------------
# Monte Carlo


def _radial_table(tau, eps, r_max):
    # Piecewise-uniform radial density. Bin weights only need to be roughly
    # proportional to the Bose radial profile: the estimator divides by the
    # exact tabulated density, so the table never biases the result.
    edges = np.concatenate(([0.0], np.geomspace(1e-5 * r_max, r_max, _MC_BINS)))
    mid = 0.5 * (edges[1:] + edges[:-1])
    width = np.diff(edges)
    mass = 4.0 * np.pi * mid ** 2 * bose_factor(mid ** 2 / (2.0 * tau) + eps) * width
    mass = np.maximum(mass, 1e-300)
    prob = mass / mass.sum()
    cdf = np.cumsum(prob)
    cdf[-1] = 1.0
    return edges, width, prob, cdf


def _radial_density_3d(r, edges, width, prob):
    idx = np.searchsorted(edges, r, side="right") - 1
    inside = (idx >= 0) & (idx < len(prob))
    idx = np.clip(idx, 0, len(prob) - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = prob[idx] / (width[idx] * 4.0 * np.pi * r * r)
    return np.where(inside, dens, 0.0)


def term2b_monte_carlo(point, thermo, samples, seed, config=None):
    """Importance-sampled estimate of the thermal-thermal term.

    Momenta are drawn from the tabulated Bose distribution centred, with
    equal probability, on 0 or on ``delta`` (the two places where the
    integrand peaks). The weight is the integrand over that mixture
    density, which stays bounded even at fugacity one; sampling around 0
    alone would give the estimator infinite variance there.

    Returns ``(estimate, standard_error)``. Bit-for-bit deterministic for a
    given ``seed``: samples are drawn in fixed-size chunks from a single
    PCG64 stream and accumulated in order.
    """
    if samples < 10_000:
        raise DomainError("need at least 10^4 samples")
    config = config or QuadratureConfig()
    delta, tau, eps = point.delta, point.tau, thermo.eps
    r_max = momentum_cutoff(tau, config)
    edges, width, prob, cdf = _radial_table(tau, eps, r_max)
    rng = np.random.Generator(np.random.PCG64(seed))
    shift = np.array([0.0, 0.0, delta])
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(_MC_CHUNK, samples - done)
        bins = np.searchsorted(cdf, rng.random(m), side="right")
        bins = np.minimum(bins, len(prob) - 1)
        r = edges[bins] + width[bins] * rng.random(m)
        cos_t = 2.0 * rng.random(m) - 1.0
        phi = 2.0 * np.pi * rng.random(m)
        sin_t = np.sqrt(1.0 - cos_t ** 2)
        x = np.stack((r * sin_t * np.cos(phi), r * sin_t * np.sin(phi), r * cos_t), axis=1)
        x += np.where(rng.random(m) < 0.5, 0.0, 1.0)[:, None] * shift
        r0 = np.linalg.norm(x, axis=1)
        r1 = np.linalg.norm(x - shift, axis=1)
        q = 0.5 * (_radial_density_3d(r0, edges, width, prob)
                   + _radial_density_3d(r1, edges, width, prob))
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            f = bose_factor(r0 ** 2 / (2 * tau) + eps) * bose_factor(r1 ** 2 / (2 * tau) + eps)
            w = np.where(f > 0.0, f / q, 0.0)
        total += float(np.sum(w))
        total_sq += float(np.sum(w * w))
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    stderr = math.sqrt(var / samples)
    return mean / thermo.n_total, stderr / thermo.n_total


# --------------------------------------------------------------------------
# discrete momentum box


@dataclass
class BoxModel:
    """Mean occupancies of the plane-wave modes of a cubic periodic box.

    Mode ``(i, j, k)`` has momentum ``(2 pi / box_scale) (i, j, k)`` and
    lives at ``occupancies[i + max_mode, j + max_mode, k + max_mode]``.
    Below ``tau = 1`` the zero mode carries the condensate.
    """

    box_scale: float
    max_mode: int
    tau: float
    fugacity: float
    occupancies: np.ndarray = field(repr=False)

    @property
    def spacing(self):
        return 2.0 * math.pi / self.box_scale

    @property
    def volume(self):
        return self.box_scale ** 3

    def occupancy(self, mode):
        m = self.max_mode
        i, j, k = mode
        if max(abs(i), abs(j), abs(k)) > m:
            return 0.0
        return float(self.occupancies[i + m, j + m, k + m])

    @property
    def condensate_occupancy(self):
        return self.occupancy((0, 0, 0))

    def energies(self):
        """Kinetic energy ``p^2 / 2`` of every mode, shaped like ``occupancies``."""
        n = np.arange(-self.max_mode, self.max_mode + 1) * self.spacing
        return 0.5 * (n[:, None, None] ** 2 + n[None, :, None] ** 2 + n[None, None, :] ** 2)

    def boundary_occupancy(self):
        occ = self.occupancies
        return float(max(occ[0].max(), occ[-1].max(), occ[:, 0].max(),
                         occ[:, -1].max(), occ[:, :, 0].max(), occ[:, :, -1].max()))

    def density(self):
        return float(self.occupancies.sum()) / self.volume


def build_box_model(tau, box_scale, max_mode, density=TARGET_DENSITY):
    """Occupancies at fixed ``density`` in a box of side ``box_scale``.

    Above ``tau = 1`` the fugacity is tuned by root bracketing on the
    discrete particle sum. At and below it the fugacity is one, the
    excited modes take Bose occupancies and the zero mode holds the rest.
    """
    if not tau > 0:
        raise DomainError("tau must be positive")
    if max_mode < 1 or box_scale <= 0:
        raise DomainError("box needs max_mode >= 1 and positive box_scale")
    x = BoxModel(box_scale, max_mode, tau, 1.0, np.zeros((1, 1, 1))).energies() / tau
    centre = (max_mode,) * 3
    target = density * box_scale ** 3

    if tau <= 1.0:
        x[centre] = np.inf
        occ = bose_factor(x)
        excited = float(occ.sum())
        if excited > target:
            raise DomainError(f"box too coarse: excited modes already hold {excited:.4g} "
                              f"> {target:.4g} particles")
        occ[centre] = target - excited
        return _finish_box(box_scale, max_mode, tau, 1.0, occ)

    def excess(e):
        return float(bose_factor(x + e).sum()) - target

    hi = 1.0
    while excess(hi) > 0.0:
        hi *= 2.0
    lo = 1e-3
    while excess(lo) < 0.0:
        lo *= 1e-3  # the zero-mode term 1/(e^eps - 1) grows without bound
    try:
        eps = optimize.brentq(excess, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=200)
    except RuntimeError as exc:
        raise ConvergenceError(f"box fugacity not found: {exc}", term="box") from exc
    return _finish_box(box_scale, max_mode, tau, math.exp(-eps), bose_factor(x + eps))


def _finish_box(box_scale, max_mode, tau, lam, occ):
    model = BoxModel(box_scale, max_mode, float(tau), lam, occ)
    edge = model.boundary_occupancy()
    if edge > 1e-12:
        warnings.warn(f"boundary mode occupancy {edge:.2e} exceeds 1e-12; "
                      f"raise max_mode", BoxCutoffWarning, stacklevel=3)
    return model


def box_model_for_delta(delta, tau, modes_per_delta, max_mode):
    """Box in which ``(0, 0, modes_per_delta)`` has momentum exactly ``delta``."""
    box_scale = 2.0 * math.pi * modes_per_delta / delta
    return build_box_model(tau, box_scale, max_mode)


def _shifted_product(occ, mode):
    # sum_i n_i n_{i - mode} over pairs that both lie in the box
    src = []
    dst = []
    for s in mode:
        s = int(s)
        if s >= 0:
            src.append(slice(s, None))
            dst.append(slice(None, occ.shape[0] - s))
        else:
            src.append(slice(None, occ.shape[0] + s))
            dst.append(slice(-s, None))
    return occ[tuple(src)], occ[tuple(dst)]


def box_rate_components(model, delta_mode):
    """Split ``sum_i n_i (n_{i-delta} + 1) / N`` into its three pieces.

    Summands with the initial or the final state at p = 0 go to
    ``condensate``; the remaining stimulated summands to ``thermal_thermal``.
    """
    delta_mode = tuple(int(v) for v in delta_mode)
    if delta_mode == (0, 0, 0):
        raise DomainError("delta_mode must be non-zero")
    if max(abs(v) for v in delta_mode) > 2 * model.max_mode:
        raise DomainError("delta_mode lies outside the box")
    edge = model.boundary_occupancy()
    if edge > 1e-12:
        warnings.warn(f"boundary mode occupancy {edge:.2e} exceeds 1e-12",
                      BoxCutoffWarning, stacklevel=2)
    occ = model.occupancies
    n_box = float(occ.sum())
    a, b = _shifted_product(occ, delta_mode)
    stimulated = float(np.sum(a * b))
    n0 = model.condensate_occupancy
    cond = n0 * (model.occupancy(delta_mode) + model.occupancy(tuple(-v for v in delta_mode)))
    return {
        "unstimulated": 1.0,
        "thermal_thermal": (stimulated - cond) / n_box,
        "condensate": cond / n_box,
        "total": 1.0 + stimulated / n_box,
    }


def box_rate(model, delta_mode):
    """Discrete analogue of ``R``: ``sum_i n_i (n_{i - delta} + 1) / sum_i n_i``."""
    return box_rate_components(model, delta_mode)["total"]


# --------------------------------------------------------------------------
# energy bookkeeping


@dataclass(frozen=True)
class EnergyBalance:
    """Net energy moved into the gas per unit rate.

    ``stimulated`` is the ``n_i n_f`` part, ``unstimulated`` the ``n_i``
    part, ``gross`` the total energy carried by stimulated transitions in
    either direction (the scale against which ``stimulated`` is zero).
    """

    stimulated: float
    unstimulated: float
    gross: float
    transitions: float


def _correlate(a, b):
    # c[d] = sum_i a_i b_{i+d} for every lattice offset d, via zero-padded FFTs
    shape = [2 * s - 1 for s in a.shape]
    axes = (0, 1, 2)
    fa = np.fft.rfftn(a[::-1, ::-1, ::-1], shape, axes=axes)
    fb = np.fft.rfftn(b, shape, axes=axes)
    return np.fft.irfftn(fa * fb, shape, axes=axes)


def stimulated_energy_balance(model, transfers=None):
    """Energy flow ``sum n_i n_f (E_f - E_i)`` over ordered pairs ``(i, f)``.

    With ``transfers=None`` every pair of box modes is included (all
    momentum transfers representable in the box). Otherwise ``transfers``
    is a list of mode offsets ``f - i``; it is closed under negation before
    summing, since an isotropic probe sends ``i -> i + d`` and ``i -> i - d``
    alike.

    The stimulated sum vanishes because its kernel ``n_i n_f`` is symmetric
    in ``(i, f)`` while ``E_f - E_i`` is antisymmetric. The unstimulated sum
    ``sum n_i (E_f - E_i)`` is positive: recoil always heats.
    """
    occ = model.occupancies
    energy = model.energies()
    ne = occ * energy
    if transfers is None:
        # per-transfer sums for all offsets d = f - i at once
        gain = _correlate(occ, ne)   # sum_i n_i n_{i+d} E_{i+d}
        loss = _correlate(ne, occ)   # sum_i n_i E_i n_{i+d}
        stimulated = float(np.sum(gain - loss))
        gross = float(np.sum(gain + loss))
        n_modes = occ.size
        unstimulated = float(occ.sum() * energy.sum() - n_modes * ne.sum())
        transitions = float(occ.sum()) * n_modes
        return EnergyBalance(stimulated, unstimulated, gross, transitions)

    offsets = {tuple(int(v) for v in d) for d in transfers}
    offsets |= {tuple(-v for v in d) for d in offsets}
    offsets.discard((0, 0, 0))
    stimulated = 0.0
    gross = 0.0
    unstimulated = 0.0
    transitions = 0.0
    for d in sorted(offsets):
        neg = tuple(-v for v in d)
        # pairs (i, f = i + d)
        n_i, n_f = _shifted_product(occ, neg)
        e_i, e_f = _shifted_product(energy, neg)
        stimulated += float(np.sum(n_i * n_f * (e_f - e_i)))
        gross += float(np.sum(n_i * n_f * (e_f + e_i)))
        unstimulated += float(np.sum(n_i * (e_f - e_i)))
        transitions += float(np.sum(n_i))
    return EnergyBalance(stimulated, unstimulated, gross, transitions)
