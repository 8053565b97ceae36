"""Analytic self-checks run by ``fdasec verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dm import dm_field, synthesize_excitation
from .fda import fda_field, fda_field_grid, peak_locus_range, quadratic_phase_bound
from .model import ArrayConfig, ObservationPoint, PhaseMode, Scenario, steering_vector
from .phase import carrier_cycles, element_cycles
from .receiver import received_basebands, transmission
from .scenario import ScenarioFile
from .sweep import Axis, GridSpec, sweep


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str          # PASS, FAIL or SKIP
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != "FAIL"


def _check(name, residual, tol, detail=""):
    ok = bool(np.isfinite(residual) and residual < tol)
    return CheckResult(name, "PASS" if ok else "FAIL", float(residual), float(tol), detail)


def dyadic_shift_cases(n: int, seed: int, r_range=(1e3, 1e5), t_max=1e-3, tau_max=1e-4, c=3e8):
    """(r1, t, tau) triples for which r1 + c*tau and t + tau are exact in float64.

    All values are integer multiples of 2**-30 (s or m) and c is an integer,
    so the shifted observation point is exactly the propagated one and any
    discrepancy is the field evaluator's own error.
    """
    rng = np.random.default_rng(seed)
    q = 2.0 ** -30
    out = []
    while len(out) < n:
        r1 = float(np.round(rng.uniform(*r_range) / q)) * q
        t = float(np.round(rng.uniform(-t_max, t_max) / q)) * q
        tau = float(np.round(rng.uniform(-tau_max, tau_max) / q)) * q
        if r1 + c * tau <= 0:
            continue
        assert (r1 + c * tau) - c * tau == r1 and (t + tau) - tau == t
        out.append((r1, t, tau))
    return out


def check_dm_peak(cfg: ArrayConfig, scn: Scenario) -> CheckResult:
    dm_cfg = replace(cfg, delta_f=0.0)
    tx = transmission(dm_cfg, scn)
    h0 = steering_vector(dm_cfg, scn.theta0)
    worst = 0.0
    for r1, t in [(scn.range0, 0.0), (0.77 * scn.range0, 3.3e-6), (2.1 * scn.range0, -1.7e-5)]:
        obs = ObservationPoint(scn.theta0, r1, t)
        carrier = np.exp(2j * np.pi * carrier_cycles(dm_cfg, r1, t))
        for d, w in zip(tx.symbols, tx.noise):
            e = dm_field(dm_cfg, synthesize_excitation(scn, h0, d, w), obs)
            worst = max(worst, abs(e - scn.p * cfg.n_elements * d * carrier))
    return _check("dm_peak_gain", worst / (scn.p * cfg.n_elements), 1e-10,
                  "delta_f=0 field at theta0 equals p*N*D*carrier")


def check_beam_gain(cfg: ArrayConfig) -> CheckResult:
    if cfg.delta_f == 0:
        return CheckResult("fda_peak_gain", "SKIP", 0.0, 1e-9, "needs delta_f != 0")
    unit = np.ones(cfg.n_elements)
    worst = 0.0
    for theta in np.linspace(0.1, math.pi - 0.1, 7):
        for t in (0.0, 1.3e-5, -4.1e-5):
            for z in range(-6, 7):
                r1 = peak_locus_range(cfg, theta, t, z)
                if r1 <= 0:
                    continue
                b = fda_field(cfg, unit, ObservationPoint(theta, r1, t))
                worst = max(worst, abs(abs(b) - cfg.n_elements))
    return _check("fda_peak_gain", worst, 1e-9, "|B| = N on the peak locus")


def check_secure_spot(cfg: ArrayConfig, scn: Scenario) -> CheckResult:
    cycles = cfg.delta_f * scn.range0 / cfg.c
    if abs(cycles - round(cycles)) > 1e-9:
        return CheckResult("secure_spot", "SKIP", 0.0, 1e-9,
                           "delta_f*R/c is not an integer; the focusing identity does not apply")
    tx = transmission(cfg, scn)
    obs = ObservationPoint(scn.theta0, scn.range0, 0.0)
    e = fda_field_grid(cfg, tx.excitations, obs.theta, obs.range, obs.time)
    carrier = np.exp(2j * np.pi * carrier_cycles(cfg, scn.range0, 0.0))
    expected = scn.p * cfg.n_elements * tx.symbols * carrier
    return _check("secure_spot", float(np.max(np.abs(e - expected))), 1e-9,
                  "E(theta0, R, 0) = p*N*D*exp(-j2pi f0 R/c)")


def check_quadratic_bound(cfg: ArrayConfig, seed: int) -> list[CheckResult]:
    bound = quadratic_phase_bound(cfg)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0, math.pi, 1000)
    r1 = rng.uniform(1e3, 1e5, 1000)
    t = rng.uniform(-1e-4, 1e-4, 1000)
    ce = element_cycles(cfg, theta, r1, t, PhaseMode.EXACT)
    ca = element_cycles(cfg, theta, r1, t, PhaseMode.DROP_QUADRATIC)
    dphi = np.abs(((ce - ca) + 0.5) % 1.0 - 0.5) * 360.0
    unit = np.ones(cfg.n_elements)
    be = fda_field_grid(cfg, unit, theta, r1, t, PhaseMode.EXACT)
    ba = fda_field_grid(cfg, unit, theta, r1, t, PhaseMode.DROP_QUADRATIC)
    return [
        _check("quadratic_term_bound", max(float(dphi.max()) - bound, 0.0), 1e-9,
               f"dropped phase <= {bound:.6f} deg"),
        _check("mode_agreement", float(np.max(np.abs(be - ba))) / cfg.n_elements, 1e-3,
               "|exact - approx| < 1e-3*N"),
    ]


def check_propagation(cfg: ArrayConfig, scn: Scenario, seed: int) -> list[CheckResult]:
    tx = transmission(cfg, scn)
    rng = np.random.default_rng(seed + 1)
    out = []
    for mode in PhaseMode:
        worst = 0.0
        for r1, t, tau in dyadic_shift_cases(200, seed, c=cfg.c):
            theta = rng.uniform(0, math.pi)
            a = fda_field_grid(cfg, tx.excitations, theta, r1, t, mode)
            b = fda_field_grid(cfg, tx.excitations, theta, r1 + cfg.c * tau, t + tau, mode)
            worst = max(worst, float(np.max(np.abs(a - b) / (1 + np.abs(a)))))
        out.append(_check(f"propagation_invariance_{mode.value}", worst, 1e-10,
                          "E(theta, r1 + c tau, t + tau) = E(theta, r1, t)"))
    return out


def check_interception(cfg: ArrayConfig, scn: Scenario, mode: PhaseMode) -> CheckResult:
    tx = transmission(cfg, scn)
    legit = received_basebands(cfg, scn, ObservationPoint(scn.theta0, scn.range0, 0.0), mode, tx=tx)
    r_e = 1.2 * scn.range0
    eave = received_basebands(cfg, scn, ObservationPoint(scn.theta0, r_e, (r_e - scn.range0) / cfg.c),
                              mode, tx=tx)
    return _check("eavesdropper_replay", float(np.max(np.abs(eave - legit))), 1e-10,
                  f"receiver at {r_e:g} m sampling (R_e - R)/c later sees the same symbols")


def check_special_cases(cfg: ArrayConfig, scn: Scenario, mode: PhaseMode, seed: int) -> list[CheckResult]:
    pure_dm = replace(cfg, delta_f=0.0)
    grid = GridSpec(Axis.fixed(scn.theta0), Axis(0.5 * scn.range0, 1.5 * scn.range0, 201))
    res = sweep(pure_dm, scn, grid, mode)
    spread = float(np.ptp(res.evm))
    rng = np.random.default_rng(seed + 2)
    no_an = replace(scn, q=0.0)
    tx = transmission(cfg, no_an)
    theta = rng.uniform(0, math.pi, 1000)
    r1 = rng.uniform(1e3, 1e5, 1000)
    t = rng.uniform(-1e-4, 1e-4, 1000)
    an = fda_field_grid(cfg, no_an.q * tx.noise, theta, r1, t, mode)
    return [
        _check("special_case_no_offset", spread, 1e-10, "delta_f=0: EVM constant along range at theta0"),
        _check("special_case_no_noise", float(np.max(np.abs(an))), 1e-12, "q=0: noise sum vanishes"),
    ]


def run_checks(sf: ScenarioFile) -> list[CheckResult]:
    cfg, scn, mode = sf.array, sf.scenario, sf.phase_mode
    seed = scn.seed
    results = [check_dm_peak(cfg, scn), check_beam_gain(cfg), check_secure_spot(cfg, scn)]
    results += check_quadratic_bound(cfg, seed)
    results += check_propagation(cfg, scn, seed)
    results.append(check_interception(cfg, scn, mode))
    results += check_special_cases(cfg, scn, mode, seed)
    return results
