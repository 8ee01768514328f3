"""Time integration of the two-species relaxation system.

Space-homogeneous runs integrate the pure relaxation equations; 1-D runs
add first-order upwind transport on a periodic domain via Lie or Strang
splitting.  Two integrators are available:

RK4   classical four-stage update with targets rebuilt at every stage;
      accurate but not positivity preserving (negative excursions are
      flagged in the diagnostics, never clamped in the state).

EXP   freeze the moments at the step start, build the targets once and
      update f <- g* + (f - g*) exp(-nu_tot dt), where nu_tot is the
      total collision frequency of the species and g* the
      frequency-weighted average of its two targets.  First-order
      accurate and unconditionally positivity preserving.

A run owns its state exclusively; diagnostics reductions reuse the fixed
summation order of the moment routines, so runs are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import grid as gridmod
from .errors import CflError
from .grid import MomentSet, VelocityGrid, h_functional, match_gaussian, \
    match_moments, gaussian_on_grid, maxwellian_on_grid, _xlogx_sum
from .params import ModelParams, derive_frequencies, validate
from .targets import MixtureState, build_targets


@dataclass
class KineticState:
    """Distribution pair at one time; (cells, nodes) arrays for 1-D runs."""

    f1: np.ndarray
    f2: np.ndarray
    t: float
    grid: VelocityGrid
    dx: float | None = None


def _relax_pair(f1, f2, dt, params, grid, integrator, match):
    m1, m2 = params.species1.m, params.species2.m
    freq = derive_frequencies(params.interaction)

    def rhs(g1, g2):
        st = MixtureState.from_distributions(g1, g2, m1, m2, grid)
        ts = build_targets(st, params, grid, match)
        n1 = st.mom1.n if st.mom1 is not None else 0.0
        n2 = st.mom2.n if st.mom2 is not None else 0.0
        r1 = freq.nu11 * n1 * (ts.g1 - g1) + freq.nu12 * n2 * (ts.g12 - g1)
        r2 = freq.nu22 * n2 * (ts.g2 - g2) + freq.nu21 * n1 * (ts.g21 - g2)
        return r1, r2

    if integrator == "rk4":
        k1 = rhs(f1, f2)
        k2 = rhs(f1 + 0.5 * dt * k1[0], f2 + 0.5 * dt * k1[1])
        k3 = rhs(f1 + 0.5 * dt * k2[0], f2 + 0.5 * dt * k2[1])
        k4 = rhs(f1 + dt * k3[0], f2 + dt * k3[1])
        f1n = f1 + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        f2n = f2 + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        return f1n, f2n

    if integrator != "exp":
        raise ValueError(f"unknown integrator {integrator!r}")
    st = MixtureState.from_distributions(f1, f2, m1, m2, grid)
    ts = build_targets(st, params, grid, match)
    n1 = st.mom1.n if st.mom1 is not None else 0.0
    n2 = st.mom2.n if st.mom2 is not None else 0.0

    def exp_update(f, g_self, g_cross, nu_self, nu_cross):
        nu_tot = nu_self + nu_cross
        if nu_tot <= 0.0:
            return f.copy()
        gstar = (nu_self * g_self + nu_cross * g_cross) / nu_tot
        return gstar + (f - gstar) * math.exp(-nu_tot * dt)

    f1n = exp_update(f1, ts.g1, ts.g12, freq.nu11 * n1, freq.nu12 * n2)
    f2n = exp_update(f2, ts.g2, ts.g21, freq.nu22 * n2, freq.nu21 * n1)
    return f1n, f2n


def relax_step(state: KineticState, dt: float, params: ModelParams,
               integrator: str = "exp", match: bool = True) -> KineticState:
    """One relaxation step; loops over cells for 1-D states."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive (got {dt})")
    if state.f1.ndim == 2:
        f1n = np.empty_like(state.f1)
        f2n = np.empty_like(state.f2)
        for j in range(state.f1.shape[0]):
            f1n[j], f2n[j] = _relax_pair(state.f1[j], state.f2[j], dt,
                                         params, state.grid, integrator,
                                         match)
    else:
        f1n, f2n = _relax_pair(state.f1, state.f2, dt, params, state.grid,
                               integrator, match)
    return KineticState(f1=f1n, f2=f2n, t=state.t + dt, grid=state.grid,
                        dx=state.dx)


def transport_step(state: KineticState, dt: float) -> KineticState:
    """First-order upwind advection step on the periodic 1-D domain.

    Updates every velocity node independently with donor-cell fluxes;
    the flux sum telescopes, so total mass per node is conserved to
    round-off.  A CFL number above one is a hard error.
    """
    if state.f1.ndim != 2 or state.dx is None:
        raise ValueError("transport requires a 1-D state with cell width")
    vx = state.grid.nodes[:, 0]
    cfl = float(np.max(np.abs(vx))) * dt / state.dx
    if cfl > 1.0 + 1e-12:
        raise CflError(f"CFL {cfl:.3f} exceeds 1 "
                       f"(max|v| dt/dx with dt={dt}, dx={state.dx})")
    vp = np.maximum(vx, 0.0)
    vm = np.minimum(vx, 0.0)
    lam = dt / state.dx

    def advect(f):
        left = np.roll(f, 1, axis=0)
        right = np.roll(f, -1, axis=0)
        return f - lam * (vp * (f - left) + vm * (right - f))

    return KineticState(f1=advect(state.f1), f2=advect(state.f2),
                        t=state.t + dt, grid=state.grid, dx=state.dx)


@dataclass
class SpeciesInit:
    """Initial condition of one species.

    Either a Maxwellian (n, u, T) or, when `tensor` is set, an
    anisotropic Gaussian with that temperature tensor.
    """

    n: float = 1.0
    u: tuple = (0.0, 0.0, 0.0)
    T: float = 1.0
    tensor: np.ndarray | None = None


@dataclass
class Scenario:
    """Complete description of one run."""

    params: ModelParams
    grid: VelocityGrid
    species1: SpeciesInit | None
    species2: SpeciesInit | None
    dt: float
    t_end: float
    output_every: int = 1
    integrator: str = "exp"
    moment_matching: bool = True
    cells: int = 0            # > 0 switches on 1-D transport
    length: float = 1.0
    splitting: str = "lie"    # "lie" or "strang"
    wave_amplitude: float = 0.0
    wave_mode: int = 1


@dataclass
class DiagRecord:
    """One diagnostics sample.

    For 1-D runs the moment sets describe the cell-averaged
    distributions, whose linear moments are exactly the domain totals
    per unit length; H is likewise the per-unit-length entropy.
    `negative` flags any negative or non-finite value in the state.
    """

    t: float
    mom1: MomentSet | None
    mom2: MomentSet | None
    mass1: float
    mass2: float
    momentum: np.ndarray
    energy: float
    h: float
    aniso1: float
    aniso2: float
    negative: bool


class Diagnostics:
    """Time series of diagnostics records."""

    def __init__(self, dim: int):
        self.dim = dim
        self.records: list[DiagRecord] = []

    def append(self, rec: DiagRecord):
        self.records.append(rec)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def velocity_gap(self) -> np.ndarray:
        """|u1 - u2| per record (nan where a species is degenerate)."""
        out = np.full(len(self.records), np.nan)
        for i, r in enumerate(self.records):
            if r.mom1 is not None and r.mom2 is not None:
                out[i] = float(np.linalg.norm(r.mom1.u - r.mom2.u))
        return out

    def temperature_gap(self) -> np.ndarray:
        out = np.full(len(self.records), np.nan)
        for i, r in enumerate(self.records):
            if r.mom1 is not None and r.mom2 is not None:
                out[i] = abs(r.mom1.T - r.mom2.T)
        return out

    def anisotropy(self, species: int = 1) -> np.ndarray:
        return np.array([r.aniso1 if species == 1 else r.aniso2
                         for r in self.records])


def _anisotropy(mom: MomentSet | None) -> float:
    if mom is None or mom.P is None:
        return 0.0
    dev = mom.P - mom.n * mom.T * np.eye(mom.P.shape[0])
    return float(np.linalg.norm(dev))


def diagnose(state: KineticState, params: ModelParams) -> DiagRecord:
    """Moments, conserved totals, entropy and anisotropy of one state."""
    grid = state.grid
    m1, m2 = params.species1.m, params.species2.m
    if state.f1.ndim == 2:
        fb1 = state.f1.mean(axis=0)
        fb2 = state.f2.mean(axis=0)
        h = grid.weight * float(
            np.mean([_xlogx_sum(state.f1[j]) + _xlogx_sum(state.f2[j])
                     for j in range(state.f1.shape[0])]))
    else:
        fb1, fb2 = state.f1, state.f2
        h = h_functional(fb1, fb2, grid)

    def mom_or_none(f, mass):
        if grid.density(f) < gridmod.N_FLOOR:
            return None
        return gridmod.moments(f, mass, grid)

    mom1 = mom_or_none(fb1, m1)
    mom2 = mom_or_none(fb2, m2)
    w = grid.weight
    momentum = m1 * w * (fb1 @ grid.nodes) + m2 * w * (fb2 @ grid.nodes)
    energy = 0.5 * m1 * w * float(np.sum(grid.speed2 * fb1)) \
        + 0.5 * m2 * w * float(np.sum(grid.speed2 * fb2))
    low = min(state.f1.min(), state.f2.min())
    bad = (not math.isfinite(low)) or low < 0.0 \
        or not (np.all(np.isfinite(state.f1)) and np.all(np.isfinite(state.f2)))
    return DiagRecord(
        t=state.t,
        mom1=mom1, mom2=mom2,
        mass1=mom1.n if mom1 is not None else 0.0,
        mass2=mom2.n if mom2 is not None else 0.0,
        momentum=momentum, energy=energy, h=h,
        aniso1=_anisotropy(mom1), aniso2=_anisotropy(mom2),
        negative=bool(bad))


def _initial_distribution(init: SpeciesInit | None, mass: float,
                          grid: VelocityGrid, match: bool,
                          cells: int, length: float, amplitude: float,
                          mode: int) -> np.ndarray:
    shape = (cells, grid.nnodes) if cells > 0 else (grid.nnodes,)
    if init is None or init.n <= 0.0:
        return np.zeros(shape)

    def build(n):
        if init.tensor is not None:
            if match:
                return match_gaussian(n, init.u[:grid.dim], init.tensor,
                                      mass, grid)
            return gaussian_on_grid(n, init.u[:grid.dim], init.tensor,
                                    mass, grid)
        if match:
            return match_moments(n, init.u[:grid.dim], init.T, mass, grid)
        return maxwellian_on_grid(n, init.u[:grid.dim], init.T, mass, grid)

    if cells <= 0:
        return build(init.n)
    x = (np.arange(cells) + 0.5) * (length / cells)
    f = np.empty(shape)
    for j in range(cells):
        nj = init.n * (1.0 + amplitude
                       * math.sin(2.0 * math.pi * mode * x[j] / length))
        f[j] = build(nj)
    return f


def run_scenario(scenario: Scenario) -> Diagnostics:
    """Integrate a scenario and collect diagnostics at the set cadence.

    1-D runs use Lie splitting (transport then relaxation) by default;
    Strang splitting wraps the relaxation in two half transport steps.
    Diagnostics are recorded at step 0, every `output_every` steps and
    at the final step.
    """
    if scenario.dt <= 0.0:
        raise ValueError(f"dt must be positive (got {scenario.dt})")
    if scenario.t_end < scenario.dt:
        raise ValueError("t_end must be at least one step")
    if scenario.output_every < 1:
        raise ValueError("output_every must be >= 1")
    if scenario.splitting not in ("lie", "strang"):
        raise ValueError(f"unknown splitting {scenario.splitting!r}")
    violations = validate(scenario.params)
    if violations:
        raise ValueError("inadmissible parameters: " + "; ".join(violations))

    grid = scenario.grid
    cells = scenario.cells
    dx = scenario.length / cells if cells > 0 else None
    if cells > 0:
        vmax = float(np.max(np.abs(grid.nodes[:, 0])))
        cfl = vmax * scenario.dt / dx
        if cfl > 1.0 + 1e-12:
            raise CflError(f"CFL {cfl:.3f} exceeds 1 for dt={scenario.dt}, "
                           f"dx={dx:.6g}")

    f1 = _initial_distribution(scenario.species1, scenario.params.species1.m,
                               grid, scenario.moment_matching, cells,
                               scenario.length, scenario.wave_amplitude,
                               scenario.wave_mode)
    f2 = _initial_distribution(scenario.species2, scenario.params.species2.m,
                               grid, scenario.moment_matching, cells,
                               scenario.length, scenario.wave_amplitude,
                               scenario.wave_mode)
    state = KineticState(f1=f1, f2=f2, t=0.0, grid=grid, dx=dx)

    diag = Diagnostics(dim=grid.dim)
    diag.append(diagnose(state, scenario.params))
    nsteps = int(round(scenario.t_end / scenario.dt))
    for step in range(1, nsteps + 1):
        if cells > 0:
            if scenario.splitting == "lie":
                state = transport_step(state, scenario.dt)
                state = relax_step(state, scenario.dt, scenario.params,
                                   scenario.integrator,
                                   scenario.moment_matching)
            else:
                state = transport_step(state, 0.5 * scenario.dt)
                state = relax_step(state, scenario.dt, scenario.params,
                                   scenario.integrator,
                                   scenario.moment_matching)
                state = transport_step(state, 0.5 * scenario.dt)
        else:
            state = relax_step(state, scenario.dt, scenario.params,
                               scenario.integrator,
                               scenario.moment_matching)
        state.t = step * scenario.dt
        if step % scenario.output_every == 0 or step == nsteps:
            diag.append(diagnose(state, scenario.params))
    return diag
