"""Attach-a-qubit baselines: sender's pure state on site 1, free evolution,
Bloch-averaged fidelity read from site N's reduced state.

Two reference chains, both with uniform couplings |J| = 1:

* FM: sites 2..N start fully polarized (all spin-down) under the
  ferromagnetic chain; dynamics is confined to the zero- and one-magnon
  sectors, so a closed form from the single-excitation transition amplitude
  cross-checks the quadrature.
* AFM: sites 2..N start in the ground state of the uniform (N-1)-site
  antiferromagnetic subchain (its sz=+1 doublet member; a single spin in the
  N=2 edge case is taken as |0>).

The reported figure uses the scheme convention that reproduces the reference
comparison: the FM row allows the standard receiver phase correction (an
optimal z-rotation on site N, equivalent to taking |f| in the closed form)
and reads the first arrival peak; the AFM row is uncorrected, also at the
first arrival peak. Raw and corrected series are both returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .basis import position_in_sector, sector_states
from .model import ChainSpec, Hamiltonian, build_chain
from .solvers import PropagatorConfig, ground_state, iter_evolved
from .sphere import SphereRule, sphere_rule
from .states import StateVector, cross_site_rdm
from .timeseries import PeakResult, TimeSeries, find_first_peak, find_optimal_time

__all__ = [
    "AttachingResult",
    "StrategyComparison",
    "attach_initial_state",
    "attaching_average_fidelity",
    "compare_strategies",
    "magnon_transition_amplitude",
    "magnon_closed_form",
    "run_attaching",
]

SCHEMES = ("FM", "AFM")
_CONVENTION = {"FM": "corrected", "AFM": "raw"}


@dataclass(frozen=True)
class AttachingResult:
    scheme: str
    n_qubits: int
    raw: TimeSeries
    corrected: TimeSeries
    first_peak: PeakResult
    global_peak: PeakResult
    convention: str

    @property
    def reported(self) -> TimeSeries:
        return self.corrected if self.convention == "corrected" else self.raw


def _sender_components(scheme: str, n: int):
    """The site-1 |0> and |1> components of the initial state, as sector states."""
    if scheme == "FM":
        rest_bits = (1 << (n - 1)) - 1  # sites 2..N all down
        rest_sz = -(n - 1)
        sub_states = np.array([rest_bits], dtype=np.int64)
        sub_amps = np.array([1.0 + 0j])
    else:
        if n == 2:
            sub_states = np.array([0], dtype=np.int64)  # single spin: |0>
            sub_amps = np.array([1.0 + 0j])
            rest_sz = 1
        else:
            sub = build_chain(ChainSpec(n_qubits=n - 1, pattern="uniform-AFM"))
            g = ground_state(sub, sz=1).state
            sub_states = g.basis_indices()
            sub_amps = g.amplitudes
            rest_sz = 1
    parts = {}
    for bit, sz_shift in ((0, +1), (1, -1)):
        full_idx = (sub_states << 1) | bit
        sz = rest_sz + sz_shift
        sector = sector_states(n, (n - sz) // 2)
        amps = np.zeros(sector.shape[0], dtype=complex)
        amps[position_in_sector(sector, full_idx)] = sub_amps
        parts[bit] = StateVector(n, amps, sz)
    return parts[0], parts[1]


def attach_initial_state(scheme: str, n: int, theta: float, phi: float) -> StateVector:
    """cos(t/2)|0> + e^{i phi} sin(t/2)|1> on site 1, reference state on 2..N."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    if n < 2:
        raise ValueError("need at least 2 sites")
    a, b = _sender_components(scheme, n)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    full = c * a.to_full().amplitudes + s * np.exp(1j * phi) * b.to_full().amplitudes
    return StateVector(n, full, None)


def _chain_for(scheme: str, n: int) -> Hamiltonian:
    pattern = "uniform-FM" if scheme == "FM" else "uniform-AFM"
    return build_chain(ChainSpec(n_qubits=n, pattern=pattern))


def _averages_from_cross(raa, rbb, rab, rule: SphereRule):
    """Raw and z-rotation-corrected spherical averages of the receive fidelity.

    rho_N(theta, phi) is bilinear in the evolved site-1 components:
    c^2 rAA + s^2 rBB + c s e^{-i phi} rAB + h.c. The receiver correction is
    an optimal site-N z-rotation; Sz conservation leaves rAB with a single
    nonzero element [0, 1] (and rAA, rBB diagonal), so the rotation amounts
    to replacing that element by its modulus.
    """
    variants = []
    for corrected in (False, True):
        cross = rab.copy()
        if corrected:
            cross[0, 1] = abs(cross[0, 1])
        samples = np.empty((rule.thetas.size, rule.phis.size))
        for i, th in enumerate(rule.thetas):
            c, s = np.cos(th / 2.0), np.sin(th / 2.0)
            for j, ph in enumerate(rule.phis):
                e = np.exp(1j * ph)
                rho = (
                    c * c * raa
                    + s * s * rbb
                    + (c * s / e) * cross
                    + (c * s * e) * cross.conj().T
                )
                psi = np.array([c, s * e])
                samples[i, j] = np.real(psi.conj() @ rho @ psi)
        variants.append(rule.average(samples))
    return variants[0], variants[1]


def run_attaching(
    scheme: str,
    n: int,
    t_grid,
    cfg: PropagatorConfig | None = None,
    rule: SphereRule | None = None,
) -> AttachingResult:
    """Average transfer fidelity versus time for one attaching scheme."""
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    rule = rule or sphere_rule()
    ham = _chain_for(scheme, n)
    a0, b0 = _sender_components(scheme, n)
    t_grid = np.asarray(t_grid, dtype=float)
    raw = np.empty(t_grid.size)
    corr = np.empty(t_grid.size)
    ga = iter_evolved(ham, a0, t_grid, cfg)
    gb = iter_evolved(ham, b0, t_grid, cfg)
    for i in range(t_grid.size):
        at, bt = next(ga), next(gb)
        raa = cross_site_rdm(at, at, n)
        rbb = cross_site_rdm(bt, bt, n)
        rab = cross_site_rdm(at, bt, n)
        raw[i], corr[i] = _averages_from_cross(raa, rbb, rab, rule)
    meta = {"n": n, "scheme": scheme}
    raw_ts = TimeSeries(t_grid, raw, label=f"{scheme} raw", meta=meta)
    corr_ts = TimeSeries(t_grid, corr, label=f"{scheme} corrected", meta=meta)
    convention = _CONVENTION[scheme]
    reported = corr_ts if convention == "corrected" else raw_ts
    return AttachingResult(
        scheme=scheme,
        n_qubits=n,
        raw=raw_ts,
        corrected=corr_ts,
        first_peak=find_first_peak(reported),
        global_peak=find_optimal_time(reported),
        convention=convention,
    )


def attaching_average_fidelity(
    scheme: str,
    n: int,
    t: float,
    cfg: PropagatorConfig | None = None,
    corrected: bool | None = None,
) -> float:
    """Spherically averaged fidelity at one time (scheme convention default)."""
    res = run_attaching(scheme, n, [float(t)], cfg)
    if corrected is None:
        corrected = _CONVENTION[scheme] == "corrected"
    return float((res.corrected if corrected else res.raw).values[0])


# ---------------------------------------------------------------------------
# FM closed form (one-magnon sector)


def magnon_transition_amplitude(n: int, t: float) -> tuple[complex, float]:
    """f(t) = <site N excited| exp(-i H t) |site 1 excited> and the vacuum energy.

    The uniform ferromagnetic chain conserves the number of flipped spins, so
    the block on the N single-excitation states is an N x N matrix.
    """
    h = np.zeros((n, n))
    for j in range(1, n + 1):
        h[j - 1, j - 1] = sum(
            1.0 if (k == j or k + 1 == j) else -1.0 for k in range(1, n)
        )
        if j < n:
            h[j - 1, j] = h[j, j - 1] = -2.0
    w, v = eigh(h)
    f = complex(v[n - 1, :] @ (np.exp(-1j * w * t) * v[0, :]))
    return f, -(n - 1.0)


def magnon_closed_form(n: int, t: float, corrected: bool = True) -> float:
    """FM average fidelity from the transition amplitude alone."""
    f, e_vac = magnon_transition_amplitude(n, t)
    cross = abs(f) if corrected else np.real(f * np.exp(1j * e_vac * t))
    return float(0.5 + abs(f) ** 2 / 6.0 + cross / 3.0)


# ---------------------------------------------------------------------------
# Strategy comparison


@dataclass(frozen=True)
class StrategyComparison:
    n_values: list
    fm: list
    afm: list
    quantum: list
    fm_t: list
    afm_t: list
    quantum_t: list

    def rows(self):
        for i, n in enumerate(self.n_values):
            yield {
                "n": n,
                "fm": self.fm[i],
                "fm_t_star": self.fm_t[i],
                "afm": self.afm[i],
                "afm_t_star": self.afm_t[i],
                "quantum": self.quantum[i],
                "quantum_t_star": self.quantum_t[i],
            }


def compare_strategies(
    n_list,
    delta: float,
    dt: float = 0.05,
    cfg: PropagatorConfig | None = None,
    gs_tol: float = 1e-10,
) -> StrategyComparison:
    """FM / AFM / encoded-rotation fidelities at their optimal times.

    Raises if the expected strict ordering (encoded > AFM > FM) is violated
    at any length, so a regression cannot pass silently.
    """
    from .quantum import run_quantum  # local import to avoid a cycle

    fm_v, afm_v, q_v, fm_t, afm_t, q_t = [], [], [], [], [], []
    for n in n_list:
        window = np.arange(0.0, 4.0 * n + 1e-9, dt)
        fm = run_attaching("FM", n, window, cfg)
        afm = run_attaching("AFM", n, window, cfg)
        ham = build_chain(ChainSpec(n_qubits=n, delta=delta))
        gs = ground_state(ham, tol=gs_tol).state
        q = run_quantum(ham, gs, np.arange(0.0, 3.0 * n + 1e-9, dt), cfg)
        fm_v.append(fm.first_peak.value)
        fm_t.append(fm.first_peak.t_star)
        afm_v.append(afm.first_peak.value)
        afm_t.append(afm.first_peak.t_star)
        q_v.append(q.peak.value)
        q_t.append(q.peak.t_star)
        if not (q_v[-1] > afm_v[-1] > fm_v[-1]):
            raise ValueError(
                f"strategy ordering violated at N={n}: "
                f"encoded={q_v[-1]:.4f}, AFM={afm_v[-1]:.4f}, FM={fm_v[-1]:.4f}"
            )
    return StrategyComparison(
        n_values=list(n_list), fm=fm_v, afm=afm_v, quantum=q_v,
        fm_t=fm_t, afm_t=afm_t, quantum_t=q_t,
    )
