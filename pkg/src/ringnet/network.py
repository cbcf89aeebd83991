"""Ring network construction: motif transfer matrices and random phase layers.

A ring of N two-port couplers carries 2N modes. One motif applies every
coupler once: an A sublayer of 2x2 rotation blocks on mode pairs (0,1),
(2,3), ..., then a B sublayer on the shifted pairs (1,2), (3,4), ...,
closing the ring with the corner entries that couple mode 2N-1 back to
mode 0. Disorder enters as diagonal layers of random phases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix

TWO_PI = 2.0 * np.pi


def coupler_block(angle: float) -> np.ndarray:
    """2x2 real rotation block [[c, s], [-s, c]] for one coupler."""
    c = np.cos(angle)
    s = np.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class MotifParams:
    """Geometry and coupling angles of one ring motif.

    n_couplers is the number of couplers per sublayer; the ring carries twice
    that many modes. A ring with a single coupler would make the B sublayer's
    corner wrap collide with its only block, so two couplers is the minimum.
    """

    n_couplers: int
    theta: float
    phi: float

    def __post_init__(self):
        if self.n_couplers < 2:
            raise ValueError(
                f"n_couplers must be at least 2, got {self.n_couplers}"
            )
        for name in ("theta", "phi"):
            val = getattr(self, name)
            if not np.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val!r}")

    @property
    def n_modes(self) -> int:
        return 2 * self.n_couplers


def a_sublayer(params: MotifParams) -> np.ndarray:
    """Block-diagonal layer: one theta block on each pair (2i, 2i+1)."""
    n = params.n_modes
    out = np.zeros((n, n), dtype=np.complex128)
    block = coupler_block(params.theta)
    for i in range(params.n_couplers):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = block
    return out


def b_sublayer(params: MotifParams) -> np.ndarray:
    """Shifted layer: phi blocks on pairs (2i+1, 2i+2), wrapping 2N-1 -> 0.

    The wrapped block is split across the matrix corners: its diagonal
    entries land at (0,0) and (2N-1, 2N-1), its off-diagonal entries at
    (0, 2N-1) and (2N-1, 0).
    """
    n = params.n_modes
    out = np.zeros((n, n), dtype=np.complex128)
    block = coupler_block(params.phi)
    for i in range(params.n_couplers - 1):
        j = 2 * i + 1
        out[j : j + 2, j : j + 2] = block
    out[0, 0] = block[1, 1]
    out[0, n - 1] = block[1, 0]
    out[n - 1, 0] = block[0, 1]
    out[n - 1, n - 1] = block[0, 0]
    return out


def build_motif(params: MotifParams) -> np.ndarray:
    """Transfer matrix of one disorder-free motif: A sublayer times B sublayer."""
    return as_matrix(a_sublayer(params) @ b_sublayer(params))


class RngStream:
    """Deterministic uniform stream addressed by (master_seed, stream_index).

    Streams with distinct indices under one master seed are statistically
    independent, and the draw sequence for a given address never changes.
    """

    def __init__(self, master_seed: int, stream_index: int):
        if master_seed < 0 or stream_index < 0:
            raise ValueError("seed and stream index must be nonnegative")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        seq = np.random.SeedSequence([self.master_seed, self.stream_index])
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def uniform(self, count: int) -> np.ndarray:
        """Next ``count`` draws from Uniform[0, 1)."""
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        return self._gen.random(count)

    def fork(self, stream_index: int) -> "RngStream":
        """Fresh stream under the same master seed."""
        return RngStream(self.master_seed, stream_index)


@dataclass(frozen=True)
class PhaseLayer:
    """Diagonal layer of mode phases, stored as the bare angle vector.

    range_alpha records the half-open width the phases were drawn from, so a
    layer can be checked against the disorder strength that produced it.
    """

    phases: np.ndarray
    range_alpha: float

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=np.float64)
        if phases.ndim != 1 or phases.shape[0] == 0:
            raise ValueError(f"phases must be a nonempty vector, got {phases.shape}")
        if not np.isfinite(phases).all():
            raise ValueError("phases must all be finite")
        if not 0.0 <= self.range_alpha <= TWO_PI:
            raise ValueError(
                f"range_alpha must lie in [0, 2*pi], got {self.range_alpha!r}"
            )
        if phases.size and (phases.min() < 0.0 or phases.max() > self.range_alpha):
            raise ValueError("phases must lie in [0, range_alpha]")
        object.__setattr__(self, "phases", phases)

    @property
    def n_modes(self) -> int:
        return self.phases.shape[0]


def build_phase_layer(n_modes: int, alpha: float, rng: RngStream) -> PhaseLayer:
    """Draw one phase layer with phases uniform on [0, alpha).

    Always consumes exactly n_modes draws from ``rng``, alpha = 0 included,
    so stream positions stay aligned across disorder strengths.
    """
    if n_modes <= 0:
        raise ValueError(f"n_modes must be positive, got {n_modes}")
    if not 0.0 <= alpha <= TWO_PI:
        raise ValueError(f"alpha must lie in [0, 2*pi], got {alpha!r}")
    return PhaseLayer(phases=alpha * rng.uniform(n_modes), range_alpha=alpha)


def phase_layer_matrix(layer: PhaseLayer) -> np.ndarray:
    """Dense diagonal matrix exp(i * phases)."""
    return np.diag(np.exp(1j * layer.phases))


class ScenarioKind(str, enum.Enum):
    """Which disorder pattern a scenario applies between and inside motifs."""

    PURE = "pure"
    FULLY_RANDOM = "fully-random"
    FIXED_DISORDER = "fixed-disorder"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class Scenario:
    """One complete propagation setup: motif, depth, disorder pattern, seed.

    alpha_fixed is the strength of the phase layer that is drawn once and
    repeated every step (fixed-disorder and intermediate kinds).
    alpha_layer is the strength of the layers redrawn each step
    (fully-random and intermediate kinds). Strengths not used by the kind
    must be zero.

    For fully-random scenarios each step applies two independent layers: one
    inside the motif and one between motifs; motif_internal_phases turns the
    internal layer off while keeping the stream consumption identical.
    """

    kind: ScenarioKind
    motif: MotifParams
    depth: int
    seed: int
    alpha_fixed: float = 0.0
    alpha_layer: float = 0.0
    motif_internal_phases: bool = True

    def __post_init__(self):
        if not isinstance(self.kind, ScenarioKind):
            object.__setattr__(self, "kind", ScenarioKind(self.kind))
        if self.depth < 1:
            raise ValueError(f"depth must be at least 1, got {self.depth}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        for name in ("alpha_fixed", "alpha_layer"):
            val = getattr(self, name)
            if not 0.0 <= val <= TWO_PI:
                raise ValueError(f"{name} must lie in [0, 2*pi], got {val!r}")
        uses_fixed = self.kind in (
            ScenarioKind.FIXED_DISORDER,
            ScenarioKind.INTERMEDIATE,
        )
        uses_layer = self.kind in (
            ScenarioKind.FULLY_RANDOM,
            ScenarioKind.INTERMEDIATE,
        )
        if not uses_fixed and self.alpha_fixed != 0.0:
            raise ValueError(
                f"alpha_fixed is not used by kind {self.kind.value!r} and must be 0"
            )
        if not uses_layer and self.alpha_layer != 0.0:
            raise ValueError(
                f"alpha_layer is not used by kind {self.kind.value!r} and must be 0"
            )

    @property
    def n_modes(self) -> int:
        return self.motif.n_modes


def scenario_step_factors(scenario: Scenario, rng: RngStream):
    """Yield the transfer-matrix factor of each step, left factor last.

    Stream consumption contract, which downstream code and the tests rely on:
    any once-per-scenario layer is drawn first, then per-step layers in step
    order; when a step has both an internal and an inter-motif layer the
    internal one is drawn first. Every layer draw consumes exactly n_modes
    uniforms regardless of its strength.

    pure:            U, U, ..., U
    fixed-disorder:  U D with one D = diag phases drawn once
    fully-random:    (U D'_m) D_m, D_m omitted after the last step
    intermediate:    U D D''_m with the fixed D drawn once, D''_m per step
    """
    u = build_motif(scenario.motif)
    n = scenario.n_modes
    kind = scenario.kind

    if kind is ScenarioKind.PURE:
        for _ in range(scenario.depth):
            yield u
        return

    if kind is ScenarioKind.FIXED_DISORDER:
        fixed = build_phase_layer(n, scenario.alpha_fixed, rng)
        step = u * np.exp(1j * fixed.phases)
        for _ in range(scenario.depth):
            yield step
        return

    if kind is ScenarioKind.FULLY_RANDOM:
        for m in range(scenario.depth):
            internal = build_phase_layer(n, scenario.alpha_layer, rng)
            if scenario.motif_internal_phases:
                step = u * np.exp(1j * internal.phases)
            else:
                step = u
            if m < scenario.depth - 1:
                # layer between this motif and the next; nothing follows the
                # last motif, so its between-layer is neither drawn nor applied
                between = build_phase_layer(n, scenario.alpha_layer, rng)
                step = np.exp(1j * between.phases)[:, None] * step
            yield step
        return

    if kind is ScenarioKind.INTERMEDIATE:
        fixed = build_phase_layer(n, scenario.alpha_fixed, rng)
        base = u * np.exp(1j * fixed.phases)
        for _ in range(scenario.depth):
            step_layer = build_phase_layer(n, scenario.alpha_layer, rng)
            yield base * np.exp(1j * step_layer.phases)
        return

    raise ValueError(f"unhandled scenario kind {kind!r}")  # pragma: no cover


def compose(scenario: Scenario, rng: RngStream | None = None) -> np.ndarray:
    """Full transfer matrix of a scenario: the product of all step factors.

    Later steps multiply from the left, so the result applied to a column
    vector runs the steps in order. By default draws from stream 0 of the
    scenario seed; pass ``rng`` to share a stream with snapshot bookkeeping.
    """
    if rng is None:
        rng = RngStream(scenario.seed, 0)
    w = np.eye(scenario.n_modes, dtype=np.complex128)
    for factor in scenario_step_factors(scenario, rng):
        w = factor @ w
    return w


def disordered_motif(scenario: Scenario) -> np.ndarray:
    """The scenario's first step factor on its own.

    Uses the same stream-0 draws as ``compose``, so for a fixed-disorder
    scenario this is exactly the repeated-step matrix of the full product.
    """
    rng = RngStream(scenario.seed, 0)
    return next(iter(scenario_step_factors(scenario, rng)))
