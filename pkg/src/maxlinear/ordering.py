"""Causal-order recovery for recursive max-linear models.

Every algorithm here compares scalings of maxima before and after
inflating a candidate group of components by a factor ``a > 1``.  The
inflating trick separates ancestors from non-ancestors: if the
candidate node has no unordered ancestors the inflated and plain
scalings differ by exactly ``(a^2 - 1)`` times the scaling of the
inflated group, otherwise by strictly less.  Each algorithm turns that
gap, written ``delta`` throughout, into a decision:

* ``initial_nodes_threshold`` accepts nodes whose delta sits inside a
  small band around zero (parentless nodes have delta exactly zero);
* ``next_generation_threshold`` repeats the test given an already
  ordered head set, yielding whole generations at a time;
* ``initial_nodes_pairwise`` is the data-frugal variant that screens a
  node against every single partner instead of all nodes at once;
* ``next_node_argmax`` orders one node per step by taking the largest
  delta, which is noise-robust since eligible nodes sit at the top.

Scalings are supplied by a provider object so each algorithm runs
identically on exact model scalings (``ExactScalings``) and on data
estimates (``SpectralScalings`` for the angular estimators,
``FrechetMleScalings`` for the parametric ones).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

import numpy as np

from . import _kernels
from .errors import EmptyGenerationError, NoInitialNodeError, ValidationError
from .estimation import (
    estimate_max_scaling,
    estimate_rescaled_max_scaling,
    frechet_mle_scaling,
)
from .model import as_coefficient_matrix, max_scaling, rescaled_max_scaling

MODES = ("exact-scalings", "estimated")


@dataclass(frozen=True)
class ReorderConfig:
    """Tuning constants of the ordering procedure.

    ``a`` is the inflation factor; ``eps1``/``eps2`` bound the accepted
    delta band for initial nodes from above/below; ``eps3`` bounds
    |delta| in the generation passes.  The defaults are the simulation
    preset; ``data_preset`` returns the configuration used for raw
    heavy-tailed data where a barely-inflating factor keeps the deltas
    comparable across dependent estimates.
    """

    a: float = math.sqrt(2.0)
    eps1: float = 0.1
    eps2: float = 0.05
    eps3: float = 0.1
    mode: str = "exact-scalings"

    def __post_init__(self) -> None:
        if not self.a > 1.0:
            raise ValidationError(f"inflation factor a must exceed 1, got {self.a}")
        if min(self.eps1, self.eps2, self.eps3) < 0.0:
            raise ValidationError("tolerances must be non-negative")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")

    @staticmethod
    def simulation_preset() -> "ReorderConfig":
        return ReorderConfig()

    @staticmethod
    def data_preset() -> "ReorderConfig":
        return ReorderConfig(a=1.01, eps1=0.0045, eps2=0.0045, eps3=0.1, mode="estimated")


class ScalingProvider(Protocol):
    """Source of squared scalings over node subsets, exact or estimated."""

    @property
    def node_count(self) -> int: ...

    def max_scaling(self, nodes: Sequence[int]) -> float: ...

    def rescaled_scaling(
        self, ordered: Sequence[int], node: int, factor: float
    ) -> float: ...


class ExactScalings:
    """Theoretical scalings of a known (standardized) coefficient matrix."""

    def __init__(self, coef: np.ndarray) -> None:
        self._coef = as_coefficient_matrix(coef)

    @property
    def node_count(self) -> int:
        return self._coef.shape[0]

    def max_scaling(self, nodes: Sequence[int]) -> float:
        return max_scaling(self._coef, nodes)

    def rescaled_scaling(self, ordered: Sequence[int], node: int, factor: float) -> float:
        return rescaled_max_scaling(self._coef, ordered, node, factor)


class SpectralScalings:
    """Angular-measure estimates from one sample with a fixed threshold.

    Subset estimates are memoized; two queries of the same subset hit
    the same exceedance rows, which keeps the deltas of one pass on a
    common footing.
    """

    def __init__(self, x: np.ndarray, k: int) -> None:
        self._x = np.asarray(x, dtype=np.float64)
        if self._x.ndim != 2:
            raise ValidationError("sample must be a 2-D matrix")
        self._k = int(k)
        self._max_cache: dict[frozenset[int], float] = {}
        self._resc_cache: dict[tuple[frozenset[int], int, float], float] = {}

    @property
    def node_count(self) -> int:
        return self._x.shape[1]

    @property
    def threshold_count(self) -> int:
        return self._k

    def max_scaling(self, nodes: Sequence[int]) -> float:
        key = frozenset(int(v) for v in nodes)
        if key not in self._max_cache:
            self._max_cache[key] = estimate_max_scaling(self._x, sorted(key), self._k)
        return self._max_cache[key]

    def rescaled_scaling(self, ordered: Sequence[int], node: int, factor: float) -> float:
        key = (frozenset(int(v) for v in ordered), int(node), float(factor))
        if key not in self._resc_cache:
            self._resc_cache[key] = estimate_rescaled_max_scaling(
                self._x, sorted(key[0]), node, factor, self._k
            )
        return self._resc_cache[key]


class FrechetMleScalings:
    """Parametric scaling estimates: componentwise maxima are treated as
    Frechet(2) and their squared scale fitted by maximum likelihood.

    Used by the simulation-study harness; unlike the angular estimates
    these use every observation, not only the radial exceedances.
    """

    def __init__(self, x: np.ndarray) -> None:
        self._x = np.ascontiguousarray(x, dtype=np.float64)
        if self._x.ndim != 2:
            raise ValidationError("sample must be a 2-D matrix")
        self._max_cache: dict[frozenset[int], float] = {}
        self._resc_cache: dict[tuple[frozenset[int], int, float], float] = {}

    @property
    def node_count(self) -> int:
        return self._x.shape[1]

    def _mle(self, weights: np.ndarray) -> float:
        mean = _kernels.scaled_rowmax_invsq_mean(self._x, weights)
        if not np.isfinite(mean):
            raise ValidationError("row maxima must be strictly positive for the MLE")
        return float(1.0 / mean)

    def max_scaling(self, nodes: Sequence[int]) -> float:
        key = frozenset(int(v) for v in nodes)
        if key not in self._max_cache:
            w = np.zeros(self.node_count)
            w[[v - 1 for v in key]] = 1.0
            self._max_cache[key] = self._mle(w)
        return self._max_cache[key]

    def rescaled_scaling(self, ordered: Sequence[int], node: int, factor: float) -> float:
        key = (frozenset(int(v) for v in ordered), int(node), float(factor))
        if key not in self._resc_cache:
            w = np.ones(self.node_count)
            w[[v - 1 for v in (*key[0], node)]] = factor
            self._resc_cache[key] = self._mle(w)
        return self._resc_cache[key]


# ---------------------------------------------------------------------------
# delta computations


def _all_nodes(d: int) -> tuple[int, ...]:
    return tuple(range(1, d + 1))


def _initial_deltas(provider: ScalingProvider, cfg: ReorderConfig) -> dict[int, float]:
    d = provider.node_count
    base = provider.max_scaling(_all_nodes(d))
    offset = cfg.a**2 - 1.0
    return {
        m: provider.rescaled_scaling((), m, cfg.a) - base - offset
        for m in _all_nodes(d)
    }


def _generation_deltas(
    provider: ScalingProvider, ordered: Sequence[int], cfg: ReorderConfig
) -> dict[int, float]:
    d = provider.node_count
    hs = tuple(ordered)
    base = provider.max_scaling(_all_nodes(d))
    out: dict[int, float] = {}
    for m in _all_nodes(d):
        if m in hs:
            continue
        group = provider.max_scaling((*hs, m))
        out[m] = (
            provider.rescaled_scaling(hs, m, cfg.a)
            - base
            - (cfg.a**2 - 1.0) * group
        )
    return out


def _pairwise_delta_bounds(
    x: np.ndarray, cfg: ReorderConfig, k: int
) -> dict[int, tuple[float, float]]:
    a = np.asarray(x, dtype=np.float64)
    d = a.shape[1]
    offset = cfg.a**2 - 1.0
    bounds: dict[int, tuple[float, float]] = {}
    for m in range(1, d + 1):
        lo, hi = math.inf, -math.inf
        for i in range(1, d + 1):
            if i == m:
                delta = 0.0  # self-pair is exactly zero by construction
            else:
                pair = a[:, [i - 1, m - 1]]
                inflated = estimate_rescaled_max_scaling(pair, (), 2, cfg.a, k)
                plain = estimate_max_scaling(pair, (1, 2), k)
                delta = inflated - plain - offset
            lo, hi = min(lo, delta), max(hi, delta)
        bounds[m] = (lo, hi)
    return bounds


# ---------------------------------------------------------------------------
# passes and results


@dataclass(frozen=True)
class DeltaPass:
    """Record of one decision pass.

    ``deltas`` maps each candidate to its (min, max) delta; the two
    coincide except in the pairwise pass, where they summarize the
    sweep over partners.
    """

    kind: str  # "initial" | "initial-pairwise" | "generation" | "argmax"
    ordered_before: tuple[int, ...]
    deltas: Mapping[int, tuple[float, float]]
    accepted: tuple[int, ...]


@dataclass(frozen=True)
class LearnResult:
    """Outcome of an ordering run.

    ``discovery`` lists original node labels from first found (most
    upstream) to last.  The implied causal relabelling gives position
    ``d`` to the first discovery and ``1`` to the last, so parents end
    up with larger positions than their children and the reindexed
    coefficient matrix is upper triangular.
    """

    discovery: tuple[int, ...]
    generations: tuple[tuple[int, ...], ...] | None
    passes: tuple[DeltaPass, ...]
    valid: bool
    config: ReorderConfig

    @property
    def node_count(self) -> int:
        return len(self.discovery)

    def position(self, label: int) -> int:
        """Causal position of an original label (parents get larger)."""
        return self.node_count - self.discovery.index(label)

    def label_at_position(self, position: int) -> int:
        return self.discovery[self.node_count - position]

    def column_order(self) -> tuple[int, ...]:
        """Original labels arranged by causal position 1..d; reindexing
        sample columns in this order makes the data well-ordered."""
        return tuple(self.label_at_position(p) for p in range(1, self.node_count + 1))


def _single(deltas: Mapping[int, float]) -> dict[int, tuple[float, float]]:
    return {m: (v, v) for m, v in deltas.items()}


def initial_nodes_threshold(
    provider: ScalingProvider, cfg: ReorderConfig
) -> frozenset[int]:
    """Nodes whose inflation delta lies in [-eps2, eps1].

    Exact scalings put parentless nodes at delta zero and all others
    strictly below; the band absorbs estimation noise.

    Raises:
        NoInitialNodeError: the band caught nothing; tolerances are too
            tight for the data.
    """
    deltas = _initial_deltas(provider, cfg)
    accepted = frozenset(m for m, v in deltas.items() if -cfg.eps2 <= v <= cfg.eps1)
    if not accepted:
        raise NoInitialNodeError(
            "no node passed the initial test; consider relaxing eps1/eps2 "
            f"(deltas ranged {min(deltas.values()):.4g}..{max(deltas.values()):.4g})"
        )
    return accepted


def initial_nodes_pairwise(x: np.ndarray, cfg: ReorderConfig, k: int) -> frozenset[int]:
    """Data-mode initial-node screen over all node pairs.

    For each candidate m the delta is computed against every partner i
    on the two columns (i, m) alone; m passes when the largest delta
    stays below eps1 and the smallest above -eps2.

    Raises:
        NoInitialNodeError: no candidate passed.
    """
    bounds = _pairwise_delta_bounds(x, cfg, k)
    accepted = frozenset(
        m for m, (lo, hi) in bounds.items() if hi <= cfg.eps1 and lo >= -cfg.eps2
    )
    if not accepted:
        raise NoInitialNodeError(
            "no node passed the pairwise initial test; consider relaxing eps1/eps2"
        )
    return accepted


def next_generation_threshold(
    provider: ScalingProvider, ordered: Sequence[int], cfg: ReorderConfig
) -> frozenset[int]:
    """All unordered nodes with |delta| <= eps3 given the ordered head.

    With exact scalings this is precisely the set of nodes whose every
    ancestor is already ordered, i.e. the next generation.

    Raises:
        EmptyGenerationError: nothing passed while unordered nodes
            remain, invalidating the run.
    """
    deltas = _generation_deltas(provider, ordered, cfg)
    if not deltas:
        return frozenset()
    accepted = frozenset(m for m, v in deltas.items() if abs(v) <= cfg.eps3)
    if not accepted:
        raise EmptyGenerationError(
            f"no node passed the generation test with head {tuple(ordered)}; "
            "consider relaxing eps3"
        )
    return accepted


def _argmax_node(deltas: Mapping[int, float]) -> int:
    # ties broken by smallest label
    best = max(deltas.values())
    return min(m for m, v in deltas.items() if v == best)


def next_node_argmax(
    x: np.ndarray, ordered: Sequence[int], cfg: ReorderConfig, k: int
) -> int:
    """The unordered node with the largest delta given the ordered head.

    Always returns a node; eligible nodes (no unordered ancestors) have
    the largest population delta, zero, so the argmax picks one of them
    up to estimation noise.  Ties break to the smallest label.
    """
    provider = SpectralScalings(x, k)
    deltas = _generation_deltas(provider, ordered, cfg)
    if not deltas:
        raise ValidationError("no unordered nodes remain")
    return _argmax_node(deltas)


def unrelated_pair(
    provider: ScalingProvider,
    ordered: Sequence[int],
    i: int,
    j: int,
    cfg: ReorderConfig,
) -> bool:
    """True when neither i nor j can be an ancestor of the other.

    Both must pass the generation criterion given the ordered head: a
    node passing has no unordered ancestors, so two passing nodes are
    mutually non-ancestral.
    """
    hs = tuple(ordered)
    if i in hs or j in hs:
        raise ValidationError("pair nodes must be outside the ordered set")
    deltas = _generation_deltas(provider, hs, cfg)
    return abs(deltas[i]) <= cfg.eps3 and abs(deltas[j]) <= cfg.eps3


def learn_generations(
    provider: ScalingProvider, cfg: ReorderConfig, strict: bool = True
) -> LearnResult:
    """Threshold-mode ordering: initial nodes, then one generation per pass.

    Each accepted set is canonicalized in ascending label order before
    joining the discovery sequence.  With ``strict`` (default) an empty
    pass raises; with ``strict=False`` the run stops and is returned
    with ``valid=False`` and whatever was ordered so far, which is what
    the simulation-study harness tallies.
    """
    d = provider.node_count
    passes: list[DeltaPass] = []
    discovery: list[int] = []
    generations: list[tuple[int, ...]] = []

    deltas0 = _initial_deltas(provider, cfg)
    first = sorted(m for m, v in deltas0.items() if -cfg.eps2 <= v <= cfg.eps1)
    passes.append(
        DeltaPass(
            kind="initial",
            ordered_before=(),
            deltas=_single(deltas0),
            accepted=tuple(first),
        )
    )
    if not first:
        if strict:
            raise NoInitialNodeError(
                "no node passed the initial test; consider relaxing eps1/eps2"
            )
        return LearnResult((), None, tuple(passes), False, cfg)
    discovery.extend(first)
    generations.append(tuple(first))

    while len(discovery) < d:
        deltas = _generation_deltas(provider, discovery, cfg)
        accepted = sorted(m for m, v in deltas.items() if abs(v) <= cfg.eps3)
        passes.append(
            DeltaPass(
                kind="generation",
                ordered_before=tuple(discovery),
                deltas=_single(deltas),
                accepted=tuple(accepted),
            )
        )
        if not accepted:
            if strict:
                raise EmptyGenerationError(
                    f"no node passed the generation test with head {tuple(discovery)}"
                )
            return LearnResult(
                tuple(discovery), tuple(generations), tuple(passes), False, cfg
            )
        discovery.extend(accepted)
        generations.append(tuple(accepted))

    return LearnResult(tuple(discovery), tuple(generations), tuple(passes), True, cfg)


def learn_order(
    x: np.ndarray | ScalingProvider, cfg: ReorderConfig, k: int | None = None
) -> LearnResult:
    """One-node-at-a-time ordering of a full sample.

    On data: pairwise initial-node screen, then repeated argmax steps
    with the angular estimators, all at threshold count ``k``.  Passing
    a provider instead of a sample runs the same composition noise-free
    (threshold initial pass, then exact argmax steps), which is how the
    procedure is validated against known models.

    Raises:
        NoInitialNodeError: propagated from the initial pass.
    """
    passes: list[DeltaPass] = []
    if isinstance(x, np.ndarray):
        if k is None:
            raise ValidationError("k is required when learning from data")
        provider = SpectralScalings(x, k)
        d = provider.node_count
        bounds = _pairwise_delta_bounds(x, cfg, k)
        first = sorted(
            m for m, (lo, hi) in bounds.items() if hi <= cfg.eps1 and lo >= -cfg.eps2
        )
        passes.append(
            DeltaPass(
                kind="initial-pairwise",
                ordered_before=(),
                deltas=dict(bounds),
                accepted=tuple(first),
            )
        )
        if not first:
            raise NoInitialNodeError(
                "no node passed the pairwise initial test; consider relaxing eps1/eps2"
            )
    else:
        provider = x
        d = provider.node_count
        deltas0 = _initial_deltas(provider, cfg)
        first = sorted(m for m, v in deltas0.items() if -cfg.eps2 <= v <= cfg.eps1)
        passes.append(
            DeltaPass(
                kind="initial",
                ordered_before=(),
                deltas=_single(deltas0),
                accepted=tuple(first),
            )
        )
        if not first:
            raise NoInitialNodeError(
                "no node passed the initial test; consider relaxing eps1/eps2"
            )

    discovery = list(first)
    while len(discovery) < d:
        deltas = _generation_deltas(provider, discovery, cfg)
        m = _argmax_node(deltas)
        passes.append(
            DeltaPass(
                kind="argmax",
                ordered_before=tuple(discovery),
                deltas=_single(deltas),
                accepted=(m,),
            )
        )
        discovery.append(m)

    return LearnResult(tuple(discovery), None, tuple(passes), True, cfg)
