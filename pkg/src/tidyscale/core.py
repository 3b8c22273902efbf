"""Backend-agnostic scale machinery.

Every algorithm here talks to a group only through the primitives of
:class:`GroupInstance`: image and preimage of compact subgroups, intersection,
containment and finite index. The three backends (finite groups, Q_p^n with a
linear map, full shifts) implement those primitives exactly.
"""

from __future__ import annotations

import abc
import enum
from dataclasses import dataclass
from typing import Any

DEFAULT_L_MAX = 64


class Backend(str, enum.Enum):
    FINITE = "finite"
    PADIC = "padic"
    SHIFT = "shift"


class TidyError(Exception):
    """Base class for computation errors surfaced to the CLI as exit code 3."""


class NotComputableError(TidyError):
    pass


class StageBudgetExceeded(TidyError):
    def __init__(self, l_max: int):
        super().__init__(f"no tidy-above certificate within {l_max} stages")
        self.l_max = l_max


class UndecidableInput(TidyError):
    pass


class NotASubgroup(TidyError, ValueError):
    pass


class InfiniteIndex(TidyError, ValueError):
    pass


class NotApplicable(Exception):
    """A formula whose hypothesis fails on this instance (exit code 4)."""


@dataclass(frozen=True)
class ScaleResult:
    value: int
    subgroup: Any
    displacement: int
    method: str  # exhaustive | newton-polygon | stage-stabilization | compact-trivial
    details: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("scale must be a positive integer")
        if self.displacement != self.value:
            raise ValueError(f"certificate displacement {self.displacement} != scale {self.value}")

    def detail(self, key: str, default=None):
        return dict(self.details).get(key, default)


@dataclass(frozen=True)
class StageRecord:
    stage: int
    subgroup: Any
    index: int


@dataclass(frozen=True)
class StageTrace:
    records: tuple[StageRecord, ...]

    def indices(self) -> list[int]:
        return [r.index for r in self.records]

    def stabilized_from(self) -> int:
        """First stage from which the recorded index no longer changes."""
        idx = self.indices()
        k = len(idx) - 1
        while k > 0 and idx[k - 1] == idx[-1]:
            k -= 1
        return k


COMPUTED = "computed"
NOT_COMPUTED = "not-computed"

DECOMPOSITION_FIELDS = ("con", "con_minus", "par", "par_minus", "lev", "nub", "bik", "big_cell")


@dataclass(frozen=True)
class Descriptor:
    """One subgroup of a decomposition.

    ``kind`` is ``elements`` (explicit finite set), ``subspace`` (p-adic
    subspace), ``symbolic`` (closed-form tag with a window projection rule) or
    ``trivial``/``whole`` shortcuts. ``closed`` records topological closedness
    when known.
    """

    status: str
    kind: str = ""
    payload: Any = None
    closed: bool | None = None
    note: str = ""

    @property
    def computed(self) -> bool:
        return self.status == COMPUTED


def not_computed(note: str) -> Descriptor:
    return Descriptor(NOT_COMPUTED, note=note)


@dataclass(frozen=True)
class DynamicalDecomposition:
    backend: str
    con: Descriptor
    con_minus: Descriptor
    par: Descriptor
    par_minus: Descriptor
    lev: Descriptor
    nub: Descriptor
    bik: Descriptor
    big_cell: Descriptor

    def items(self) -> list[tuple[str, Descriptor]]:
        return [(f, getattr(self, f)) for f in DECOMPOSITION_FIELDS]


class GroupInstance(abc.ABC):
    """A group with an endomorphism; subgroups are backend handles."""

    backend: Backend

    @property
    @abc.abstractmethod
    def is_automorphism(self) -> bool: ...

    @property
    @abc.abstractmethod
    def is_compact(self) -> bool: ...

    @abc.abstractmethod
    def key(self) -> str:
        """Stable identifier used for sorting and reports."""

    @abc.abstractmethod
    def describe(self) -> dict: ...

    # subgroup primitives
    @abc.abstractmethod
    def whole(self): ...

    @abc.abstractmethod
    def trivial(self): ...

    @abc.abstractmethod
    def image(self, U): ...

    @abc.abstractmethod
    def preimage_meet(self, V, M):
        """{x in M : alpha(x) in V}."""

    @abc.abstractmethod
    def intersect(self, U, V): ...

    @abc.abstractmethod
    def contains(self, K, H) -> bool:
        """H ⊆ K."""

    @abc.abstractmethod
    def index(self, K, H) -> int:
        """[K : H]; raises NotASubgroup or InfiniteIndex."""

    def same(self, U, V) -> bool:
        return U == V

    # backend strategies
    @abc.abstractmethod
    def scale_result(self, l_max: int = DEFAULT_L_MAX) -> ScaleResult: ...

    @abc.abstractmethod
    def tidy_above_certificate(self, V) -> bool: ...

    @abc.abstractmethod
    def decompose(self) -> DynamicalDecomposition: ...

    def tidying_procedure(self, U, l_max: int = DEFAULT_L_MAX):
        raise NotComputableError("tidying procedure not available on this backend")

    def core_part(self, K):
        raise NotComputableError("core part not available on this backend")

    def converges_mod(self, trajectory, H) -> bool:
        raise UndecidableInput("no convergence rule for this backend")

    def describe_subgroup(self, U) -> Any:
        return repr(U)


# -- generic algorithms ------------------------------------------------------


def index(inst: GroupInstance, K, H) -> int:
    return inst.index(K, H)


def displacement_index(inst: GroupInstance, U) -> int:
    aU = inst.image(U)
    return inst.index(aU, inst.intersect(aU, U))


def minus_stages(inst: GroupInstance, U, n: int) -> list:
    """[U, U ∩ α⁻¹(U), U ∩ α⁻¹(U ∩ α⁻¹(U)), ...] up to stage n."""
    out = [U]
    V = U
    for _ in range(n):
        V = inst.preimage_meet(V, U)
        out.append(V)
    return out


def minus_stage(inst: GroupInstance, U, n: int):
    if n < 0:
        raise ValueError("stage count must be non-negative")
    return minus_stages(inst, U, n)[-1]


def plus_stage(inst: GroupInstance, U, n: int):
    if n < 0:
        raise ValueError("stage count must be non-negative")
    V = U
    for _ in range(n):
        V = inst.intersect(U, inst.image(V))
    return V


def minus_trace(inst: GroupInstance, U, n: int) -> StageTrace:
    return StageTrace(tuple(StageRecord(k, V, displacement_index(inst, V)) for k, V in enumerate(minus_stages(inst, U, n))))


def plus_trace(inst: GroupInstance, U, n: int) -> StageTrace:
    recs = []
    V = U
    for k in range(n + 1):
        if k:
            V = inst.intersect(U, inst.image(V))
        aV = inst.image(V)
        recs.append(StageRecord(k, V, inst.index(aV, inst.intersect(aV, V))))
    return StageTrace(tuple(recs))


def tidy_above(inst: GroupInstance, U, l_max: int = DEFAULT_L_MAX):
    """First stage ℓ ≤ l_max whose minus stage passes the backend certificate."""
    V = U
    for ell in range(l_max + 1):
        if ell:
            V = inst.preimage_meet(V, U)
        if inst.tidy_above_certificate(V):
            return V, ell
    raise StageBudgetExceeded(l_max)


def scale(inst: GroupInstance, l_max: int = DEFAULT_L_MAX) -> ScaleResult:
    return inst.scale_result(l_max=l_max)


@dataclass(frozen=True)
class TidyVerdict:
    tidy: bool
    displacement: int
    scale: int

    def __bool__(self):
        return self.tidy


def is_tidy(inst: GroupInstance, U, l_max: int = DEFAULT_L_MAX) -> TidyVerdict:
    d = displacement_index(inst, U)
    s = inst.scale_result(l_max=l_max).value
    return TidyVerdict(d == s, d, s)


def tidying_procedure(inst: GroupInstance, U, l_max: int = DEFAULT_L_MAX):
    return inst.tidying_procedure(U, l_max=l_max)


def decompose(inst: GroupInstance) -> DynamicalDecomposition:
    return inst.decompose()


def core_part(inst: GroupInstance, K):
    return inst.core_part(K)


def converges_mod(inst: GroupInstance, trajectory, H) -> bool:
    return inst.converges_mod(trajectory, H)


def index_is_multiplicative(inst: GroupInstance, K, M, H) -> bool:
    return inst.index(K, H) == inst.index(K, M) * inst.index(M, H)
