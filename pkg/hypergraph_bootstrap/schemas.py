import logging
import re
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from hypergraph_bootstrap import config

logger = logging.getLogger(__name__)


# --- Engine settings ---


class EngineKind(str, Enum):
    """
    Percolation engines.

    - naive: evaluates the infection rule over every k-set each round.
    - incremental: only inspects k-sets that meet the previous round's additions.
    """

    NAIVE = "naive"
    INCREMENTAL = "incremental"


class PercolationConfig(BaseModel):
    """Settings of one K_k^(r)-bootstrap run. ``k > r`` is checked against the hypergraph."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=2, description="Clique size of the pattern K_k^(r)")
    max_rounds: Optional[int] = Field(
        None, ge=0, description="Round cap; defaults to C(n, r) + 1"
    )
    record_witnesses: bool = Field(
        True, description="Keep the k-set completed by each infected edge"
    )
    engine_kind: EngineKind = Field(
        default_factory=lambda: EngineKind(config.ENGINE),
        description="Which engine executes the process",
    )
    memory_budget_bytes: int = Field(
        default_factory=lambda: config.MEMORY_BUDGET_BYTES,
        ge=0,
        description="Budget for dense stores and the naive k-set table",
    )

    @field_validator("engine_kind", mode="before")
    @classmethod
    def normalize_engine_kind(cls, v):
        if isinstance(v, str):
            v = v.strip().lower()
            supported = [e.value for e in EngineKind]
            if v not in supported:
                raise ValueError(f"Invalid engine '{v}'. Must be one of: {supported}")
        return v


# --- Construction labels ---


class LabelKind(str, Enum):
    TOP = "t"
    BOTTOM_POS = "b"
    BOTTOM_NEG = "b-"
    MIDDLE = "m"
    DUMMY = "d"


_LABEL_RE = re.compile(r"^(?:(t)(\d+)|b(-?)(\d+)|m(-?\d+)|d(\d+),(\d+))$")


class Label(BaseModel):
    """Semantic vertex name of the slow construction: t_i, b_j, b_-j, m_l or d_{i,s}."""

    model_config = ConfigDict(frozen=True)

    kind: LabelKind
    index: int
    slot: Optional[int] = Field(None, description="s of d_{i,s}; unset for other kinds")

    def render(self) -> str:
        if self.kind == LabelKind.TOP:
            return f"t{self.index}"
        if self.kind == LabelKind.BOTTOM_POS:
            return f"b{self.index}"
        if self.kind == LabelKind.BOTTOM_NEG:
            return f"b-{self.index}"
        if self.kind == LabelKind.MIDDLE:
            return f"m{self.index}"
        return f"d{self.index},{self.slot}"

    @classmethod
    def parse(cls, text: str) -> "Label":
        match = _LABEL_RE.match(text.strip())
        if not match:
            raise ValueError(f"Invalid label '{text}'")
        top, top_i, neg, bottom_j, middle, dummy_i, dummy_s = match.groups()
        if top:
            return cls(kind=LabelKind.TOP, index=int(top_i))
        if bottom_j is not None:
            kind = LabelKind.BOTTOM_NEG if neg else LabelKind.BOTTOM_POS
            return cls(kind=kind, index=int(bottom_j))
        if middle is not None:
            return cls(kind=LabelKind.MIDDLE, index=int(middle))
        return cls(kind=LabelKind.DUMMY, index=int(dummy_i), slot=int(dummy_s))

    def __str__(self) -> str:
        return self.render()


# --- Verification reports ---


class Violation(BaseModel):
    condition: int = Field(..., ge=1, le=3, description="Civilised condition (1), (2) or (3)")
    t: int = Field(..., ge=1, description="Round at which the condition fails")
    detail: str


class CivilisedReport(BaseModel):
    cond1_ok: bool
    cond2_ok: bool
    cond3_ok: bool
    first_violation: Optional[Violation] = None
    T: int = Field(..., ge=0, description="Observed running time")

    @property
    def passed(self) -> bool:
        return self.cond1_ok and self.cond2_ok and self.cond3_ok


class Mismatch(BaseModel):
    t: int = Field(..., ge=1)
    expected: Optional[List[int]] = Field(
        None, description="Expected edge at round t; None when the run outlasts the sequence"
    )
    actual: List[List[int]]
    phase: Optional[int] = None
    stage: Optional[int] = None
    position: Optional[int] = None


class SequenceDiff(BaseModel):
    matched_prefix_len: int = Field(..., ge=0)
    expected_len: int = Field(..., ge=0)
    first_mismatch: Optional[Mismatch] = None
    copies_ok: bool = Field(
        True, description="Every matched round completed the copy on e_{t-1} | e_t"
    )

    @property
    def full_match(self) -> bool:
        return self.first_mismatch is None


class ScalingRow(BaseModel):
    n: int
    T: int
    vertices: int
    edges_initial: int
    edges_final: int
    wall_ms: float
    ratio_vs_half_n: Optional[float] = None

    def csv_fields(self) -> List[str]:
        ratio = "" if self.ratio_vs_half_n is None else f"{self.ratio_vs_half_n:.6f}"
        return [
            str(self.n),
            str(self.T),
            str(self.vertices),
            str(self.edges_initial),
            str(self.edges_final),
            f"{self.wall_ms:.3f}",
            ratio,
        ]


SCALING_CSV_HEADER = [
    "n",
    "T",
    "vertices",
    "edges_initial",
    "edges_final",
    "wall_ms",
    "ratio_vs_half_n",
]
