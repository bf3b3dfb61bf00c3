"""Report models emitted by the commands."""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from .base import BaseReport
from .probability import Channel

RESOLUTION_NOTE = (
    "Regions are computed on a finite input grid and are inner approximations; "
    "an 'outside' verdict holds at this resolution only."
)


class Resolution(BaseModel):
    """How the permissible set was enumerated."""

    kind: Literal["explicit", "all", "independent"]
    grid: int | None = None
    points: int
    note: str = RESOLUTION_NOTE


class TimeSharingCertificate(BaseModel):
    """Time-sharing law p(z) with input laws q(x|z), flattened in X1..Xm row-major order."""

    pz: list[float]
    qxz: list[list[float]]
    generator_indices: list[int]
    achieved: list[float] = Field(..., description="sum_z p(z) cut_vector(q(x|z)), canonical cut order")

    @property
    def support(self) -> int:
        return len(self.pz)


class CutsetRateReport(BaseReport):
    inside: bool
    demand: list[float] = Field(..., description="Aggregate rate crossing each cut")
    violated_cuts: list[int] = Field(default_factory=list)
    slack: list[float]
    certificate: TimeSharingCertificate | None = None
    resolution: Resolution


class Theorem1Verdict(BaseReport):
    status: Literal["witness_found", "no_witness_at_resolution", "invalid_candidate"]
    inside: bool
    virtual_cut_vector: list[float]
    distortion: list[float]
    violated_cuts: list[int] = Field(default_factory=list)
    cut_slack: list[float]
    certificate: TimeSharingCertificate | None = None
    resolution: Resolution | None = None


class WitnessFound(BaseModel):
    """A reconstruction passing the containment test, with its verdict."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    status: Literal["witness_found"] = "witness_found"
    reconstruction: Channel = Field(..., exclude=True)
    reconstruction_rows: list[list[float]]
    deterministic: bool
    candidates_searched: int
    verdict: Theorem1Verdict


class NoWitnessAtResolution(BaseModel):
    """No searched reconstruction fits.

    ``min_violation`` is the smallest worst-cut shortfall over the candidates
    that met the distortion targets; ``None`` when no candidate met them.
    """

    status: Literal["no_witness_at_resolution"] = "no_witness_at_resolution"
    candidates_searched: int
    min_violation: float | None = None
    best_violated_cuts: list[int] = Field(default_factory=list)
    best_cut_slack: list[float] = Field(default_factory=list)
    resolution: Resolution


class WitnessReport(BaseReport):
    status: Literal["witness_found", "no_witness_at_resolution"]
    search: dict[str, Any]
    result: WitnessFound | NoWitnessAtResolution


class RegionReport(BaseReport):
    generators: int
    region: dict[str, Any]
    resolution: Resolution
    out: str | None = None


class PerturbationStage(BaseModel):
    party: int
    case: Literal["mixing", "indicator"]
    p_q0: float
    distortion_before: float
    distortion_after: float
    budget: float
    cut_before: list[float]
    cut_after: list[float]
    increase: list[float]


class PerturbationReport(BaseReport):
    eps: float
    stages: list[PerturbationStage]
    distortion: list[float]
    variables: list[str]
    joint: list[float]


class PropertySuiteSummary(BaseModel):
    cases: int
    failures: int
    worst_violation: float
    failing_seeds: list[int] = Field(default_factory=list)


class PropertyReport(BaseReport):
    cases: int
    failures: int
    worst_violation: float
    seed: int
    suites: dict[str, PropertySuiteSummary]
