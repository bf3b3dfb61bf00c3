"""Problem description assembled from a problem file."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import default_grid
from ..core.exceptions import MissingSectionError
from .network import AllPsi, IndependentPsi, NetworkSpec, PermissibleSet, RateMatrix
from .probability import Channel
from .source import DistortionSpec, SourceSpec


class SearchConfig(BaseModel):
    """Reconstruction search settings."""

    model_config = ConfigDict(frozen=True)

    grid: int = Field(default=3, ge=2)
    deterministic_only: bool = False


class ProblemSpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    network: NetworkSpec
    psi: PermissibleSet | None = None
    source: SourceSpec | None = None
    distortion: DistortionSpec | None = None
    rates: RateMatrix | None = None
    search: SearchConfig | None = None
    reconstruction: Channel | None = None
    perturb_eps: float | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def check_cross_references(self) -> "ProblemSpec":
        m = self.network.m
        for section, other in (("source", self.source), ("distortion", self.distortion), ("rates", self.rates)):
            if other is not None and other.m != m:
                raise ValueError(f"[{section}] describes {other.m} parties, [network] has {m}")
        if self.distortion is not None and self.source is not None:
            for i, size in enumerate(self.source.message_sizes, start=1):
                if len(self.distortion.matrices[i - 1]) != size:
                    raise ValueError(f"delta{i} must be {size}x{size} to match the message alphabet of f{i}")
        return self

    def require(self, *sections: str) -> None:
        """Raise ``MissingSectionError`` naming every absent section among ``sections``."""
        missing = [name for name in sections if getattr(self, _FIELDS.get(name, name)) is None]
        if missing:
            raise MissingSectionError(
                f"Spec is missing section(s): {', '.join(f'[{name}]' for name in missing)}",
                details={"missing": missing},
            )

    def permissible_set(self, grid: int | None = None) -> PermissibleSet:
        """The declared permissible set, all input laws at the default grid when absent.

        ``grid`` overrides the resolution of grid-based sets.
        """
        psi = self.psi
        if psi is None:
            psi = AllPsi(grid=default_grid(max(self.network.input_sizes)))
        if grid is not None and isinstance(psi, AllPsi | IndependentPsi):
            psi = psi.model_copy(update={"grid": grid})
        return psi

    def search_config(self, grid: int | None = None, deterministic_only: bool = False) -> SearchConfig:
        search = self.search
        if search is None:
            sizes = self.source.message_sizes if self.source is not None else self.network.input_sizes
            search = SearchConfig(grid=default_grid(max(sizes)))
        update = {}
        if grid is not None:
            update["grid"] = grid
        if deterministic_only:
            update["deterministic_only"] = True
        return search.model_copy(update=update) if update else search


_FIELDS = {"perturb": "perturb_eps", "functions": "source"}


class CommandFlags(BaseModel):
    """Command-line flags shared by every command."""

    model_config = ConfigDict(frozen=True)

    grid: int | None = Field(default=None, ge=2)
    seed: int = Field(default=0, ge=0)
    out: str | None = None
    deterministic_recs: bool = False
    cases: int = Field(default=100, ge=1)
