"""Randomized property-check cases and their results."""

from pydantic import BaseModel, ConfigDict, model_validator

from .network import NetworkSpec
from .probability import Channel, JointPMF


class PropertyCase(BaseModel):
    """Chained networks for the composition property.

    Party i relays ``X'_i = g_i(Y_i)`` from the base network into the second
    network; ``relays[i]`` maps ``Y{i}`` to ``Xp{i}``. ``psi_prime`` lists
    extra input laws of the second network beyond the induced one.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: NetworkSpec
    second: NetworkSpec
    relays: tuple[Channel, ...]
    input: JointPMF
    psi_prime: tuple[JointPMF, ...] = ()
    seed: int | None = None

    @model_validator(mode="after")
    def check_case(self) -> "PropertyCase":
        m = self.base.m
        if self.second.m != m or len(self.relays) != m:
            raise ValueError(f"Both networks and the relays must cover {m} parties")
        for i, relay in enumerate(self.relays, start=1):
            expected_in = ((f"Y{i}", self.base.output_alphabets[i - 1].size),)
            expected_out = ((f"Xp{i}", self.second.input_alphabets[i - 1].size),)
            if tuple((n, a.size) for n, a in relay.inputs) != expected_in:
                raise ValueError(f"Relay {i} must read {expected_in}")
            if tuple((n, a.size) for n, a in relay.outputs) != expected_out:
                raise ValueError(f"Relay {i} must write {expected_out}")
            if not set(relay.table.ravel().tolist()) <= {0.0, 1.0}:
                raise ValueError(f"Relay {i} must be deterministic")
        return self


class PropertyCheckResult(BaseModel):
    """Outcome of one property check; ``worst_violation`` is the largest excess over the bound."""

    property: str
    passed: bool
    worst_violation: float
    seed: int | None = None
