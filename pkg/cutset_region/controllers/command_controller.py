"""Command controller dispatching CLI commands to the service layer."""

import json
import logging
from pathlib import Path

from ..config import settings
from ..core.exceptions import CutsetRegionException, DistortionPreconditionError, UnknownCommandError
from ..models.base import BaseReport, ErrorReport
from ..models.problem import CommandFlags, ProblemSpec
from ..models.reports import PerturbationReport, RegionReport, Theorem1Verdict, WitnessFound, WitnessReport
from ..services.cutset import classical_cutset_check, enumerate_phi
from ..services.lemmacheck import run_property_suite
from ..services.regioncalc import region_to_json
from ..services.virtualsrc import (
    expected_distortion,
    perturb_reconstruction,
    reconstruction_joint,
    theorem1_check,
    virtual_cut_vector,
    witness_search,
)

logger = logging.getLogger(__name__)

EXIT_COMPUTED = 0
EXIT_VIOLATED = 1
EXIT_INPUT_ERROR = 2


class CommandController:
    """
    Controller for the cutset-region commands.

    Every command follows the same workflow:
    1. Check the problem carries the sections the command needs
    2. Resolve the permissible set and search settings against the flags
    3. Run the service operation
    4. Wrap the result in a report and pick the exit code

    Exit codes: 0 when the result was computed and holds, 1 when a bound is
    violated or no witness exists at the chosen resolution, 2 on input errors.
    """

    COMMANDS = ("region", "check", "cutset-rates", "perturb", "props")

    def run_command(
        self,
        spec: ProblemSpec | None,
        command: str,
        flags: CommandFlags | None = None,
    ) -> tuple[int, BaseReport]:
        """
        Run ``command`` on ``spec``.

        Args:
            spec: Parsed problem; only ``props`` accepts ``None``
            command: One of ``COMMANDS``
            flags: Command-line flags

        Returns:
            Exit code and the report to print
        """
        flags = flags or CommandFlags()
        handlers = {
            "region": self._region,
            "check": self._check,
            "cutset-rates": self._cutset_rates,
            "perturb": self._perturb,
            "props": self._props,
        }
        try:
            if command not in handlers:
                raise UnknownCommandError(
                    f"Unknown command '{command}', expected one of {', '.join(self.COMMANDS)}",
                    details={"command": command},
                )
            if spec is None and command != "props":
                raise UnknownCommandError(f"Command '{command}' needs a spec file", error_code="MISSING_SPEC_FILE")
            logger.info(f"Running '{command}'")
            return handlers[command](spec, flags)
        except CutsetRegionException as e:
            logger.error(f"{command} failed: {e.message}")
            return EXIT_INPUT_ERROR, error_report(e)

    def _region(self, spec: ProblemSpec, flags: CommandFlags) -> tuple[int, BaseReport]:
        hull = enumerate_phi(spec.network, spec.permissible_set(flags.grid)).convex_hull()
        document = region_to_json(hull.region)
        if flags.out is not None:
            Path(flags.out).write_text(document + "\n", encoding="utf-8")
            logger.info(f"Region with {len(hull.region.generators)} generators written to {flags.out}")
        return EXIT_COMPUTED, RegionReport(
            message=f"Convexified region with {len(hull.region.generators)} generators",
            generators=len(hull.region.generators),
            region=json.loads(document),
            resolution=hull.resolution,
            out=flags.out,
        )

    def _check(self, spec: ProblemSpec, flags: CommandFlags) -> tuple[int, BaseReport]:
        spec.require("source", "functions", "distortion")
        psi = spec.permissible_set(flags.grid)
        if spec.reconstruction is not None:
            try:
                verdict = theorem1_check(spec.source, spec.distortion, spec.reconstruction, spec.network, psi)
            except DistortionPreconditionError as e:
                return EXIT_INPUT_ERROR, Theorem1Verdict(
                    success=False,
                    message=e.message,
                    status="invalid_candidate",
                    inside=False,
                    virtual_cut_vector=list(virtual_cut_vector(spec.source, spec.reconstruction).coords),
                    distortion=[
                        expected_distortion(spec.source, spec.distortion, spec.reconstruction, i)
                        for i in range(1, spec.source.m + 1)
                    ],
                    cut_slack=[],
                )
            return (EXIT_COMPUTED if verdict.inside else EXIT_VIOLATED), verdict

        search = spec.search_config(deterministic_only=flags.deterministic_recs)
        result = witness_search(spec.source, spec.distortion, spec.network, psi, search)
        found = isinstance(result, WitnessFound)
        if found:
            message = f"Witness found after {result.candidates_searched} candidates"
        else:
            message = f"No witness among {result.candidates_searched} candidates at this resolution"
        return (EXIT_COMPUTED if found else EXIT_VIOLATED), WitnessReport(
            success=found,
            message=message,
            status=result.status,
            search={"grid": search.grid, "deterministic_only": search.deterministic_only},
            result=result,
        )

    def _cutset_rates(self, spec: ProblemSpec, flags: CommandFlags) -> tuple[int, BaseReport]:
        spec.require("rates")
        report = classical_cutset_check(spec.rates, spec.network, spec.permissible_set(flags.grid))
        return (EXIT_COMPUTED if report.inside else EXIT_VIOLATED), report

    def _perturb(self, spec: ProblemSpec, flags: CommandFlags) -> tuple[int, BaseReport]:
        spec.require("source", "functions", "distortion", "reconstruction", "perturb")
        src, dist, eps = spec.source, spec.distortion, spec.perturb_eps
        outcome = perturb_reconstruction(reconstruction_joint(src, spec.reconstruction), src, dist, eps)

        exceeded = [
            stage.party
            for stage in outcome.stages
            if max(stage.increase) > stage.budget + settings.certificate_tol
            or stage.distortion_after > dist.target(stage.party) + settings.certificate_tol
        ]
        if exceeded:
            message = f"Repair of parties {exceeded} exceeded a distortion target or information budget"
        else:
            message = f"Distortions repaired to their targets with eps={eps!r}"
        report = PerturbationReport(
            success=not exceeded,
            message=message,
            eps=eps,
            stages=outcome.stages,
            distortion=[stage.distortion_after for stage in outcome.stages],
            variables=list(outcome.joint.names),
            joint=outcome.joint.table.ravel().tolist(),
        )
        return (EXIT_VIOLATED if exceeded else EXIT_COMPUTED), report

    def _props(self, spec: ProblemSpec | None, flags: CommandFlags) -> tuple[int, BaseReport]:
        report = run_property_suite(flags.cases, seed=flags.seed)
        return (EXIT_COMPUTED if report.failures == 0 else EXIT_VIOLATED), report


def error_report(error: CutsetRegionException) -> ErrorReport:
    return ErrorReport(message=error.message, error_code=error.error_code, details=error.details)


def render_report(report: BaseReport) -> str:
    """Report as deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True)
