"""Executable checks of the potential-function properties on random instances.

Three properties of the cut-vector potential are checked:

1. chaining a second network behind deterministic relays adds at most the
   second network's cut vector at the induced input law;
2. a network that only echoes each input back to its own party has the
   all-zero cut vector;
3. degrading outputs with per-party post-processing never raises a cut.

The suite also checks that conditioning on a time-sharing variable stays
below the per-cut maxima and that n-letter cut terms dominate n times their
single-letter stage mixture.
"""

import logging
from collections.abc import Callable, Sequence

import numpy as np

from ..config import settings
from ..models.network import AllPsi, ExplicitPsi, NetworkSpec, input_names, output_names
from ..models.probability import Channel, JointPMF
from ..models.properties import PropertyCase, PropertyCheckResult
from ..models.region import CutVector, Region
from ..models.reports import PropertyReport, PropertySuiteSummary
from . import probkit
from .cutset import (
    batch_cut_matrix,
    conditional_cut_vector,
    cut_vector,
    cut_vector_of_joint,
    degrade,
    enumerate_inputs,
    phi_region,
)
from .random_cases import (
    case_seeds,
    random_channel,
    random_input,
    random_network,
    random_pmf,
    random_posts,
    random_relays,
    rng_for,
)
from .regioncalc import minkowski_sum, region_contains

logger = logging.getLogger(__name__)

PROPERTY_TOL = 1e-9
CONDITIONING_GRID = 21
CONDITIONING_TOL = 1e-3


def _result(name: str, violation: float, tol: float, seed: int | None, extra_failures: int = 0) -> PropertyCheckResult:
    return PropertyCheckResult(
        property=name,
        passed=violation <= tol and extra_failures == 0,
        worst_violation=float(violation),
        seed=seed,
    )


def check_property1(case: PropertyCase, tol: float = PROPERTY_TOL) -> PropertyCheckResult:
    """Cut vector of the chained network against base plus second at the induced input."""
    m = case.base.m
    relay_names = [f"Xp{i}" for i in range(1, m + 1)]
    second_outputs = [f"Yp{i}" for i in range(1, m + 1)]
    second = case.second.channel.rename(
        dict(zip(input_names(m), relay_names, strict=True)) | dict(zip(output_names(m), second_outputs, strict=True))
    )

    joint = probkit.compose(case.base.channel, case.input)
    joint = probkit.compose(probkit.parallel(*case.relays), joint)
    joint = probkit.compose(second, joint)

    composed = cut_vector_of_joint(
        joint,
        m,
        [[name] for name in input_names(m)],
        [[y, yp] for y, yp in zip(output_names(m), second_outputs, strict=True)],
    )
    base = cut_vector(case.base, case.input)
    induced = probkit.rename(
        probkit.reorder(probkit.marginalize(joint, relay_names), relay_names),
        dict(zip(relay_names, input_names(m), strict=True)),
    )
    increment = cut_vector(case.second, induced)
    violation = float(np.max(composed.as_array() - base.as_array() - increment.as_array()))

    # set-level inclusion on random points of the composed down-set
    right = minkowski_sum(
        Region(m=m, generators=(base,)),
        phi_region(case.second, ExplicitPsi(distributions=(induced, *case.psi_prime))),
    )
    rng = rng_for(case.seed or 0)
    probes = rng.uniform(size=(settings.property_probe_points, composed.as_array().size)) * composed.as_array()
    misses = sum(not region_contains(right, CutVector.from_array(m, probe)).contained for probe in probes)
    return _result("property1", violation, tol, case.seed, misses)


def check_property2(input: JointPMF, tol: float = PROPERTY_TOL, seed: int | None = None) -> PropertyCheckResult:
    """Echo network Y_i = X_i has the all-zero cut vector for any input law."""
    m = len(input.variables)
    input = probkit.rename(input, dict(zip(input.names, input_names(m), strict=True)))
    network = NetworkSpec.from_channel(Channel.identity(input.variables, output_names(m)))
    violation = float(np.max(np.abs(cut_vector(network, input).as_array())))
    return _result("property2", violation, tol, seed)


def check_property3(
    net: NetworkSpec,
    posts: Sequence[Channel],
    input: JointPMF,
    tol: float = PROPERTY_TOL,
    seed: int | None = None,
) -> PropertyCheckResult:
    """Post-processing every output never increases a cut value."""
    degraded = degrade(net, posts)
    violation = float(np.max(cut_vector(degraded, input).as_array() - cut_vector(net, input).as_array()))
    return _result("property3", violation, tol, seed)


def check_conditioning(
    net: NetworkSpec,
    joint_xz: JointPMF,
    capacities: np.ndarray,
    tol: float = CONDITIONING_TOL,
    seed: int | None = None,
) -> PropertyCheckResult:
    """Cut values conditioned on a time-sharing variable stay below the per-cut maxima."""
    violation = float(np.max(conditional_cut_vector(net, joint_xz).as_array() - capacities))
    return _result("conditioning", violation, tol, seed)


def check_single_letterization(
    joint: JointPMF,
    stages: Sequence[tuple[str, str, str]],
    tol: float = PROPERTY_TOL,
    seed: int | None = None,
) -> PropertyCheckResult:
    """I(X^n; Z^n | Y^n) >= n * I(X_G; Z_G | Y_G) for a fair stage selector G.

    ``stages[g]`` names (X_g, Y_g, Z_g) inside ``joint``.
    """
    xs, ys, zs = ([stage[i] for stage in stages] for i in range(3))
    block = probkit.cmi(joint, xs, zs, ys)
    mixture = probkit.stage_mixture(joint, [list(stage) for stage in stages], ["X", "Y", "Z"])
    single = probkit.cmi(mixture, ["X"], ["Z"], ["Y"])
    return _result("single_letterization", len(stages) * single - block, tol, seed)


def random_property1_case(seed: int, m: int = 2, size: int = 2) -> PropertyCase:
    rng = rng_for(seed)
    base = random_network(rng, m, size, size)
    second = random_network(rng, m, size, size)
    return PropertyCase(
        base=base,
        second=second,
        relays=random_relays(rng, base, second.input_sizes),
        input=random_input(rng, base),
        psi_prime=(random_input(rng, second),),
        seed=seed,
    )


def _property1_suite(seed: int) -> PropertyCheckResult:
    return check_property1(random_property1_case(seed))


def _property2_suite(seed: int) -> PropertyCheckResult:
    rng = rng_for(seed)
    m = 2 + seed % 2
    return check_property2(random_pmf(rng, [(name, 2) for name in input_names(m)]), seed=seed)


def _property3_suite(seed: int) -> PropertyCheckResult:
    rng = rng_for(seed)
    net = random_network(rng)
    return check_property3(net, random_posts(rng, net), random_input(rng, net), seed=seed)


_conditioning_inputs: dict[tuple[int, ...], np.ndarray] = {}


def _conditioning_suite(seed: int) -> PropertyCheckResult:
    rng = rng_for(seed)
    net = random_network(rng)
    key = net.input_sizes
    if key not in _conditioning_inputs:
        _conditioning_inputs[key] = enumerate_inputs(net, AllPsi(grid=CONDITIONING_GRID))[0]
    capacities = batch_cut_matrix(net, _conditioning_inputs[key]).max(axis=0)
    joint_xz = random_pmf(rng, [*zip(net.input_names, net.input_sizes, strict=True), ("Z", 3)])
    return check_conditioning(net, joint_xz, capacities, seed=seed)


def _single_letterization_suite(seed: int) -> PropertyCheckResult:
    rng = rng_for(seed)
    pair = random_pmf(rng, [("X", 2), ("Y", 2)])
    extended = probkit.iid_extension(pair, 2)
    stages = [("X_1", "Y_1", "Z_1"), ("X_2", "Y_2", "Z_2")]
    channel = random_channel(rng, [(n, 2) for n in ("X_1", "Y_1", "X_2", "Y_2")], [("Z_1", 2), ("Z_2", 2)])
    return check_single_letterization(probkit.compose(channel, extended), stages, seed=seed)


SUITES: dict[str, Callable[[int], PropertyCheckResult]] = {
    "property1": _property1_suite,
    "property2": _property2_suite,
    "property3": _property3_suite,
    "conditioning": _conditioning_suite,
    "single_letterization": _single_letterization_suite,
}


def run_property_suite(cases: int, seed: int = 0, suites: Sequence[str] | None = None) -> PropertyReport:
    """Run ``cases`` random cases of every suite, with per-case seeds spawned from ``seed``."""
    names = list(SUITES) if suites is None else list(suites)
    seeds = case_seeds(seed, cases * len(SUITES))
    summaries = {}
    for index, name in enumerate(SUITES):
        if name not in names:
            continue
        results = [SUITES[name](s) for s in seeds[index * cases : (index + 1) * cases]]
        failing = [r.seed for r in results if not r.passed]
        summaries[name] = PropertySuiteSummary(
            cases=len(results),
            failures=len(failing),
            worst_violation=max((max(r.worst_violation, 0.0) for r in results), default=0.0),
            failing_seeds=failing,
        )
        logger.info(f"{name}: {len(failing)} failures in {len(results)} cases")

    failures = sum(s.failures for s in summaries.values())
    return PropertyReport(
        success=failures == 0,
        message="All property checks passed" if failures == 0 else f"{failures} property checks failed",
        cases=sum(s.cases for s in summaries.values()),
        failures=failures,
        worst_violation=max((s.worst_violation for s in summaries.values()), default=0.0),
        seed=seed,
        suites=summaries,
    )
