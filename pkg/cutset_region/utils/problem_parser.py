"""Reader and writer for the sectioned plain-text problem format.

A spec file is a sequence of ``[section]`` blocks. Inside a block, a line that
starts with a letter is a key with optional arguments (``grid 11``); lines
that start with a number are table rows and belong to the most recent key,
or to the section itself when no key precedes them. ``#`` starts a comment.
Tables are row-major over the canonical variable order.
"""

import logging
from dataclasses import dataclass, field
from math import prod

import numpy as np
from pydantic import ValidationError

from ..config import default_grid
from ..core.exceptions import (
    DimensionMismatchError,
    NormalizationError,
    ProblemSpecSyntaxError,
)
from ..models.network import AllPsi, ExplicitPsi, IndependentPsi, NetworkSpec, RateMatrix, input_names, output_names
from ..models.probability import Alphabet, Channel, JointPMF
from ..models.problem import ProblemSpec, SearchConfig
from ..models.source import DistortionSpec, SourceSpec, source_names

logger = logging.getLogger(__name__)

SECTIONS = ("network", "psi", "source", "functions", "distortion", "rates", "search", "reconstruction", "perturb")
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


@dataclass
class _Token:
    text: str
    line: int
    column: int


@dataclass
class _Entry:
    key: str
    line: int
    args: list[_Token] = field(default_factory=list)
    rows: list[list[_Token]] = field(default_factory=list)


@dataclass
class _Section:
    name: str
    line: int
    entries: list[_Entry] = field(default_factory=list)

    def get(self, key: str, required: bool = True) -> _Entry | None:
        found = [e for e in self.entries if e.key == key]
        if len(found) > 1:
            raise ProblemSpecSyntaxError(f"Duplicate key '{key}' in [{self.name}]", line=found[1].line, column=1)
        if not found:
            if required:
                raise ProblemSpecSyntaxError(f"[{self.name}] needs a '{key}' entry", line=self.line, column=1)
            return None
        return found[0]

    def all(self, key: str) -> list[_Entry]:
        return [e for e in self.entries if e.key == key]


def _tokenize(line: str, number: int) -> list[_Token]:
    tokens = []
    column = 0
    for part in line.split():
        column = line.index(part, column)
        tokens.append(_Token(part, number, column + 1))
        column += len(part)
    return tokens


def _split_sections(text: str) -> dict[str, _Section]:
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            column = line.index("[") + 1
            if not stripped.endswith("]"):
                raise ProblemSpecSyntaxError("Unterminated section header", line=number, column=column)
            name = stripped[1:-1].strip().lower()
            if name not in SECTIONS:
                raise ProblemSpecSyntaxError(f"Unknown section [{name}]", line=number, column=column)
            if name in sections:
                raise ProblemSpecSyntaxError(f"Section [{name}] appears twice", line=number, column=column)
            current = sections[name] = _Section(name, number)
            continue
        tokens = _tokenize(line, number)
        if current is None:
            raise ProblemSpecSyntaxError("Content before the first section header", line=number, column=tokens[0].column)
        first = tokens[0].text[0]
        if first.isalpha() or first == "_":
            current.entries.append(_Entry(tokens[0].text.lower(), number, tokens[1:]))
        else:
            last = current.entries[-1] if current.entries else None
            if last is None or not (last.key == "" or _accepts_rows(current.name, last.key)):
                last = _Entry("", number)
                current.entries.append(last)
            last.rows.append(tokens)
    return sections


def _accepts_rows(section: str, key: str) -> bool:
    if section == "network":
        return key == "channel"
    if section == "psi":
        return key == "distribution"
    if section == "source":
        return key == "joint"
    if section == "functions":
        return key.startswith("f")
    if section == "distortion":
        return key.startswith("delta")
    return False


def _float(token: _Token) -> float:
    try:
        value = float(token.text)
    except ValueError as e:
        raise ProblemSpecSyntaxError(f"Expected a number, got '{token.text}'", line=token.line, column=token.column) from e
    if not np.isfinite(value):
        raise ProblemSpecSyntaxError(f"Non-finite number '{token.text}'", line=token.line, column=token.column)
    return value


def _int(token: _Token, minimum: int | None = None) -> int:
    try:
        value = int(token.text)
    except ValueError as e:
        raise ProblemSpecSyntaxError(
            f"Expected an integer, got '{token.text}'", line=token.line, column=token.column
        ) from e
    if minimum is not None and value < minimum:
        raise ProblemSpecSyntaxError(
            f"Expected an integer >= {minimum}, got {value}", line=token.line, column=token.column
        )
    return value


def _args(entry: _Entry, count: int | None = None) -> list[_Token]:
    if count is not None and len(entry.args) != count:
        raise ProblemSpecSyntaxError(
            f"'{entry.key}' takes {count} value(s), got {len(entry.args)}", line=entry.line, column=1
        )
    return entry.args


def _flat(entry: _Entry, expected: int, what: str) -> list[float]:
    values = [_float(t) for row in entry.rows for t in row]
    if len(values) != expected:
        raise DimensionMismatchError(
            f"line {entry.line}: {what} has {len(values)} entries, expected {expected}",
            details={"line": entry.line, "entries": len(values), "expected": expected},
        )
    return values


def _matrix(entry: _Entry, rows: int, cols: int, what: str) -> np.ndarray:
    if len(entry.rows) != rows:
        raise DimensionMismatchError(
            f"line {entry.line}: {what} has {len(entry.rows)} rows, expected {rows}",
            details={"line": entry.line, "rows": len(entry.rows), "expected": rows},
        )
    matrix = []
    for row in entry.rows:
        if len(row) != cols:
            raise DimensionMismatchError(
                f"line {row[0].line}: {what} row has {len(row)} entries, expected {cols}",
                details={"line": row[0].line, "entries": len(row), "expected": cols},
            )
        matrix.append([_float(t) for t in row])
    return np.array(matrix)


def _table_line(entry: _Entry, error: NormalizationError) -> NormalizationError:
    """Attach the source line of the offending row to a row-level normalization error."""
    row = error.details.get("row")
    if row is None or row >= len(entry.rows):
        line = entry.line
    else:
        line = entry.rows[row][0].line
    return NormalizationError(f"line {line}: {error.message}", details={**error.details, "line": line})


def _size(alphabet: Alphabet | int) -> int:
    return alphabet.size if isinstance(alphabet, Alphabet) else int(alphabet)


def _channel(entry: _Entry, inputs, outputs, what: str) -> Channel:
    rows = prod(_size(a) for _, a in inputs)
    cols = prod(_size(a) for _, a in outputs)
    table = _matrix(entry, rows, cols, what)
    try:
        return Channel(inputs, outputs, table)
    except NormalizationError as e:
        raise _table_line(entry, e) from e


def _pmf(entry: _Entry, variables, what: str) -> JointPMF:
    size = prod(_size(a) for _, a in variables)
    values = _flat(entry, size, what)
    try:
        return JointPMF(variables, values)
    except NormalizationError as e:
        raise NormalizationError(f"line {entry.line}: {what}: {e.message}", details={**e.details, "line": entry.line}) from e


def _sizes(section: _Section, key: str, m: int | None = None) -> list[int]:
    entry = section.get(key)
    sizes = [_int(t, minimum=1) for t in _args(entry, m)]
    if not sizes:
        raise ProblemSpecSyntaxError(f"'{key}' needs at least one size", line=entry.line, column=1)
    return sizes


def _parse_network(section: _Section) -> NetworkSpec:
    m = _int(_args(section.get("parties"), 1)[0], minimum=2)
    in_sizes = _sizes(section, "inputs", m)
    out_sizes = _sizes(section, "outputs", m)
    entry = section.get("channel", required=False) or section.get("")
    inputs = tuple(zip(input_names(m), in_sizes, strict=True))
    outputs = tuple(zip(output_names(m), out_sizes, strict=True))
    return NetworkSpec.from_channel(_channel(entry, inputs, outputs, "channel"))


def _parse_psi(section: _Section, network: NetworkSpec):
    kind_entry = section.get("kind", required=False)
    kind = _args(kind_entry, 1)[0].text.lower() if kind_entry else "all"
    if kind == "explicit":
        entries = section.all("distribution")
        if not entries:
            raise ProblemSpecSyntaxError("Explicit [psi] needs at least one 'distribution'", line=section.line, column=1)
        variables = tuple(zip(network.input_names, network.input_sizes, strict=True))
        return ExplicitPsi(distributions=tuple(_pmf(e, variables, f"distribution at line {e.line}") for e in entries))
    grid_entry = section.get("grid", required=False)
    grid = _int(_args(grid_entry, 1)[0], minimum=2) if grid_entry else default_grid(max(network.input_sizes))
    if kind == "all":
        return AllPsi(grid=grid)
    if kind == "independent":
        return IndependentPsi(grid=grid)
    token = kind_entry.args[0]
    raise ProblemSpecSyntaxError(f"Unknown [psi] kind '{token.text}'", line=token.line, column=token.column)


def _parse_source(source: _Section, functions: _Section | None, m: int) -> SourceSpec:
    if functions is None:
        raise ProblemSpecSyntaxError("[source] needs a matching [functions] section", line=source.line, column=1)
    sizes = _sizes(source, "alphabets", m)
    variables = tuple(zip(source_names(m), sizes, strict=True))
    joint = _pmf(source.get("joint", required=False) or source.get(""), variables, "source joint")
    message_sizes = []
    tables = []
    for i in range(1, m + 1):
        entry = functions.get(f"f{i}")
        message_sizes.append(_int(_args(entry, 1)[0], minimum=1))
        values = [_int(t) for row in entry.rows for t in row]
        if len(values) != prod(sizes):
            raise DimensionMismatchError(
                f"line {entry.line}: f{i} has {len(values)} values, expected {prod(sizes)}",
                details={"line": entry.line, "function": i},
            )
        tables.append(tuple(values))
    return SourceSpec(
        m=m,
        source_alphabets=tuple(Alphabet(size=s) for s in sizes),
        joint=joint,
        message_alphabets=tuple(Alphabet(size=s) for s in message_sizes),
        functions=tuple(tables),
    )


def _parse_distortion(section: _Section, source: SourceSpec | None, m: int) -> DistortionSpec:
    targets = tuple(_float(t) for t in _args(section.get("targets"), m))
    if section.get("hamming", required=False) is not None:
        if source is None:
            raise ProblemSpecSyntaxError("'hamming' needs the [source] and [functions] sections", line=section.line, column=1)
        return DistortionSpec.hamming(source.message_sizes, targets)
    matrices = []
    for i in range(1, m + 1):
        entry = section.get(f"delta{i}")
        size = len(entry.rows)
        matrices.append(tuple(tuple(row) for row in _matrix(entry, size, size, f"delta{i}").tolist()))
    return DistortionSpec(matrices=tuple(matrices), targets=targets)


def _parse_rates(section: _Section, m: int) -> RateMatrix:
    matrix = _matrix(section.get(""), m, m, "rate matrix")
    return RateMatrix(rates=tuple(tuple(row) for row in matrix.tolist()))


def _parse_search(section: _Section) -> SearchConfig:
    values = {}
    grid = section.get("grid", required=False)
    if grid is not None:
        values["grid"] = _int(_args(grid, 1)[0], minimum=2)
    flag = section.get("deterministic_only", required=False)
    if flag is not None:
        token = _args(flag, 1)[0]
        if token.text.lower() not in _TRUE | _FALSE:
            raise ProblemSpecSyntaxError(f"Expected true/false, got '{token.text}'", line=token.line, column=token.column)
        values["deterministic_only"] = token.text.lower() in _TRUE
    return SearchConfig(**values)


def _check_keys(section: _Section, allowed: set[str]) -> None:
    for entry in section.entries:
        if entry.key == "" and "" not in allowed:
            raise ProblemSpecSyntaxError(
                f"Table rows without a key in [{section.name}]", line=entry.line, column=entry.rows[0][0].column
            )
        if entry.key not in allowed and not any(entry.key.startswith(p[:-1]) for p in allowed if p.endswith("*")):
            raise ProblemSpecSyntaxError(f"Unknown key '{entry.key}' in [{section.name}]", line=entry.line, column=1)


_ALLOWED = {
    "network": {"parties", "inputs", "outputs", "channel", ""},
    "psi": {"kind", "grid", "distribution"},
    "source": {"alphabets", "joint", ""},
    "functions": {"f*"},
    "distortion": {"targets", "hamming", "delta*"},
    "rates": {""},
    "search": {"grid", "deterministic_only"},
    "reconstruction": {""},
    "perturb": {"eps"},
}


def parse_problem(text: str) -> ProblemSpec:
    """Parse a problem spec.

    Raises:
        ProblemSpecSyntaxError: Malformed text, with line and column
        DimensionMismatchError: Tables or sections of inconsistent sizes
        NormalizationError: A pmf or channel row that does not sum to 1
        InvariantViolationError: A distortion matrix with a nonzero diagonal
    """
    sections = _split_sections(text)
    for section in sections.values():
        _check_keys(section, _ALLOWED[section.name])
    if "network" not in sections:
        raise ProblemSpecSyntaxError("Spec needs a [network] section", line=1, column=1)

    current = sections["network"]
    try:
        network = _parse_network(current)
        m = network.m
        psi = _parse_psi(sections["psi"], network) if "psi" in sections else None
        current = sections.get("source", current)
        source = _parse_source(sections["source"], sections.get("functions"), m) if "source" in sections else None
        current = sections.get("distortion", current)
        distortion = _parse_distortion(sections["distortion"], source, m) if "distortion" in sections else None
        current = sections.get("rates", current)
        rates = _parse_rates(sections["rates"], m) if "rates" in sections else None
        search = _parse_search(sections["search"]) if "search" in sections else None
        reconstruction = None
        if "reconstruction" in sections:
            current = sections["reconstruction"]
            if source is None:
                raise ProblemSpecSyntaxError("[reconstruction] needs a [source] section", line=current.line, column=1)
            reconstruction = _channel(
                current.get(""), source.source_variables(), source.reconstruction_variables(), "reconstruction"
            )
        eps = None
        if "perturb" in sections:
            current = sections["perturb"]
            token = _args(current.get("eps"), 1)[0]
            eps = _float(token)
            if eps < 0:
                raise ProblemSpecSyntaxError(f"eps must be nonnegative, got {eps}", line=token.line, column=token.column)
        current = sections["network"]
        spec = ProblemSpec(
            network=network,
            psi=psi,
            source=source,
            distortion=distortion,
            rates=rates,
            search=search,
            reconstruction=reconstruction,
            perturb_eps=eps,
        )
    except ValidationError as e:
        first = e.errors()[0]
        raise DimensionMismatchError(
            f"line {current.line}: [{current.name}] {first['msg']}",
            details={"line": current.line, "section": current.name},
        ) from e
    logger.debug(f"Parsed problem with m={m} and sections {sorted(sections)}")
    return spec


def _fmt(value: float) -> str:
    return repr(float(value))


def _rows(matrix: np.ndarray) -> list[str]:
    return [" ".join(_fmt(x) for x in row) for row in np.atleast_2d(matrix)]


def serialize_problem(spec: ProblemSpec) -> str:
    """Write ``spec`` in the problem format; parsing the result gives an equal spec."""
    net = spec.network
    lines = [
        "[network]",
        f"parties {net.m}",
        "inputs " + " ".join(str(s) for s in net.input_sizes),
        "outputs " + " ".join(str(a.size) for a in net.output_alphabets),
        "channel",
        *_rows(net.channel.rows()),
    ]
    if spec.psi is not None:
        lines += ["", "[psi]", f"kind {spec.psi.kind}"]
        if isinstance(spec.psi, ExplicitPsi):
            for pmf in spec.psi.distributions:
                lines += ["distribution", *_rows(pmf.table.reshape(1, -1))]
        else:
            lines.append(f"grid {spec.psi.grid}")
    if spec.source is not None:
        src = spec.source
        lines += [
            "",
            "[source]",
            "alphabets " + " ".join(str(s) for s in src.source_sizes),
            "joint",
            *_rows(src.joint.table.reshape(1, -1)),
            "",
            "[functions]",
        ]
        for i, values in enumerate(src.functions, start=1):
            lines += [f"f{i} {src.message_sizes[i - 1]}", " ".join(str(v) for v in values)]
    if spec.distortion is not None:
        lines += ["", "[distortion]", "targets " + " ".join(_fmt(t) for t in spec.distortion.targets)]
        for i in range(1, spec.distortion.m + 1):
            lines += [f"delta{i}", *_rows(spec.distortion.matrix(i))]
    if spec.rates is not None:
        lines += ["", "[rates]", *_rows(spec.rates.as_array())]
    if spec.search is not None:
        lines += [
            "",
            "[search]",
            f"grid {spec.search.grid}",
            f"deterministic_only {str(spec.search.deterministic_only).lower()}",
        ]
    if spec.reconstruction is not None:
        lines += ["", "[reconstruction]", *_rows(spec.reconstruction.rows())]
    if spec.perturb_eps is not None:
        lines += ["", "[perturb]", f"eps {_fmt(spec.perturb_eps)}"]
    return "\n".join(lines) + "\n"

