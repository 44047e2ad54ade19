"""JSON file formats for states, networks and reports.

State file::

    {"modes": n, "basis": "quadrature" | "complex",
     "matrix": [[...], ...], "mean": [...]}

Complex entries are written as ``[re, im]`` pairs. States are always written
in the quadrature basis; floats use Python's shortest round-trip repr, so
write -> read -> write is byte-stable.

Network file::

    {"modes": n, "ops": [{"type": "beamsplitter", "modes": [i, j],
                          "transmissivity": t, "phase": p}, ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import CovarianceState, convert_basis, convert_mean
from .errors import CNPError, InvalidOp, ParseError
from .symplectic import GaussianOp, NetworkSpec


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _number(value, where: str, allow_complex: bool):
    if isinstance(value, bool):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return value
    if (
        allow_complex
        and isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ParseError(f"{where}: expected a number, got {value!r}")


def _matrix(value, where: str, allow_complex: bool) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ParseError(f"{where}: expected a non-empty 2-D array")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != len(value):
            raise ParseError(f"{where}[{i}]: expected a row of length {len(value)}")
        rows.append([_number(v, f"{where}[{i}][{j}]", allow_complex) for j, v in enumerate(row)])
    return np.array(rows, dtype=complex if allow_complex else float)


def read_state_dict(data, source: str = "state") -> tuple[np.ndarray, np.ndarray | None]:
    """Raw quadrature-basis ``(matrix, mean)`` from a state document.

    Basis conversion happens here; physical validity is not checked.
    """
    if not isinstance(data, dict):
        raise ParseError(f"{source}: expected a JSON object")
    basis = data.get("basis", "quadrature")
    if basis not in ("quadrature", "complex"):
        raise ParseError(f"{source}: field 'basis' must be 'quadrature' or 'complex', got {basis!r}")
    if "matrix" not in data:
        raise ParseError(f"{source}: missing field 'matrix'")
    complex_basis = basis == "complex"
    matrix = _matrix(data["matrix"], f"{source}: matrix", complex_basis)
    if matrix.shape[0] % 2:
        raise ParseError(f"{source}: matrix dimension {matrix.shape[0]} is odd")
    n = matrix.shape[0] // 2
    if "modes" in data and data["modes"] != n:
        raise ParseError(f"{source}: field 'modes' is {data['modes']!r} but matrix is {2 * n}x{2 * n}")

    mean = None
    if data.get("mean") is not None:
        raw = data["mean"]
        if not isinstance(raw, list) or len(raw) != 2 * n:
            raise ParseError(f"{source}: field 'mean' must be an array of length {2 * n}")
        mean = np.array(
            [_number(v, f"{source}: mean[{i}]", complex_basis) for i, v in enumerate(raw)],
            dtype=complex if complex_basis else float,
        )
    if complex_basis:
        matrix = convert_basis(matrix, "complex_to_quadrature")
        if mean is not None:
            mean = convert_mean(mean, "complex_to_quadrature")
    return matrix, mean


def state_from_dict(data, source: str = "state") -> CovarianceState:
    matrix, mean = read_state_dict(data, source)
    return CovarianceState(matrix, mean)


def state_to_dict(state: CovarianceState) -> dict:
    return {
        "modes": state.n_modes,
        "basis": "quadrature",
        "matrix": state.matrix.tolist(),
        "mean": state.mean.tolist(),
    }


def dumps_state(state: CovarianceState) -> str:
    return dumps(state_to_dict(state))


def parse_state_file(path) -> CovarianceState:
    """Read and validate a state file.

    Raises:
        ParseError: unreadable file, malformed JSON, or bad fields.
        InvalidCovariance: the matrix is not a physical covariance matrix.
    """
    return state_from_dict(_load_json(path), str(path))


def read_state_file_raw(path) -> tuple[np.ndarray, np.ndarray | None]:
    return read_state_dict(_load_json(path), str(path))


def write_state_file(state: CovarianceState, path) -> None:
    Path(path).write_text(dumps_state(state))


def _op_from_dict(entry, where: str) -> GaussianOp:
    if not isinstance(entry, dict) or "type" not in entry:
        raise ParseError(f"{where}: expected an object with a 'type' field")
    kind = entry["type"]

    def num(name, default=None):
        if name not in entry:
            if default is None:
                raise ParseError(f"{where}: missing field {name!r}")
            return default
        return float(_number(entry[name], f"{where}.{name}", False))

    def index_list(name, size):
        value = entry.get(name)
        if (
            not isinstance(value, list)
            or len(value) != size
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
        ):
            raise ParseError(f"{where}: field {name!r} must be a list of {size} integers")
        return tuple(value)

    def index(name):
        value = entry.get(name)
        if not isinstance(value, int) or isinstance(value, bool):
            raise ParseError(f"{where}: field {name!r} must be an integer")
        return (value,)

    if kind == "beamsplitter":
        modes = index_list("modes", 2)
        params = {"transmissivity": num("transmissivity", 0.5), "phase": num("phase", 0.0)}
    elif kind == "phase":
        modes = index("mode")
        params = {"angle": num("angle")}
    elif kind == "squeeze":
        modes = index("mode")
        params = {"r": num("r"), "phi": num("phi", 0.0)}
    elif kind == "two_mode_squeeze":
        modes = index_list("modes", 2)
        params = {"r": num("r"), "phi": num("phi", 0.0)}
    elif kind == "raw":
        matrix = _matrix(entry.get("matrix"), f"{where}.matrix", False)
        modes = ()
        if "modes" in entry:
            modes = index_list("modes", matrix.shape[0] // 2)
        return GaussianOp("raw", modes, matrix=matrix)
    else:
        raise ParseError(f"{where}: unknown op type {kind!r}")
    return GaussianOp(kind, modes, params)


def network_from_dict(data, source: str = "network", n_modes: int | None = None) -> NetworkSpec:
    """Build a network; ``n_modes`` is used when the document has no ``modes``.

    Without either, the mode count is inferred from the ops.
    """
    if not isinstance(data, dict):
        raise ParseError(f"{source}: expected a JSON object")
    ops_raw = data.get("ops")
    if not isinstance(ops_raw, list):
        raise ParseError(f"{source}: field 'ops' must be an array")
    ops = []
    for i, entry in enumerate(ops_raw):
        where = f"{source}: ops[{i}]"
        try:
            ops.append(_op_from_dict(entry, where))
        except ParseError:
            raise
        except InvalidOp as exc:
            raise type(exc)(f"{where}: {exc}") from exc

    n = data.get("modes", n_modes)
    if n is None:
        if not ops:
            raise ParseError(f"{source}: cannot infer the mode count of an empty network without 'modes'")
        n = max(op.max_mode for op in ops) + 1
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{source}: field 'modes' must be a positive integer")
    try:
        return NetworkSpec(n, ops)
    except CNPError as exc:
        raise type(exc)(f"{source}: {exc}") from exc


def parse_network_file(path, n_modes: int | None = None) -> NetworkSpec:
    """Read a network file.

    Raises:
        ParseError: malformed file.
        NotSymplectic: a raw op's matrix fails the symplectic check.
        InvalidOp: an op is inconsistent (bad modes, transmissivity).
    """
    return network_from_dict(_load_json(path), str(path), n_modes)


def dumps_network(network: NetworkSpec) -> str:
    return dumps(network.to_dict())
