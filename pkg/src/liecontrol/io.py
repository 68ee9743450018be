"""System-definition files and pulse files.

A system file is a JSON object::

    {
      "label": "three-level",
      "dimension": 3,
      "drift": [[0, 0, 0], [0, 1, 0], [0, 0, 2]],
      "controls": [[[0, 1, 0], [1, 0, 1], [0, 1, 0]]],
      "states": {"rho0": [[...]]},
      "observables": {"A": [[...]]}
    }

Matrix entries are real numbers or ``[re, im]`` pairs.  Instead of
``drift``/``controls`` an ``oscillator`` object with ``energies``,
``dipoles`` and optional ``signs`` may be given.

A pulse file is plain text: a header line ``T K M`` followed by ``K`` rows
of ``M`` amplitudes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import ControlPulse
from .errors import ValidationError
from .linalg import check_hermitian
from .models import ControlSystem, OscillatorSpec, build_oscillator
from .states import density_matrix, maximally_mixed


class SpecFileError(ValidationError):
    """Malformed system or pulse file."""


@dataclass
class SystemFile:
    system: ControlSystem
    states: dict[str, np.ndarray] = field(default_factory=dict)
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    digest: str = ""
    oscillator: OscillatorSpec | None = None

    def state(self, name: str) -> np.ndarray:
        if name in self.states:
            return self.states[name]
        if name == "maximally_mixed":
            return maximally_mixed(self.system.dim)
        raise SpecFileError(
            f"unknown state {name!r}; available: {', '.join(self.state_names()) or '(none)'}"
        )

    def observable(self, name: str) -> np.ndarray:
        if name in self.observables:
            return self.observables[name]
        if name in self.states:
            return self.states[name]
        if name == "identity":
            return np.eye(self.system.dim, dtype=complex)
        names = sorted(set(self.observables) | set(self.states) | {"identity"})
        raise SpecFileError(f"unknown observable {name!r}; available: {', '.join(names)}")

    def state_names(self) -> list[str]:
        return sorted(set(self.states) | {"maximally_mixed"})


def _entry(v, where: str) -> complex:
    if isinstance(v, bool):
        raise SpecFileError(f"{where}: booleans are not matrix entries")
    if isinstance(v, (int, float)):
        return complex(float(v), 0.0)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in v
    ):
        return complex(float(v[0]), float(v[1]))
    raise SpecFileError(f"{where}: entry must be a number or an [re, im] pair, got {v!r}")


def decode_matrix(obj, where: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SpecFileError(f"{where}: expected a list of rows")
    n = len(obj)
    if any(len(r) != n for r in obj):
        raise SpecFileError(f"{where}: matrix must be square ({n} rows)")
    if dim is not None and n != dim:
        raise SpecFileError(f"{where}: expected dimension {dim}, got {n}")
    return np.array(
        [[_entry(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(obj)],
        dtype=complex,
    )


def encode_matrix(M: np.ndarray) -> list:
    """Rows of ``[re, im]`` pairs at full precision."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def parse_system(text: str, source: str = "<string>") -> SystemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SpecFileError(f"{source}: top level must be an object")

    has_dense = "drift" in doc or "controls" in doc
    has_osc = "oscillator" in doc
    if has_dense == has_osc:
        raise SpecFileError(f"{source}: give exactly one of drift+controls or oscillator")
    label = str(doc.get("label", ""))
    dim = doc.get("dimension")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 2):
        raise SpecFileError(f"{source}: dimension must be an integer >= 2")

    osc = None
    if has_osc:
        o = doc["oscillator"]
        if not isinstance(o, dict) or "energies" not in o or "dipoles" not in o:
            raise SpecFileError(f"{source}: oscillator needs energies and dipoles")
        osc = OscillatorSpec(
            energies=tuple(float(e) for e in o["energies"]),
            dipoles=tuple(float(d) for d in o["dipoles"]),
            signs=None if o.get("signs") is None else tuple(float(s) for s in o["signs"]),
            label=label,
        )
        system = build_oscillator(osc)
        if dim is not None and dim != system.dim:
            raise SpecFileError(f"{source}: dimension {dim} disagrees with {system.dim} energies")
    else:
        if "drift" not in doc or "controls" not in doc:
            raise SpecFileError(f"{source}: drift and controls must both be given")
        drift = check_hermitian(decode_matrix(doc["drift"], "drift", dim), "drift")
        dim = drift.shape[0]
        ctrls = doc["controls"]
        if not isinstance(ctrls, list) or not ctrls:
            raise SpecFileError(f"{source}: controls must be a non-empty list of matrices")
        controls = tuple(
            check_hermitian(decode_matrix(c, f"controls[{m}]", dim), f"controls[{m}]")
            for m, c in enumerate(ctrls)
        )
        system = ControlSystem(drift, controls, label=label)

    states = {}
    for name, m in (doc.get("states") or {}).items():
        states[name] = density_matrix(decode_matrix(m, f"states.{name}", system.dim), f"states.{name}")
    observables = {}
    for name, m in (doc.get("observables") or {}).items():
        observables[name] = check_hermitian(
            decode_matrix(m, f"observables.{name}", system.dim), f"observables.{name}"
        )
    digest = hashlib.sha256(text.encode()).hexdigest()
    return SystemFile(system, states, observables, digest, osc)


def load_system(path) -> SystemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    return parse_system(text, str(path))


def dump_system(sf: SystemFile) -> str:
    """Serialize as a dense system file; ``parse_system`` restores it exactly."""
    doc = {
        "label": sf.system.label,
        "dimension": sf.system.dim,
        "drift": encode_matrix(sf.system.drift),
        "controls": [encode_matrix(H) for H in sf.system.controls],
    }
    if sf.states:
        doc["states"] = {k: encode_matrix(v) for k, v in sf.states.items()}
    if sf.observables:
        doc["observables"] = {k: encode_matrix(v) for k, v in sf.observables.items()}
    return json.dumps(doc, indent=1) + "\n"


def read_pulse(path) -> ControlPulse:
    path = Path(path)
    try:
        lines = [ln for ln in path.read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise SpecFileError(f"{path}: empty pulse file")
    head = lines[0].split()
    try:
        T, K, M = float(head[0]), int(head[1]), int(head[2])
    except (IndexError, ValueError) as exc:
        raise SpecFileError(f"{path}:1: header must be 'T K M'") from exc
    if K < 1 or M < 1:
        raise SpecFileError(f"{path}:1: K and M must be positive")
    if len(lines) - 1 != K:
        raise SpecFileError(f"{path}: header announces {K} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        try:
            row = [float(v) for v in ln.split()]
        except ValueError as exc:
            raise SpecFileError(f"{path}:{i}: {exc}") from exc
        if len(row) != M:
            raise SpecFileError(f"{path}:{i}: expected {M} amplitudes, got {len(row)}")
        rows.append(row)
    return ControlPulse(T, np.array(rows))


def format_pulse(pulse: ControlPulse) -> str:
    out = [f"{pulse.duration:.17g} {pulse.steps} {pulse.n_controls}"]
    out += [" ".join(f"{a:.17g}" for a in row) for row in pulse.amplitudes]
    return "\n".join(out) + "\n"
