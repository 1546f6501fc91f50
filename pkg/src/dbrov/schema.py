"""JSON problem schema: parsing, validation, serialization.

Complex numbers travel as [re, im] pairs; polynomial coefficients ascend in
powers of z.  The row function B is given as {"d": d, "coeffs": [...]} with
the outer index the power of z and the inner index the coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .rowschur import RowSchur
from .space import Tolerances

SCHEMA_VERSION = "1"


@dataclass
class ProblemSpec:
    B: RowSchur
    tolerances: Tolerances = field(default_factory=Tolerances)
    f: np.ndarray | None = None
    w: complex | None = None
    xi: np.ndarray | None = None
    lam: complex | None = None
    N: int | None = None
    radii: list | None = None
    grid_log2: int | None = None
    max_iter: int | None = None
    seed: int = 0
    schema_version: str = SCHEMA_VERSION


def _pair_to_complex(value, where: str) -> complex:
    if not (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(x, (int, float)) for x in value)):
        raise ValidationError(f"{where}: expected a [re, im] pair, got {value!r}")
    return complex(value[0], value[1])


def _complex_to_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _parse_coeff_vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise ValidationError(f"{where}: expected a nonempty coefficient list")
    return np.array([_pair_to_complex(v, f"{where}[{i}]")
                     for i, v in enumerate(value)])


def parse_problem(data: dict, B: RowSchur | None = None) -> ProblemSpec:
    """Validate a decoded JSON object into a ProblemSpec.

    A pre-built row B (e.g. from the fixture library) makes the 'B' field
    optional; a 'B' field present alongside it is rejected as ambiguous.
    """
    if not isinstance(data, dict):
        raise ValidationError("problem spec must be a JSON object")
    version = str(data.get("schema_version", SCHEMA_VERSION))
    if version != SCHEMA_VERSION:
        raise ValidationError(f"unsupported schema_version {version!r}")
    tol_kwargs = {}
    for key in ("tol_psd", "tol_factor", "tol_outer", "tol_eval"):
        if key in data.get("tolerances", {}):
            value = data["tolerances"][key]
            if not isinstance(value, (int, float)) or value <= 0:
                raise ValidationError(f"tolerances.{key} must be positive")
            tol_kwargs[key] = float(value)
    tol = Tolerances(**tol_kwargs)
    if B is not None:
        if "B" in data:
            raise ValidationError("'B' given both inline and as a fixture")
    else:
        if "B" not in data:
            raise ValidationError("missing required field 'B'")
        bspec = data["B"]
        if not isinstance(bspec, dict) or "d" not in bspec or "coeffs" not in bspec:
            raise ValidationError("'B' must be an object with 'd' and 'coeffs'")
        d = bspec["d"]
        if not isinstance(d, int) or d < 1:
            raise ValidationError(f"'B.d' must be a positive integer, got {d!r}")
        rows = bspec["coeffs"]
        if not isinstance(rows, list) or not rows:
            raise ValidationError("'B.coeffs' must be a nonempty list of rows")
        parsed = []
        for k, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != d:
                raise ValidationError(
                    f"'B.coeffs[{k}]' must list exactly d = {d} coordinate pairs"
                )
            parsed.append([_pair_to_complex(v, f"B.coeffs[{k}][{i}]")
                           for i, v in enumerate(row)])
        B = RowSchur(np.array(parsed), tol_psd=tol.tol_psd)

    spec = ProblemSpec(B=B, tolerances=tol, schema_version=version)
    if "f" in data:
        spec.f = _parse_coeff_vector(data["f"], "f")
    if "w" in data:
        spec.w = _pair_to_complex(data["w"], "w")
    if "lambda" in data:
        spec.lam = _pair_to_complex(data["lambda"], "lambda")
    if "xi" in data:
        if not isinstance(data["xi"], list) or len(data["xi"]) != B.dim:
            raise ValidationError(f"'xi' must list {B.dim} [re, im] pairs")
        spec.xi = np.array([_pair_to_complex(v, f"xi[{i}]")
                            for i, v in enumerate(data["xi"])])
    if "N" in data:
        if not isinstance(data["N"], int) or data["N"] < 0:
            raise ValidationError("'N' must be a nonnegative integer")
        spec.N = data["N"]
    if "radii" in data:
        radii = data["radii"]
        if not isinstance(radii, list) or not all(
            isinstance(r, (int, float)) and 0 <= r < 1 for r in radii
        ):
            raise ValidationError("'radii' must list values in [0, 1)")
        spec.radii = [float(r) for r in radii]
    if "grid_log2" in data:
        if not isinstance(data["grid_log2"], int) or not 4 <= data["grid_log2"] <= 20:
            raise ValidationError("'grid_log2' must be an integer in 4..20")
        spec.grid_log2 = data["grid_log2"]
    if "max_iter" in data:
        if not isinstance(data["max_iter"], int) or data["max_iter"] < 1:
            raise ValidationError("'max_iter' must be a positive integer")
        spec.max_iter = data["max_iter"]
    if "seed" in data:
        if not isinstance(data["seed"], int):
            raise ValidationError("'seed' must be an integer")
        spec.seed = data["seed"]
    return spec


def serialize_problem(spec: ProblemSpec) -> dict:
    """Inverse of parse_problem; parse(serialize(s)) reproduces s."""
    out: dict = {
        "schema_version": spec.schema_version,
        "B": {
            "d": spec.B.dim,
            "coeffs": [
                [_complex_to_pair(c) for c in row] for row in spec.B.coeffs
            ],
        },
        "tolerances": {
            "tol_psd": spec.tolerances.tol_psd,
            "tol_factor": spec.tolerances.tol_factor,
            "tol_outer": spec.tolerances.tol_outer,
            "tol_eval": spec.tolerances.tol_eval,
        },
    }
    if spec.f is not None:
        out["f"] = [_complex_to_pair(c) for c in spec.f]
    if spec.w is not None:
        out["w"] = _complex_to_pair(spec.w)
    if spec.lam is not None:
        out["lambda"] = _complex_to_pair(spec.lam)
    if spec.xi is not None:
        out["xi"] = [_complex_to_pair(c) for c in spec.xi]
    if spec.N is not None:
        out["N"] = spec.N
    if spec.radii is not None:
        out["radii"] = spec.radii
    if spec.grid_log2 is not None:
        out["grid_log2"] = spec.grid_log2
    if spec.max_iter is not None:
        out["max_iter"] = spec.max_iter
    if spec.seed:
        out["seed"] = spec.seed
    return out
