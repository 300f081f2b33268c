"""JSON file formats for states, density matrices, and roof certificates.

A state file holds exactly one representation:

  {"label": "bell", "amplitudes": {"dim_a": 2, "dim_b": 2,
                                   "re_im": [[re, im], ...]}}   # row-major
  {"label": "published", "schmidt": [0.5, 0.5]}                 # descending weights

A density file replaces "amplitudes" with "density" (row-major d x d entries,
d = dim_a * dim_b).  A roof certificate stores the estimate value and the
realizing ensemble as a list of {"probability", "amplitudes"} records, so it
can be re-imported and re-evaluated independently.
"""

from __future__ import annotations

import json

import numpy as np

from .states import DensityMatrix, PureState, SchmidtSpectrum


class StateFileError(ValueError):
    """Raised when a state file cannot be parsed or violates its schema."""


def _complex_array(node, path, context):
    if not isinstance(node, dict):
        raise StateFileError(f"{path}: {context} must be an object")
    for key in ("dim_a", "dim_b", "re_im"):
        if key not in node:
            raise StateFileError(f"{path}: {context} is missing key {key!r}")
    try:
        dim_a = int(node["dim_a"])
        dim_b = int(node["dim_b"])
        pairs = [(float(re), float(im)) for re, im in node["re_im"]]
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: malformed {context}: {exc}") from exc
    vec = np.array([re + 1j * im for re, im in pairs])
    return dim_a, dim_b, vec


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise StateFileError(f"{path}: cannot read file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def load_state(path):
    """Load a pure state or a Schmidt spectrum; exactly one must be present."""
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: top level must be an object")
    present = [key for key in ("amplitudes", "schmidt", "density") if key in doc]
    if present == ["amplitudes"]:
        dim_a, dim_b, vec = _complex_array(doc["amplitudes"], path, "amplitudes")
        try:
            return PureState(dim_a, dim_b, vec)
        except ValueError as exc:
            raise StateFileError(f"{path}: invalid pure state: {exc}") from exc
    if present == ["schmidt"]:
        try:
            return SchmidtSpectrum(np.asarray(doc["schmidt"], dtype=float))
        except (TypeError, ValueError) as exc:
            raise StateFileError(f"{path}: invalid schmidt spectrum: {exc}") from exc
    raise StateFileError(
        f"{path}: expected exactly one of 'amplitudes' or 'schmidt', found {present or 'neither'}"
    )


def load_bipartite_density(path):
    """Load any representation as (DensityMatrix, dim_a, dim_b).

    Pure amplitudes become their projector; a bare Schmidt spectrum is
    realized canonically on C^r (x) C^r.
    """
    doc = _load_json(path)
    if not isinstance(doc, dict):
        raise StateFileError(f"{path}: top level must be an object")
    present = [key for key in ("amplitudes", "schmidt", "density") if key in doc]
    if len(present) != 1:
        raise StateFileError(
            f"{path}: expected exactly one of 'amplitudes', 'schmidt' or 'density', "
            f"found {present or 'neither'}"
        )
    from .states import density_of

    try:
        if present == ["density"]:
            dim_a, dim_b, vec = _complex_array(doc["density"], path, "density")
            d = dim_a * dim_b
            if vec.size != d * d:
                raise StateFileError(
                    f"{path}: density has {vec.size} entries, expected {d * d}"
                )
            return DensityMatrix(d, vec.reshape(d, d)), dim_a, dim_b
        if present == ["amplitudes"]:
            psi = load_state(path)
            return density_of(psi), psi.dim_a, psi.dim_b
        spectrum = load_state(path)
        psi = PureState.from_schmidt_values(spectrum.values)
        return density_of(psi), psi.dim_a, psi.dim_b
    except StateFileError:
        raise
    except ValueError as exc:
        raise StateFileError(f"{path}: invalid density input: {exc}") from exc


def _amplitude_node(psi: PureState) -> dict:
    return {
        "dim_a": psi.dim_a,
        "dim_b": psi.dim_b,
        "re_im": [[float(z.real), float(z.imag)] for z in psi.amplitudes],
    }


def save_state(path, psi: PureState, label=None) -> None:
    doc = {"amplitudes": _amplitude_node(psi)}
    if label:
        doc["label"] = label
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def save_certificate(path, estimate, monotone_name: str, label=None) -> None:
    """Persist a roof estimate's realizing ensemble for independent re-checking."""
    doc = {
        "monotone": monotone_name,
        "value": float(estimate.value),
        "m": int(estimate.m),
        "restarts": int(estimate.restarts),
        "converged": bool(estimate.converged),
        "ensemble": [
            {"probability": float(p), "amplitudes": _amplitude_node(psi)}
            for p, psi in estimate.ensemble
        ],
    }
    if label:
        doc["label"] = label
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_certificate(path):
    """Return (value, monotone_name, ensemble) from a certificate file."""
    doc = _load_json(path)
    if not isinstance(doc, dict) or "ensemble" not in doc:
        raise StateFileError(f"{path}: not a roof certificate (missing 'ensemble')")
    try:
        ensemble = []
        for item in doc["ensemble"]:
            dim_a, dim_b, vec = _complex_array(item["amplitudes"], path, "ensemble amplitudes")
            ensemble.append((float(item["probability"]), PureState(dim_a, dim_b, vec)))
        return float(doc["value"]), str(doc.get("monotone", "")), ensemble
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"{path}: malformed certificate: {exc}") from exc
