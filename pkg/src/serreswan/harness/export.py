"""CSV export of a Gel'fand function on a Bloch-sphere grid of one M_2 block."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..algebra import AlgebraElement, make_algebra, pauli, random_hermitian
from ..bundle import constant_section
from ..errors import ExportError
from ..gelfand import gelfand
from ..hilbert import make_module, random_module_element
from ..states import PureState
from .config import RunConfig

HEADER = ("theta", "phi", "re_f", "im_f", "section_norm")

NAMED = {
    "unit": np.eye(2, dtype=complex),
    "sigma_x": pauli("x"),
    "sigma_y": pauli("y"),
    "sigma_z": pauli("z"),
}


def load_observable(source: str, seed: int) -> np.ndarray:
    """A 2x2 matrix from a name, ``random``, or a JSON/.npy file.

    JSON files hold ``{"real": [[...]], "imag": [[...]]}`` (``imag`` optional).
    """
    if source in NAMED:
        return NAMED[source]
    if source == "random":
        return random_hermitian(make_algebra([2]), seed).block(1)
    path = Path(source)
    if not path.is_file():
        raise ExportError(f"unknown observable {source!r}; use one of {sorted(NAMED) + ['random']} or a file")
    if path.suffix == ".npy":
        m = np.load(path)
    else:
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
            m = np.asarray(raw["real"], dtype=float) + 1j * np.asarray(raw.get("imag", 0.0), dtype=float)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ExportError(f"cannot read observable file {source}: {exc}") from exc
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ExportError(f"observable must be 2x2, got {m.shape}")
    return m


def bloch_state(block: int, theta: float, phi: float) -> PureState:
    return PureState.from_vector(block, [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def export_rows(config: RunConfig, observable: np.ndarray, grid: int, block: int = 1):
    """Yield CSV rows over ``theta`` in [0, pi] and ``phi`` in [0, 2 pi)."""
    if not isinstance(grid, int) or grid < 1:
        raise ExportError("grid size must be a positive integer")
    shape = make_algebra(config.blocks)
    if not 1 <= block <= len(shape):
        raise ExportError(f"block {block} outside 1..{len(shape)}")
    if shape.dim(block) != 2:
        raise ExportError(f"export needs a 2x2 block, block {block} has size {shape.dim(block)}")
    A: AlgebraElement = shape.embed(block, observable)
    f = gelfand(A)
    s = constant_section(random_module_element(make_module(shape, config.rows), config.seed))
    thetas = np.linspace(0.0, np.pi, grid)
    phis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    for theta in thetas:
        for phi in phis:
            rho = bloch_state(block, theta, phi)
            val = f(rho)
            yield (float(theta), float(phi), val.real, val.imag, s(rho).norm())


def export_csv(config: RunConfig, observable: np.ndarray, grid: int, out, block: int = 1) -> int:
    rows = list(export_rows(config, observable, grid, block))
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADER)
        for row in rows:
            w.writerow([repr(float(x)) for x in row])
    return len(rows)
