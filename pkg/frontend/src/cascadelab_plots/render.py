"""Figure regeneration from harness CSVs. No simulation, no RNG, no network."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "cascadelab-plots"

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("tail-flatness", "rayleigh", "outside-giant", "fpt-ratio")

SCHEMAS = {
    "tail-flatness": ["k", "p_hat", "se", "ci_low", "ci_high", "theory"],
    "rayleigh": ["rep", "t_scaled"],
    "outside-giant": ["i", "ratio_mean", "ratio_se", "theory"],
    "fpt-ratio": ["k", "boundary", "p_hat", "se", "theory"],
}

GLOBS = {
    "tail-flatness": "tails",
    "rayleigh": "disconnect",
    "outside-giant": "outside",
    "fpt-ratio": "fpt",
}


class SchemaError(ValueError):
    """A CSV does not match the documented harness schema."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple  # CSV paths, sorted
    kind: str
    out_path: str  # without extension; .png and .svg are written
    overlay: bool = True
    params: dict = field(default_factory=dict)  # p2, d, theta overrides

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("no input CSVs for this kind")


def read_harness_csv(path: str, kind: str) -> tuple:
    """Parse one harness CSV; returns (meta dict from comment header, columns)."""
    meta: dict = {}
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            for tok in line[1:].split():
                key, sep, val = tok.partition("=")
                if sep:
                    meta[key] = val
        elif line.strip():
            body.append(line)
    if not body:
        raise SchemaError(f"{path}: empty CSV")
    header = body[0].split(",")
    expected = SCHEMAS[kind]
    if header != expected:
        missing = [c for c in expected if c not in header]
        extra = [c for c in header if c not in expected]
        raise SchemaError(
            f"{path}: header mismatch for kind {kind}: "
            f"missing columns {missing}, unexpected columns {extra}"
        )
    cols: dict = {name: [] for name in header}
    for line in body[1:]:
        parts = line.split(",")
        if len(parts) != len(header):
            raise SchemaError(f"{path}: row width != header width: {line!r}")
        for name, val in zip(header, parts):
            cols[name].append(val)
    for name in cols:
        if name != "boundary":
            cols[name] = np.array([float(v) for v in cols[name]])
    return meta, cols


def _tail_constant(theta: float) -> float:
    return 2 * theta / math.sqrt(2 * math.pi)


def _rayleigh_pdf(x, p2: float, d: float):
    a = 2 * p2 / (d - 2 * p2)
    return 2 * a * x * np.exp(-a * x * x)


def _save(fig, out_path: str) -> tuple:
    png = out_path + ".png"
    svg = out_path + ".svg"
    fig.savefig(png, dpi=120, metadata={"Software": None})
    fig.savefig(svg, metadata={"Date": None})
    plt.close(fig)
    return png, svg


def render(spec: FigureSpec) -> tuple:
    """Render one figure; returns the (png, svg) paths written."""
    if spec.kind == "tail-flatness":
        return _render_tails(spec)
    if spec.kind == "rayleigh":
        return _render_rayleigh(spec)
    if spec.kind == "outside-giant":
        return _render_outside(spec)
    return _render_fpt(spec)


def _render_tails(spec: FigureSpec) -> tuple:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    theta = float(spec.params.get("theta", 1.0))
    for path in spec.inputs:
        meta, cols = read_harness_csv(path, "tail-flatness")
        if cols["k"].size == 0:
            raise SchemaError(f"{path}: empty k grid")
        if "m" not in meta:
            raise SchemaError(f"{path}: header lacks m=<edges>, cannot scale k/m")
        m = float(meta["m"])
        theta = float(meta.get("theta", theta))
        label = f"n={meta['n']}" if "n" in meta else os.path.basename(path)
        ax.plot(cols["k"] / m, np.sqrt(cols["k"]) * cols["p_hat"], marker="o", label=label)
    if spec.overlay:
        ax.axhline(_tail_constant(theta), color="black", linestyle="--", linewidth=1,
                   label=f"2θ/√(2π) = {_tail_constant(theta):.3f}")
    ax.set_xlabel("k / m")
    ax.set_ylabel("k$^{1/2}$ P(A ≥ k)")
    ax.set_title("Failure-size tail flatness")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec.out_path)


def _render_rayleigh(spec: FigureSpec) -> tuple:
    p2 = float(spec.params.get("p2", 0.5))
    d = float(spec.params.get("d", 2.5))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for path in spec.inputs:
        _, cols = read_harness_csv(path, "rayleigh")
        t = cols["t_scaled"]
        ax.hist(t, bins=40, density=True, alpha=0.6, label=os.path.basename(path))
        if spec.overlay:
            x = np.linspace(0.0, float(t.max()) * 1.05, 400)
            ax.plot(x, _rayleigh_pdf(x, p2, d), color="black", linewidth=1.2,
                    label="limit density")
    ax.set_xlabel("T / √m")
    ax.set_ylabel("density")
    ax.set_title("First disconnection: scaled time vs limit law")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec.out_path)


def _render_outside(spec: FigureSpec) -> tuple:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for path in spec.inputs:
        _, cols = read_harness_csv(path, "outside-giant")
        ax.errorbar(cols["i"], cols["ratio_mean"], yerr=1.96 * cols["ratio_se"],
                    marker="o", label=os.path.basename(path))
        if spec.overlay and cols["theory"].size:
            ax.axhline(cols["theory"][0], color="black", linestyle="--", linewidth=1)
    ax.set_xlabel("removals i")
    ax.set_ylabel("(m/i$^2$) · edges outside giant")
    ax.set_title("Outside-giant ratio convergence")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec.out_path)


def _render_fpt(spec: FigureSpec) -> tuple:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for path in spec.inputs:
        _, cols = read_harness_csv(path, "fpt-ratio")
        boundaries = cols["boundary"]
        ratio = cols["p_hat"] / cols["theory"]
        err = 1.96 * cols["se"] / cols["theory"]
        xs = np.arange(len(boundaries))
        ax.errorbar(xs, ratio, yerr=err, fmt="o", label=os.path.basename(path))
        ax.set_xticks(xs)
        ax.set_xticklabels(boundaries)
    if spec.overlay:
        ax.axhline(1.0, color="black", linestyle="--", linewidth=1)
    ax.set_xlabel("boundary")
    ax.set_ylabel("P(T > k) / theory")
    ax.set_title("First-passage survival vs constant-boundary tail")
    ax.legend()
    fig.tight_layout()
    return _save(fig, spec.out_path)


def discover_inputs(input_dir: str, kind: str) -> tuple:
    """CSVs for a kind, by filename prefix, sorted for determinism."""
    prefix = GLOBS[kind]
    names = sorted(
        f for f in os.listdir(input_dir)
        if f.startswith(prefix) and f.endswith(".csv")
    )
    return tuple(os.path.join(input_dir, f) for f in names)
