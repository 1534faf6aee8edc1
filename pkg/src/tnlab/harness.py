"""Experiment runner: certification suites, measurement sweeps and reports.

A config is a JSON object with a ``kind`` and kind-specific fields::

    {"kind": "lemma32", "group": {"kind": "cyclic", "support": [0, 1, 2, 3, 4, 5, 6, 7]},
     "channels": 3, "pooling": "max", "trials": 100, "rng_seed": 7}

Every suite produces per-trial deficits; a report passes when the largest
deficit is within tolerance, using :func:`certify`, the same predicate the
test suite asserts with.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import groups as gr
from . import network as nw
from . import nonlinearity as nl
from .errors import ConfigError, TNError
from .node import invariance_deficit, make_node, node_from_json

KINDS = ("lemma31", "lemma32", "theorem33", "property34", "theorem35",
         "stability", "unitarity", "cost", "curves")

DEFAULT_TOLERANCE = {
    "lemma31": 1e-12,
    "lemma32": 1e-12,
    "theorem33": 0.0,
    "unitarity": 0.0,
    "stability": 0.0,
    "property34": 1e-12,
    "theorem35": 1e-10,
    "cost": 0.0,
    "curves": 0.0,
}

DEFAULT_TRIALS = {"theorem35": 20}

REQUIRED = {
    "lemma31": (("group", "groups"),),
    "lemma32": (("node", "group"),),
    "theorem33": (("group", "groups"),),
    "unitarity": (("group", "groups"),),
    "stability": (("activations",),),
    "property34": (("network",),),
    "theorem35": (("network",),),
    "cost": (("sizes",),),
    "curves": (("activations",),),
}

SHIFT_CONVENTION = "# cyclic shift-by-k sends coordinate i to (i + k) mod n"

#: Median negative-control deficit expected to exceed this; empirical, never asserted per trial.
NEGATIVE_CONTROL_THRESHOLD = 1e-3


def certify(deficits: Sequence[float], tolerance: float) -> bool:
    """Pass rule shared by reports and tests: every deficit within tolerance."""
    return all(d <= tolerance for d in deficits)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    params: dict
    trials: int
    rng_seed: int
    tolerance: float
    name: str

    @classmethod
    def from_dict(cls, doc: dict, seed: int | None = None) -> "ExperimentConfig":
        """Validate a raw config. ``seed`` overrides the document's rng_seed.

        Seed fallback order: ``seed``, ``rng_seed`` field, ``TNLAB_SEED``, 0.
        """
        if not isinstance(doc, dict):
            raise ConfigError("<root>", "config must be a JSON object")
        kind = doc.get("kind")
        if kind not in KINDS:
            raise ConfigError("kind", f"must be one of {', '.join(KINDS)}; got {kind!r}")
        for alternatives in REQUIRED[kind]:
            if not any(a in doc for a in alternatives):
                raise ConfigError(alternatives[0], f"required for kind {kind!r}"
                                  + (f" (or {', '.join(alternatives[1:])})" if len(alternatives) > 1 else ""))
        trials = doc.get("trials", DEFAULT_TRIALS.get(kind, 100))
        if not isinstance(trials, int) or isinstance(trials, bool) or trials < 1:
            raise ConfigError("trials", "must be a positive integer")
        if seed is None:
            seed = doc.get("rng_seed")
        if seed is None:
            env = os.environ.get("TNLAB_SEED")
            if env is not None:
                try:
                    seed = int(env)
                except ValueError:
                    raise ConfigError("TNLAB_SEED", f"not an integer: {env!r}") from None
        seed = 0 if seed is None else seed
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError("rng_seed", "must be a non-negative integer")
        tol = doc.get("tolerance", DEFAULT_TOLERANCE[kind])
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol >= 0:
            raise ConfigError("tolerance", "must be a non-negative number")
        params = {k: v for k, v in doc.items()
                  if k not in ("kind", "trials", "rng_seed", "tolerance", "name")}
        return cls(kind, params, trials, seed, float(tol), str(doc.get("name", kind)))

    def as_dict(self) -> dict:
        return {"kind": self.kind, "name": self.name, "trials": self.trials,
                "rng_seed": self.rng_seed, "tolerance": self.tolerance, **self.params}

    @property
    def digest(self) -> str:
        blob = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class InvarianceReport:
    kind: str
    name: str
    config_digest: str
    rng_seed: int
    tolerance: float
    deficits: list[float]
    passed: bool
    counts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    duration_s: float = 0.0
    csv_text: str | None = None

    @property
    def max_deficit(self) -> float:
        return max(self.deficits) if self.deficits else 0.0

    @property
    def mean_deficit(self) -> float:
        return float(np.mean(self.deficits)) if self.deficits else 0.0

    def body(self) -> dict:
        """Everything except wall-clock timing; identical across reruns with the same seed."""
        return {
            "kind": self.kind,
            "name": self.name,
            "config_digest": self.config_digest,
            "rng_seed": self.rng_seed,
            "tolerance": self.tolerance,
            "max_deficit": self.max_deficit,
            "mean_deficit": self.mean_deficit,
            "passed": self.passed,
            "deficits": list(self.deficits),
            "counts": self.counts,
            "extra": self.extra,
        }

    def to_dict(self) -> dict:
        return {**self.body(), "duration_s": self.duration_s}


# ---------------------------------------------------------------------------
# config helpers


def _groups(params: dict, path: str = "groups") -> list[gr.FiniteUnitaryGroup]:
    docs = params.get("groups") or [params["group"]]
    out = []
    for k, doc in enumerate(docs):
        try:
            out.append(gr.group_from_json(doc, params.get("ambient_dim")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}[{k}]", str(exc)) from None
    return out


def _activations(params: dict, default=("relu",)) -> list[nl.Activation]:
    names = params.get("activations", list(default))
    if isinstance(names, str):
        names = names.split(",")
    try:
        return [nl.parse(a) for a in names]
    except ValueError as exc:
        raise ConfigError("activations", str(exc)) from None


def _network(params: dict) -> nw.TNNetwork:
    doc = params["network"]
    if not isinstance(doc, dict):
        raise ConfigError("network", "must be an object")
    if "layers" in doc:
        return nw.network_from_json(doc)
    allowed = {"depth", "block_size", "branching", "channels", "pooling", "top_pooling",
               "activation", "templates", "seed"}
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"network.{sorted(unknown)[0]}", "unknown builder field")
    kwargs = {k: v for k, v in doc.items() if k in allowed - {"activation", "seed"}}
    if "activation" in doc:
        kwargs["activation"] = nl.parse(doc["activation"])
    try:
        return nw.certified_network(rng=doc.get("seed", 0), **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError("network", str(exc)) from None


def _samples(rng: np.random.Generator, trials: int, dim: int, sign: str = "signed") -> np.ndarray:
    if sign == "nonnegative":
        return rng.uniform(0.0, 1.0, (trials, dim))
    if sign == "signed":
        return rng.standard_normal((trials, dim))
    raise ConfigError("inputs", "must be 'signed' or 'nonnegative'")


# ---------------------------------------------------------------------------
# suites


def _lemma31(cfg, rng):
    Gs = _groups(cfg.params)
    deficits = []
    dims = [G.support.ambient_dim for G in Gs]
    for _ in range(cfg.trials):
        worst = 0.0
        for G, dim in zip(Gs, dims):
            worst = max(worst, gr.haar_fixed_point_deficit(G, rng.standard_normal(dim)))
        deficits.append(worst)
    return deficits, {"group_orders": [len(G) for G in Gs]}, {}


def _lemma32(cfg, rng):
    p = cfg.params
    if "node" in p:
        node = node_from_json(p["node"])
    else:
        G = _groups({"group": p["group"], "ambient_dim": p.get("ambient_dim")}, "group")[0]
        channels = p.get("channels", 1)
        if not isinstance(channels, int) or channels < 1:
            raise ConfigError("channels", "must be a positive integer")
        templates = rng.standard_normal((channels, len(G.support)))
        eta = nl.parse(p.get("activation", "relu"))
        node = make_node(list(templates), G, p.get("pooling", "mean"), eta)
    G = node.channels[0].group
    probe = _groups({"group": p["probe"]}, "probe")[0] if "probe" in p else G
    dim = max(G.support.ambient_dim, max(node.support.indices) + 1)
    xs = _samples(rng, cfg.trials, dim, p.get("inputs", "signed"))
    deficits = [invariance_deficit(node, x, probe) for x in xs]
    extra = {}
    if "negative_probe" in p:
        neg = _groups({"group": p["negative_probe"]}, "negative_probe")[0]
        measured = [invariance_deficit(node, x, neg) for x in xs]
        extra["negative_control"] = {
            "deficits": measured,
            "median": statistics.median(measured),
            "threshold": NEGATIVE_CONTROL_THRESHOLD,
            "nontrivial": statistics.median(measured) > NEGATIVE_CONTROL_THRESHOLD,
        }
    counts = {"group_order": len(G), "channels": node.n_channels, "pooling": node.pooling}
    if node.has_zero_template:
        extra["warning"] = "node has an all-zero template"
    return deficits, counts, extra


def _theorem33(cfg, rng):
    Gs = _groups(cfg.params)
    etas = _activations(cfg.params, ("relu", "identity", "fracpow:0.9"))
    deficits = []
    for _ in range(cfg.trials):
        worst = 0.0
        for G in Gs:
            x = rng.standard_normal(G.support.ambient_dim)
            for eta in etas:
                for g in G.elements:
                    worst = max(worst, nl.covariance_deficit(eta, g, x))
        deficits.append(worst)
    return deficits, {"group_orders": [len(G) for G in Gs]}, {"activations": [e.name for e in etas]}


def _unitarity(cfg, rng):
    Gs = _groups(cfg.params)
    etas = _activations(cfg.params, ("relu", "identity", "fracpow:0.9"))
    deficits = []
    for _ in range(cfg.trials):
        worst = 0.0
        for G in Gs:
            x, y = rng.standard_normal((2, G.support.ambient_dim))
            for eta in etas:
                for g in G.elements:
                    worst = max(worst, nl.unitarity_gap(eta, g, x, y))
        deficits.append(worst)
    return deficits, {"group_orders": [len(G) for G in Gs]}, {"activations": [e.name for e in etas]}


def _stability(cfg, rng):
    etas = _activations(cfg.params)
    lo, hi = cfg.params.get("range", [0.0, 2.0])
    grid = np.linspace(lo, hi, cfg.params.get("points", 1001))
    certified, measured = [], {}
    for eta in etas:
        d = nl.stability_deficit(eta, grid)
        if eta.kind == "frac_power":
            measured[eta.name] = d
        else:
            certified.append(d)
    fracs = sorted((e for e in etas if e.kind == "frac_power"), key=lambda e: e.degree)
    seq = [measured[e.name] for e in fracs]
    monotone = all(a > b for a, b in zip(seq, seq[1:]))
    extra = {"frac_power_deficits": measured, "strictly_decreasing_in_degree": monotone}
    return certified, {"grid_points": len(grid)}, extra


def _property34(cfg, rng):
    net = _network(cfg.params)
    if net.depth < 2:
        raise ConfigError("network.depth", "property34 needs at least two layers")
    top_group = net.lifted_group(1, 0)
    layer0 = [net.lifted_group(0, i) for i in range(len(net.layers[0]))]
    transforms = list(top_group.elements)
    for _ in range(int(cfg.params.get("random_compositions", 50))):
        shifts = gr.embed([G.elements[int(rng.integers(len(G)))] for G in layer0], net.input_support)
        block = top_group.elements[int(rng.integers(len(top_group)))]
        transforms.append(gr.compose(shifts, gr.embed([block], net.input_support)))
    xs = _samples(rng, cfg.trials, net.input_dim, cfg.params.get("inputs", "signed"))
    per = np.zeros(cfg.trials)
    for g in transforms:
        per = np.maximum(per, nw.feature_covariance_deficit(net, xs, g, per_sample=True))
    return per.tolist(), {"transforms": len(transforms), "block_permutations": len(top_group)}, {}


def _theorem35(cfg, rng):
    net = _network(cfg.params)
    sizes = nw.layer_group_sizes(net)
    total = math.prod(sizes)
    mode = cfg.params.get("specs", "exhaustive" if total <= 10_000 else 500)
    xs = _samples(rng, cfg.trials, net.input_dim, cfg.params.get("inputs", "nonnegative"))
    strict = cfg.params.get("inputs", "nonnegative") == "nonnegative" and cfg.params.get("strict", True)
    if mode == "exhaustive":
        specs = nw.iter_transform_specs(net)
        n_specs = total
    elif isinstance(mode, int) and mode >= 1:
        specs = (nw.random_transform_spec(net, rng) for _ in range(mode))
        n_specs = mode
    else:
        raise ConfigError("specs", "must be 'exhaustive' or a positive integer")
    per = np.zeros(cfg.trials)
    for spec in specs:
        per = np.maximum(per, nw.nonlinear_invariance_deficit(net, xs, spec, strict=strict, per_sample=True))
    flat, hier = nw.hierarchy_cost(sizes)
    counts = {"depth": net.depth, "layer_group_sizes": sizes, "specs": n_specs,
              "flat_cost": flat, "hierarchical_cost": hier}
    return per.tolist(), counts, {"spec_mode": mode if mode == "exhaustive" else "random"}


def _cost(cfg, rng):
    sizes = cfg.params["sizes"]
    if not isinstance(sizes, list) or not all(isinstance(s, int) and s >= 1 for s in sizes) or not sizes:
        raise ConfigError("sizes", "must be a non-empty list of positive integers")
    flat, hier = nw.hierarchy_cost(sizes)
    # the certified quantity: hierarchical cost never exceeds flat cost
    return [max(0.0, float(hier - flat))], {"flat_cost": flat, "hierarchical_cost": hier, "sizes": sizes}, {}


def curves_csv(activations: Sequence[nl.Activation], lo: float, hi: float, points: int) -> str:
    """CSV with an ``x`` column and one column per activation."""
    tables = [nl.activation_curve(a, lo, hi, points) for a in activations]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x"] + [a.name for a in activations])
    for k in range(points):
        w.writerow([repr(float(tables[0][k, 0]))] + [repr(float(t[k, 1])) for t in tables])
    return buf.getvalue()


def _curves(cfg, rng):
    etas = _activations(cfg.params)
    lo, hi = cfg.params.get("range", [-1.5, 1.5])
    points = cfg.params.get("points", 301)
    text = curves_csv(etas, lo, hi, points)
    dist = {e.name: nl.sup_distance(e, nl.HARD_RELU, 0.0, 2.0) for e in etas}
    return [], {"points": points}, {"sup_distance_to_relu_0_2": dist, "csv": text}


SUITES = {
    "lemma31": _lemma31,
    "lemma32": _lemma32,
    "theorem33": _theorem33,
    "unitarity": _unitarity,
    "stability": _stability,
    "property34": _property34,
    "theorem35": _theorem35,
    "cost": _cost,
    "curves": _curves,
}


def run(config: ExperimentConfig | dict, out_dir: str | Path | None = None,
        seed: int | None = None) -> InvarianceReport:
    """Execute one suite deterministically; optionally write ``<name>.json`` (and CSV)."""
    cfg = config if isinstance(config, ExperimentConfig) else ExperimentConfig.from_dict(config, seed)
    rng = np.random.default_rng(cfg.rng_seed)
    start = time.perf_counter()
    try:
        deficits, counts, extra = SUITES[cfg.kind](cfg, rng)
    except ConfigError:
        raise
    except TNError as exc:
        raise type(exc)(f"[{cfg.kind}:{cfg.name}] {exc}") from exc
    csv_text = extra.pop("csv", None)
    passed = certify(deficits, cfg.tolerance)
    if cfg.kind == "stability":
        passed = passed and extra["strictly_decreasing_in_degree"]
    report = InvarianceReport(
        kind=cfg.kind,
        name=cfg.name,
        config_digest=cfg.digest,
        rng_seed=cfg.rng_seed,
        tolerance=cfg.tolerance,
        deficits=[float(d) for d in deficits],
        passed=bool(passed),
        counts=counts,
        extra=extra,
        duration_s=time.perf_counter() - start,
        csv_text=csv_text,
    )
    if out_dir is not None:
        write_report(report, out_dir)
    return report


def write_report(report: InvarianceReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{report.name}.json"
    path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    if report.csv_text is not None:
        (out / f"{report.name}.csv").write_text(report.csv_text)
    return path


@dataclass
class SweepResult:
    reports: list[InvarianceReport]
    rows: list[dict[str, Any]]
    exit_code: int

    def summary_csv(self) -> str:
        buf = io.StringIO()
        fields = ["experiment", "name", "max_deficit", "pass", "hierarchical_cost", "error"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow(row)
        return buf.getvalue()


def sweep(configs: Sequence[ExperimentConfig | dict], out_dir: str | Path | None = None,
          seed: int | None = None, fail_fast: bool = False) -> SweepResult:
    """Run every config; errors are recorded per row unless ``fail_fast``.

    Exit code: 1 if any suite failed certification, else 2 if any config
    errored, else 0.
    """
    if not configs:
        raise ConfigError("configs", "need at least one config")
    reports, rows = [], []
    failed = errored = False
    for k, doc in enumerate(configs):
        kind = doc.kind if isinstance(doc, ExperimentConfig) else (doc.get("kind") if isinstance(doc, dict) else None)
        try:
            rep = run(doc, out_dir, seed)
        except TNError as exc:
            if fail_fast:
                raise
            errored = True
            rows.append({"experiment": kind, "name": f"config[{k}]", "max_deficit": "",
                         "pass": False, "hierarchical_cost": "", "error": str(exc)})
            continue
        reports.append(rep)
        failed |= not rep.passed
        rows.append({"experiment": rep.kind, "name": rep.name, "max_deficit": repr(rep.max_deficit),
                     "pass": rep.passed, "hierarchical_cost": rep.counts.get("hierarchical_cost", ""),
                     "error": ""})
    result = SweepResult(reports, rows, 1 if failed else (2 if errored else 0))
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / "summary.csv").write_text(result.summary_csv())
    return result


def load_configs(path: str | Path) -> list[dict]:
    """A config file holds one config object or a list of them."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(str(path), f"invalid JSON: {exc}") from None
    return doc if isinstance(doc, list) else [doc]
