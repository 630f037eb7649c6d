"""Synthetic Gaussian score subsets and the subset-imbalance drift experiment.

A simulation config is an INI file with one ``[subset <id>]`` section per
component and an optional ``[simulation]`` section::

    [simulation]
    seed = 7
    shrink = orange
    fractions = 1, 0.1, 0.01

    [subset green]
    label = bonafide
    mean = 2.0
    stddev = 2.0
    count = 5000

Components are generated in file order, each from its own random stream
keyed by ``(seed, subset id)``.
"""

from __future__ import annotations

import configparser
import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .crosstest import SubsetStore, combined_eer, pooled_bonafide
from .errors import InvalidSpec, UnknownSubset
from .metrics import LABELS, LabeledScoreSet
from .rng import Stream


@dataclass(frozen=True)
class Component:
    subset_id: str
    label: str
    mean: float
    stddev: float
    count: int


@dataclass(frozen=True)
class SimulationSpec:
    components: tuple[Component, ...]
    seed: int = 0
    # drift-experiment settings carried by config files; not used by generate()
    shrink: str | None = None
    fractions: tuple[float, ...] = field(default=(1.0, 0.1, 0.01))

    def validate(self):
        ids = [c.subset_id for c in self.components]
        if len(set(ids)) != len(ids):
            raise InvalidSpec("duplicate subset ids")
        for c in self.components:
            if c.label not in LABELS:
                raise InvalidSpec(f"{c.subset_id}: bad label {c.label!r}")
            if not (math.isfinite(c.mean) and math.isfinite(c.stddev)) or c.stddev <= 0:
                raise InvalidSpec(f"{c.subset_id}: stddev must be positive and finite")
            if c.count < 1:
                raise InvalidSpec(f"{c.subset_id}: count must be at least 1")
        if {c.label for c in self.components} != set(LABELS):
            raise InvalidSpec("need at least one bonafide and one spoof component")

    def component(self, subset_id) -> Component:
        for c in self.components:
            if c.subset_id == subset_id:
                return c
        raise UnknownSubset(subset_id)


@dataclass(frozen=True)
class DriftReport:
    shrink_subset: str
    inclusion_fractions: list[float]
    thresholds: list[float]
    eers: list[float]
    reference_threshold: float
    reference_eer: float
    seed: int

    def distances(self):
        return [abs(t - self.reference_threshold) for t in self.thresholds]


def generate(spec: SimulationSpec) -> SubsetStore:
    spec.validate()
    bona, spf = {}, {}
    for c in spec.components:
        values = Stream(spec.seed, f"component/{c.subset_id}").normal(c.count, c.mean, c.stddev)
        (bona if c.label == "bonafide" else spf)[c.subset_id] = LabeledScoreSet(c.label, values, c.subset_id)
    return SubsetStore(bona, spf)


def drift_experiment(spec: SimulationSpec, shrink_subset: str, fractions) -> DriftReport:
    """Combined-set EER threshold as one spoof subset is progressively thinned.

    For each fraction ``f`` the spoof subset ``shrink_subset`` is subsampled
    to ``f`` of its size and pooled with the other spoof subsets at full
    size. The reference threshold comes from the same evaluation with
    ``shrink_subset`` left out entirely.
    """
    fractions = [float(f) for f in fractions]
    if not fractions or any(not 0.0 < f <= 1.0 for f in fractions):
        raise InvalidSpec("fractions must lie in (0, 1]")
    if any(b >= a for a, b in zip(fractions, fractions[1:])):
        raise InvalidSpec("fractions must be strictly decreasing")
    if spec.component(shrink_subset).label != "spoof":
        raise InvalidSpec(f"{shrink_subset!r} is not a spoof component")

    store = generate(spec)
    bona = pooled_bonafide(store)
    spoofs = store.spoof_subsets
    outcomes = [combined_eer(bona, spoofs, {shrink_subset: f}, spec.seed) for f in fractions]
    rest = {sid: s for sid, s in spoofs.items() if sid != shrink_subset}
    if rest:
        ref = combined_eer(bona, rest, None, spec.seed)
    else:
        # nothing left once the subset is dropped; fall back to the full pool
        ref = combined_eer(bona, spoofs, None, spec.seed)
    return DriftReport(
        shrink_subset,
        fractions,
        [o.threshold for o in outcomes],
        [o.eer for o in outcomes],
        ref.threshold,
        ref.eer,
        spec.seed,
    )


def _parse_fractions(text):
    try:
        return tuple(float(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise InvalidSpec(f"bad fractions list {text!r}") from exc


def parse_spec(text: str, seed: int | None = None) -> SimulationSpec:
    """Parse a simulation config; ``seed`` overrides the file's seed."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise InvalidSpec(str(exc)) from exc
    components = []
    for section in cp.sections():
        if section == "simulation":
            continue
        kind, _, sid = section.partition(" ")
        if kind != "subset" or not sid.strip():
            raise InvalidSpec(f"unknown section [{section}]")
        sec = cp[section]
        try:
            components.append(
                Component(
                    sid.strip(),
                    sec["label"].strip(),
                    float(sec["mean"]),
                    float(sec["stddev"]),
                    int(sec["count"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise InvalidSpec(f"[{section}]: {exc}") from exc
    sim = cp["simulation"] if cp.has_section("simulation") else {}
    try:
        file_seed = int(sim.get("seed", "0"))
    except ValueError as exc:
        raise InvalidSpec(f"bad seed {sim.get('seed')!r}") from exc
    shrink = sim.get("shrink")
    fractions = _parse_fractions(sim["fractions"]) if "fractions" in sim else (1.0, 0.1, 0.01)
    spec = SimulationSpec(
        tuple(components),
        file_seed if seed is None else seed,
        shrink.strip() if shrink else None,
        fractions,
    )
    spec.validate()
    return spec


def load_spec(path, seed: int | None = None) -> SimulationSpec:
    return parse_spec(Path(path).read_text(encoding="utf-8"), seed)


def default_spec_text() -> str:
    """The bundled three-subset config (bona fide, large easy spoof, small hard spoof)."""
    return resources.files("crosseval").joinpath("data/fig1.cfg").read_text(encoding="utf-8")


def reference_layout() -> list[tuple[str, str, str]]:
    """``(subset_id, label, source corpus)`` for the 9 bona fide x 164 synthesizer layout."""
    text = resources.files("crosseval").joinpath("data/reference_subsets.csv").read_text(encoding="utf-8")
    rows = list(csv.reader(text.splitlines()))[1:]
    return [tuple(r) for r in rows]


def reference_spec(count: int = 600, seed: int = 0) -> SimulationSpec:
    """Synthetic stand-in for the reference layout, ``count`` trials per subset.

    Bona fide subsets get means spread over [2, 4]; synthesizer subsets get
    means spread over [-4, 3] so the matrix covers easy and hard pairs.
    """
    layout = reference_layout()
    bona = [r for r in layout if r[1] == "bonafide"]
    spf = [r for r in layout if r[1] == "spoof"]
    comps = [Component(sid, "bonafide", 2.0 + 2.0 * i / max(1, len(bona) - 1), 1.0, count) for i, (sid, _, _) in enumerate(bona)]
    comps += [Component(sid, "spoof", -4.0 + 7.0 * i / max(1, len(spf) - 1), 1.0, count) for i, (sid, _, _) in enumerate(spf)]
    return SimulationSpec(tuple(comps), seed)
