"""Command-line front end.

    entwalk run --config run.json [--out PATH] [--basis ports|positions] [--format json|csv]
    entwalk compare A B [--threshold S]

A run configuration is one JSON object; every field is read from the file and
nothing from the environment::

    {
      "steps": 4,
      "mode": "pair",                 # single | pair | anyon-sweep | independence-report
      "input_rails": [4, 5],          # default: the two central rails (one for single)
      "phi": "pi",                    # pair mode; number (radians) or "pi", "pi/2", "3pi/4", ...
      "phis": [0, "pi/4", "pi/2"],    # anyon-sweep mode
      "coupler_model": {"kind": "ideal"},
      "basis": "positions",           # ports | positions
      "format": "csv",                # json | csv
      "output": "fermions.csv"        # optional; stdout if absent
    }

A polarized coupler model reads
``{"kind": "polarized", "coupling_H": 0.785, "ratio_VH": 1.1}``; instead of
``ratio_VH`` it may give ``"tilt"`` plus a ``"tilt_table"`` of [angle, ratio]
rows. ``"birefringent_phase"`` and ``"overrides"`` ([[step, index, kl], ...])
are optional. Non-default couplers of the nominal network go under
``"network": {"default": {"cross_coupling": c, "phase": p}, "couplers": [[t, k, c, p], ...]}``.

Exit status: 0 on success, 1 when ``compare`` falls below ``--threshold``,
2 for invalid input or I/O failure.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import SchemaError, WalkError
from .imperfections import (
    PolarizedCouplerModel,
    entangled_with_imperfections,
    polarization_independence_report,
    polarized_network,
    ratio_from_tilt,
)
from .lattice import regroup_pair, regroup_single
from .metrics import max_abs_difference, similarity
from .network import CouplerSpec, NetworkSpec, build_network_unitary, central_rails, single_particle_distribution
from .results import FORMATS, Block, ResultDocument, dumps, read
from .two_particle import ExchangePhase, pair_amplitudes, pair_distribution

MODES = ("single", "pair", "anyon-sweep", "independence-report")
BASES = ("ports", "positions")
_FILE_BASIS = {"ports": "bs-ports", "positions": "walk-positions"}
_KNOWN_FIELDS = {
    "steps", "mode", "input_rails", "phi", "phis", "coupler_model", "network",
    "basis", "format", "output",
}
_PI_EXPR = re.compile(r"^\s*(?P<num>\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$")


def parse_phase(value: Any, where: str = "phi") -> float:
    """Radians from a number or an expression like "pi", "3pi/4", "pi/2"."""
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a number or a multiple of pi, got {value!r}")
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise SchemaError(f"{where}: must be finite")
        return float(value)
    if isinstance(value, str):
        m = _PI_EXPR.match(value)
        if m:
            num = float(m["num"]) if m["num"] else 1.0
            den = float(m["den"]) if m["den"] else 1.0
            if den == 0:
                raise SchemaError(f"{where}: division by zero in {value!r}")
            return num * math.pi / den
    raise SchemaError(f"{where}: expected a number or a multiple of pi, got {value!r}")


def _require_int(raw: Any, where: str, minimum: int) -> int:
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise SchemaError(f"{where}: expected an integer, got {raw!r}")
    if raw < minimum:
        raise SchemaError(f"{where}: must be >= {minimum}, got {raw}")
    return raw


def _require_real(raw: Any, where: str) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)) or not math.isfinite(raw):
        raise SchemaError(f"{where}: expected a finite number, got {raw!r}")
    return float(raw)


@dataclass(frozen=True)
class RunConfig:
    steps: int
    mode: str
    input_rails: tuple[int, ...]
    phis: tuple[float, ...] = (0.0,)
    model: PolarizedCouplerModel | None = None
    network: NetworkSpec | None = None
    basis: str = "positions"
    format: str = "json"
    output: str | None = None
    raw: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_dict(cls, raw: Any) -> "RunConfig":
        if not isinstance(raw, dict):
            raise SchemaError("config: top level must be a JSON object")
        unknown = sorted(set(raw) - _KNOWN_FIELDS)
        if unknown:
            raise SchemaError(f"{unknown[0]}: unknown field")
        if "steps" not in raw:
            raise SchemaError("steps: required")
        steps = _require_int(raw["steps"], "steps", 1)
        mode = raw.get("mode")
        if mode not in MODES:
            raise SchemaError(f"mode: expected one of {MODES}, got {mode!r}")
        basis = raw.get("basis", "positions")
        if basis not in BASES:
            raise SchemaError(f"basis: expected one of {BASES}, got {basis!r}")
        fmt = raw.get("format", "json")
        if fmt not in FORMATS:
            raise SchemaError(f"format: expected one of {FORMATS}, got {fmt!r}")
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise SchemaError("output: expected a path string")

        n_in = 1 if mode in ("single", "independence-report") else 2
        if "input_rails" in raw:
            rails = raw["input_rails"]
            if not isinstance(rails, list) or len(rails) != n_in:
                raise SchemaError(f"input_rails: mode {mode!r} needs a list of {n_in} rail(s)")
            rails = tuple(_require_int(r, "input_rails", 1) for r in rails)
            for r in rails:
                if r > 2 * steps:
                    raise SchemaError(f"input_rails: rail {r} out of range 1..{2 * steps}")
            if n_in == 2 and rails[0] == rails[1]:
                raise SchemaError("input_rails: the two rails must differ")
        else:
            rails = central_rails(steps)[:n_in]

        if mode == "anyon-sweep":
            if "phis" not in raw or not isinstance(raw["phis"], list) or not raw["phis"]:
                raise SchemaError("phis: anyon-sweep needs a non-empty list of phases")
            phis = tuple(parse_phase(p, f"phis[{n}]") for n, p in enumerate(raw["phis"]))
        else:
            phis = (parse_phase(raw.get("phi", 0.0)),)

        return cls(
            steps=steps,
            mode=mode,
            input_rails=rails,
            phis=phis,
            model=_parse_model(raw.get("coupler_model", {"kind": "ideal"}), steps),
            network=_parse_network(raw.get("network"), steps),
            basis=basis,
            format=fmt,
            output=output,
            raw=raw,
        )

    def spec(self) -> NetworkSpec:
        return self.network if self.network is not None else NetworkSpec.balanced(self.steps)

    def header(self) -> dict:
        """Every parameter the output depends on, plus the library version."""
        head = {
            "version": __version__,
            "steps": self.steps,
            "mode": self.mode,
            "input_rails": list(self.input_rails),
            "basis": self.basis,
            "coupler_model": "ideal" if self.model is None else {
                "coupling_H": self.model.coupling_H,
                "ratio_VH": self.model.ratio_VH,
                "birefringent_phase": self.model.birefringent_phase,
                "overrides": [[t, k, v] for (t, k), v in self.model.overrides.items()],
            },
        }
        spec = self.spec()
        head["network"] = {
            "default": [spec.default_coupler.cross_coupling, spec.default_coupler.phase],
            "couplers": [[t, k, c.cross_coupling, c.phase] for (t, k), c in spec.couplers.items()],
        }
        if self.mode == "pair":
            head["phi"] = self.phis[0]
        elif self.mode == "anyon-sweep":
            head["phis"] = list(self.phis)
        return head


def _parse_model(raw: Any, steps: int) -> PolarizedCouplerModel | None:
    if not isinstance(raw, dict) or raw.get("kind") not in ("ideal", "polarized"):
        raise SchemaError("coupler_model: expected {\"kind\": \"ideal\"} or {\"kind\": \"polarized\", ...}")
    if raw["kind"] == "ideal":
        if set(raw) != {"kind"}:
            raise SchemaError("coupler_model: the ideal model takes no parameters")
        return None
    allowed = {"kind", "coupling_H", "ratio_VH", "tilt", "tilt_table", "birefringent_phase", "overrides"}
    extra = sorted(set(raw) - allowed)
    if extra:
        raise SchemaError(f"coupler_model.{extra[0]}: unknown field")
    kl = _require_real(raw.get("coupling_H", math.pi / 4), "coupler_model.coupling_H")
    if "ratio_VH" in raw and "tilt" in raw:
        raise SchemaError("coupler_model: give either ratio_VH or tilt, not both")
    try:
        if "tilt" in raw:
            table = raw.get("tilt_table")
            if not isinstance(table, list) or not all(isinstance(r, list) and len(r) == 2 for r in table):
                raise SchemaError("coupler_model.tilt_table: expected a list of [angle, ratio] rows")
            ratio = ratio_from_tilt(_require_real(raw["tilt"], "coupler_model.tilt"), table)
        else:
            ratio = _require_real(raw.get("ratio_VH", 1.0), "coupler_model.ratio_VH")
        overrides = {}
        for row in raw.get("overrides", []):
            if not isinstance(row, list) or len(row) != 3:
                raise SchemaError("coupler_model.overrides: expected [step, index, kl] rows")
            t = _require_int(row[0], "coupler_model.overrides", 1)
            k = _require_int(row[1], "coupler_model.overrides", 1)
            if not (t <= steps and k <= t):
                raise SchemaError(f"coupler_model.overrides: no coupler {k} in step {t}")
            overrides[(t, k)] = _require_real(row[2], "coupler_model.overrides")
        bire = _require_real(raw.get("birefringent_phase", 0.0), "coupler_model.birefringent_phase")
        return PolarizedCouplerModel(kl, ratio, overrides, bire)
    except SchemaError:
        raise
    except WalkError as exc:
        raise SchemaError(f"coupler_model: {exc}") from None


def _parse_network(raw: Any, steps: int) -> NetworkSpec | None:
    if raw is None:
        return None
    if not isinstance(raw, dict) or set(raw) - {"default", "couplers"}:
        raise SchemaError("network: expected {\"default\": {...}, \"couplers\": [...]}")
    try:
        d = raw.get("default", {})
        if not isinstance(d, dict) or set(d) - {"cross_coupling", "phase"}:
            raise SchemaError("network.default: expected {\"cross_coupling\": c, \"phase\": p}")
        default = CouplerSpec(
            _require_real(d.get("cross_coupling", 0.5), "network.default.cross_coupling"),
            _require_real(d.get("phase", 0.0), "network.default.phase"),
        )
        table = {}
        for row in raw.get("couplers", []):
            if not isinstance(row, list) or len(row) not in (3, 4):
                raise SchemaError("network.couplers: expected [step, index, cross_coupling, phase?] rows")
            t = _require_int(row[0], "network.couplers", 1)
            k = _require_int(row[1], "network.couplers", 1)
            c = _require_real(row[2], "network.couplers")
            p = _require_real(row[3], "network.couplers") if len(row) == 4 else 0.0
            table[(t, k)] = CouplerSpec(c, p)
        return NetworkSpec(steps, table, default)
    except SchemaError:
        raise
    except WalkError as exc:
        raise SchemaError(f"network: {exc}") from None


def _pair_block(dist, cfg: RunConfig, params: dict) -> Block:
    if cfg.basis == "positions":
        dist = regroup_pair(dist, cfg.steps)
        columns = ("j1", "j2", "probability")
    else:
        columns = ("K", "L", "probability")
    return Block(tuple(dist.probs.items()), columns, params)


def _pair_dist(cfg: RunConfig, spec: NetworkSpec, u, phi: float):
    i, j = cfg.input_rails
    if cfg.model is None:
        return pair_distribution(pair_amplitudes(u, u, i, j, phi))
    return entangled_with_imperfections(spec, cfg.model, i, j, phi)


def execute(cfg: RunConfig) -> ResultDocument:
    """Run a validated configuration and return the document it produces."""
    spec = cfg.spec()
    u = build_network_unitary(spec)
    if cfg.mode == "single":
        (rail,) = cfg.input_rails
        if cfg.model is None:
            p = single_particle_distribution(u, rail)
        else:
            u_h, u_v = polarized_network(spec, cfg.model)
            # unpolarized photon: equal mixture of H and V
            p = 0.5 * (single_particle_distribution(u_h, rail) + single_particle_distribution(u_v, rail))
        if cfg.basis == "positions":
            entries = tuple(((j,), v) for j, v in regroup_single(p, cfg.steps).probs.items())
            columns = ("j", "probability")
        else:
            entries = tuple(((k,), float(v)) for k, v in enumerate(p, start=1))
            columns = ("K", "probability")
        blocks = (Block(entries, columns),)
    elif cfg.mode == "pair":
        phase = ExchangePhase(cfg.phis[0])
        dist = _pair_dist(cfg, spec, u, phase.phi)
        blocks = (_pair_block(dist, cfg, {}),)
    elif cfg.mode == "anyon-sweep":
        blocks = tuple(
            _pair_block(
                _pair_dist(cfg, spec, u, phi),
                cfg,
                {"phi": phi, "statistics": ExchangePhase(phi).kind},
            )
            for phi in cfg.phis
        )
    else:
        (rail,) = cfg.input_rails
        model = cfg.model if cfg.model is not None else PolarizedCouplerModel.ideal()
        scores = polarization_independence_report(spec, model, rail, cfg.basis)
        blocks = (Block(tuple(((k,), v) for k, v in scores.items()), ("input", "similarity")),)
    return ResultDocument(cfg.header(), _FILE_BASIS[cfg.basis], blocks)


def run(cfg: RunConfig, out: str | None = None) -> int:
    text = dumps(execute(cfg), cfg.format)
    target = out if out is not None else cfg.output
    if target is None or target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")
    return 0


@dataclass(frozen=True)
class Comparison:
    similarity: float
    max_abs_difference: float
    per_block: tuple[tuple[float, float], ...]


def compare(file_a: str | Path, file_b: str | Path) -> Comparison:
    """Similarity and max |difference| between two result files, block by block."""
    a, b = read(file_a), read(file_b)
    if a.basis != b.basis:
        raise SchemaError(f"basis mismatch: {a.basis} vs {b.basis}")
    if len(a.blocks) != len(b.blocks):
        raise SchemaError(f"block count mismatch: {len(a.blocks)} vs {len(b.blocks)}")
    per_block = []
    for n, (ba, bb) in enumerate(zip(a.blocks, b.blocks)):
        da, db = ba.as_dict(), bb.as_dict()
        if list(da) != list(db):
            raise SchemaError(f"block {n}: index sets differ")
        try:
            per_block.append((similarity(da, db), max_abs_difference(da, db)))
        except WalkError as exc:
            raise SchemaError(f"block {n}: {exc}") from None
    return Comparison(
        min(s for s, _ in per_block),
        max(d for _, d in per_block),
        tuple(per_block),
    )


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path}: malformed JSON ({exc})") from None
    return RunConfig.from_dict(raw)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entwalk", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"entwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a configuration and write its distributions")
    p_run.add_argument("--config", required=True, help="JSON run configuration")
    p_run.add_argument("--out", help="output path (overrides the config; '-' for stdout)")
    p_run.add_argument("--basis", choices=BASES, help="override the config basis")
    p_run.add_argument("--format", choices=FORMATS, help="override the config output format")

    p_cmp = sub.add_parser("compare", help="similarity and max difference between two result files")
    p_cmp.add_argument("file_a")
    p_cmp.add_argument("file_b")
    p_cmp.add_argument("--threshold", type=float, help="exit 1 if the similarity is below this value")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            cfg = _load_config(args.config)
            overrides = {}
            if args.basis:
                overrides["basis"] = args.basis
            if args.format:
                overrides["format"] = args.format
            if overrides:
                cfg = RunConfig.from_dict({**cfg.raw, **overrides})
            return run(cfg, args.out)
        result = compare(args.file_a, args.file_b)
    except WalkError as exc:
        print(f"entwalk: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"entwalk: error: {exc}", file=sys.stderr)
        return 2
    print(f"similarity {result.similarity:.17g}")
    print(f"max_abs_difference {result.max_abs_difference:.17g}")
    if args.threshold is not None and result.similarity < args.threshold:
        print(f"similarity below threshold {args.threshold}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
