"""JSON (de)serialization for spaces, points, sets, mappings, and experiments.

Schema sketch (version "1"):

    space    {"kind": "euclidean", "dim": 2}
             {"kind": "metric-tree", "vertices": [...], "edges": [[u, v, len]]}
             {"kind": "poincare-disk"}
             {"kind": "product", "base": <space>, "lambda": 0.5}
    payload  euclidean [x1, ...]; tree {"edge": i, "offset": o}; disk [re, im];
             product {"first": <payload>, "second": <payload>}
    point    {"space": <space>, "payload": <payload>}
    set      {"halfspace": {"normal": [...], "offset": c}} | {"ball": {...}} |
             {"affine-subspace": {...}} | {"tree-segment": {...}} |
             {"subtree": {...}} | {"disk-geodesic-segment": {...}} |
             {"disk-ball": {...}} | {"product-rectangle": {...}} | {"diagonal": {}}
    mapping  {"projection": <set>} | {"compose": {"outer":..., "inner":...}} |
             {"convex-combination": {"lambda":..., "left":..., "right":...}} |
             {"identity": {}} | {"constant": {"payload":...}} |
             {"pair-map": {"T1":..., "T2":...}} | {"diagonal-projection": {}}

An experiment document holds a seed, sample counts, and a list of instances;
each instance names a space, a weight, two convex sets, a start point, and the
checks to run on it.  Every parse error raises ConfigError with the JSON path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import Cat0FeasError, ConfigError
from .mappings import (
    ComposeMap,
    ConstantMap,
    ConvexCombinationMap,
    IdentityMap,
    Mapping,
    PairMap,
    ProjectionMap,
    diagonal_projection,
)
from .product import ConvexCombinationSpace
from .sets import (
    AffineSubspace,
    ConvexSet,
    DiagonalSet,
    DiskBall,
    DiskGeodesicSegment,
    EuclideanBall,
    GridSpec,
    Halfspace,
    ProductRectangle,
    Subtree,
    TreeSegment,
)
from .spaces import EuclideanSpace, PoincareDiskSpace, Point, Space
from .trees import MetricTree, TreeSpace

SCHEMA_VERSION = "1"


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _get(doc: dict, key: str, path: str, required: bool = True, default=None):
    if key in doc:
        return doc[key]
    if required:
        _fail(path, f"missing field '{key}'")
    return default


# -- spaces --------------------------------------------------------------------


def space_from_json(doc, path: str = "space") -> Space:
    if not isinstance(doc, dict):
        _fail(path, "space spec must be an object")
    kind = _get(doc, "kind", path)
    try:
        if kind == "euclidean":
            return EuclideanSpace(dim=int(_get(doc, "dim", path)))
        if kind == "metric-tree":
            tree = MetricTree(
                vertices=tuple(str(v) for v in _get(doc, "vertices", path)),
                edges=tuple(
                    (str(u), str(v), float(length))
                    for u, v, length in _get(doc, "edges", path)
                ),
            )
            return TreeSpace(tree)
        if kind == "poincare-disk":
            return PoincareDiskSpace()
        if kind == "product":
            base = space_from_json(_get(doc, "base", path), path + ".base")
            return ConvexCombinationSpace(base, float(_get(doc, "lambda", path)))
    except Cat0FeasError as exc:
        if isinstance(exc, ConfigError):
            raise
        _fail(path, str(exc))
    _fail(path, f"unknown space kind '{kind}'")


def space_to_json(space: Space) -> dict:
    if isinstance(space, EuclideanSpace):
        return {"kind": "euclidean", "dim": space.dim}
    if isinstance(space, TreeSpace):
        return {
            "kind": "metric-tree",
            "vertices": list(space.tree.vertices),
            "edges": [[u, v, length] for u, v, length in space.tree.edges],
        }
    if isinstance(space, PoincareDiskSpace):
        return {"kind": "poincare-disk"}
    if isinstance(space, ConvexCombinationSpace):
        return {
            "kind": "product",
            "base": space_to_json(space.base),
            "lambda": space.lam,
        }
    raise ConfigError(f"cannot serialize space {space!r}")


# -- points ---------------------------------------------------------------------


def payload_from_json(space: Space, doc, path: str = "payload"):
    try:
        if isinstance(space, EuclideanSpace):
            return tuple(float(c) for c in doc)
        if isinstance(space, TreeSpace):
            return (int(_get(doc, "edge", path)), float(_get(doc, "offset", path)))
        if isinstance(space, PoincareDiskSpace):
            re, im = doc
            return complex(float(re), float(im))
        if isinstance(space, ConvexCombinationSpace):
            return (
                space.base.point(
                    payload_from_json(space.base, _get(doc, "first", path), path + ".first")
                ),
                space.base.point(
                    payload_from_json(space.base, _get(doc, "second", path), path + ".second")
                ),
            )
    except (TypeError, ValueError) as exc:
        _fail(path, f"bad payload: {exc}")
    raise ConfigError(f"{path}: unsupported space kind {space.kind}")


def point_from_json(space: Space, doc, path: str = "point") -> Point:
    try:
        return space.point(payload_from_json(space, doc, path))
    except Cat0FeasError as exc:
        if isinstance(exc, ConfigError):
            raise
        _fail(path, str(exc))


def payload_to_json(p: Point):
    payload = p.payload
    if isinstance(payload, complex):
        return [payload.real, payload.imag]
    if isinstance(payload, tuple) and payload and isinstance(payload[0], Point):
        return {"first": payload_to_json(payload[0]), "second": payload_to_json(payload[1])}
    if isinstance(p.space, TreeSpace):
        return {"edge": payload[0], "offset": payload[1]}
    return list(payload)


def point_to_json(p: Point) -> dict:
    return {"space": space_to_json(p.space), "payload": payload_to_json(p)}


def point_from_standalone_json(doc, path: str = "point") -> Point:
    space = space_from_json(_get(doc, "space", path), path + ".space")
    return point_from_json(space, _get(doc, "payload", path), path + ".payload")


# -- convex sets -------------------------------------------------------------------


def set_from_json(space: Space, doc, path: str = "set") -> ConvexSet:
    if not isinstance(doc, dict) or len(doc) != 1:
        _fail(path, "set spec must be a single-key object")
    kind, body = next(iter(doc.items()))
    try:
        if kind == "halfspace":
            return Halfspace(
                space,
                normal=tuple(float(c) for c in _get(body, "normal", path)),
                offset=float(_get(body, "offset", path)),
            )
        if kind == "affine-subspace":
            return AffineSubspace(
                space,
                anchor=tuple(float(c) for c in _get(body, "anchor", path)),
                basis=tuple(
                    tuple(float(c) for c in row) for row in _get(body, "basis", path)
                ),
            )
        if kind == "ball":
            return EuclideanBall(
                space,
                center=tuple(float(c) for c in _get(body, "center", path)),
                radius=float(_get(body, "radius", path)),
            )
        if kind == "tree-segment":
            return TreeSegment(
                space,
                start=point_from_json(space, _get(body, "start", path), path + ".start"),
                end=point_from_json(space, _get(body, "end", path), path + ".end"),
            )
        if kind == "subtree":
            return Subtree(
                space, vertex_names=tuple(str(v) for v in _get(body, "vertices", path))
            )
        if kind == "disk-geodesic-segment":
            return DiskGeodesicSegment(
                space,
                start=point_from_json(space, _get(body, "start", path), path + ".start"),
                end=point_from_json(space, _get(body, "end", path), path + ".end"),
            )
        if kind == "disk-ball":
            re, im = _get(body, "center", path)
            return DiskBall(
                space, center=complex(float(re), float(im)),
                radius=float(_get(body, "radius", path)),
            )
        if kind == "product-rectangle":
            if not isinstance(space, ConvexCombinationSpace):
                _fail(path, "product-rectangle needs a product space")
            return ProductRectangle(
                space,
                first=set_from_json(space.base, _get(body, "first", path), path + ".first"),
                second=set_from_json(space.base, _get(body, "second", path), path + ".second"),
            )
        if kind == "diagonal":
            if not isinstance(space, ConvexCombinationSpace):
                _fail(path, "diagonal needs a product space")
            return DiagonalSet(space)
    except Cat0FeasError as exc:
        if isinstance(exc, ConfigError):
            raise
        _fail(path, str(exc))
    except (TypeError, ValueError, AttributeError) as exc:
        _fail(path, f"bad set spec: {exc}")
    _fail(path, f"unknown set kind '{kind}'")


def set_to_json(s: ConvexSet) -> dict:
    if isinstance(s, Halfspace):
        return {"halfspace": {"normal": list(s.normal), "offset": s.offset}}
    if isinstance(s, AffineSubspace):
        return {
            "affine-subspace": {
                "anchor": list(s.anchor),
                "basis": [list(row) for row in s.basis],
            }
        }
    if isinstance(s, EuclideanBall):
        return {"ball": {"center": list(s.center), "radius": s.radius}}
    if isinstance(s, TreeSegment):
        return {
            "tree-segment": {
                "start": payload_to_json(s.start),
                "end": payload_to_json(s.end),
            }
        }
    if isinstance(s, Subtree):
        return {"subtree": {"vertices": list(s.vertex_names)}}
    if isinstance(s, DiskGeodesicSegment):
        return {
            "disk-geodesic-segment": {
                "start": payload_to_json(s.start),
                "end": payload_to_json(s.end),
            }
        }
    if isinstance(s, DiskBall):
        return {
            "disk-ball": {
                "center": [s.center.real, s.center.imag],
                "radius": s.radius,
            }
        }
    if isinstance(s, ProductRectangle):
        return {
            "product-rectangle": {
                "first": set_to_json(s.first),
                "second": set_to_json(s.second),
            }
        }
    if isinstance(s, DiagonalSet):
        return {"diagonal": {}}
    raise ConfigError(f"cannot serialize set {s!r}")


# -- mappings -------------------------------------------------------------------------


def mapping_from_json(space: Space, doc, path: str = "mapping") -> Mapping:
    if not isinstance(doc, dict) or len(doc) != 1:
        _fail(path, "mapping spec must be a single-key object")
    kind, body = next(iter(doc.items()))
    try:
        if kind == "projection":
            return ProjectionMap(set_from_json(space, body, path + ".projection"))
        if kind == "compose":
            return ComposeMap(
                outer=mapping_from_json(space, _get(body, "outer", path), path + ".outer"),
                inner=mapping_from_json(space, _get(body, "inner", path), path + ".inner"),
            )
        if kind == "convex-combination":
            return ConvexCombinationMap(
                first=mapping_from_json(space, _get(body, "left", path), path + ".left"),
                second=mapping_from_json(space, _get(body, "right", path), path + ".right"),
                lam=float(_get(body, "lambda", path)),
            )
        if kind == "identity":
            return IdentityMap(space)
        if kind == "constant":
            return ConstantMap(
                point_from_json(space, _get(body, "payload", path), path + ".payload")
            )
        if kind == "pair-map":
            if not isinstance(space, ConvexCombinationSpace):
                _fail(path, "pair-map needs a product space")
            return PairMap(
                space,
                first=mapping_from_json(space.base, _get(body, "T1", path), path + ".T1"),
                second=mapping_from_json(space.base, _get(body, "T2", path), path + ".T2"),
            )
        if kind == "diagonal-projection":
            if not isinstance(space, ConvexCombinationSpace):
                _fail(path, "diagonal-projection needs a product space")
            return diagonal_projection(space)
    except Cat0FeasError as exc:
        if isinstance(exc, ConfigError):
            raise
        _fail(path, str(exc))
    except (TypeError, ValueError, AttributeError) as exc:
        _fail(path, f"bad mapping spec: {exc}")
    _fail(path, f"unknown mapping kind '{kind}'")


def mapping_to_json(m: Mapping) -> dict:
    if isinstance(m, ProjectionMap):
        return {"projection": set_to_json(m.target)}
    if isinstance(m, ComposeMap):
        return {"compose": {"outer": mapping_to_json(m.outer), "inner": mapping_to_json(m.inner)}}
    if isinstance(m, ConvexCombinationMap):
        return {
            "convex-combination": {
                "lambda": m.lam,
                "left": mapping_to_json(m.first),
                "right": mapping_to_json(m.second),
            }
        }
    if isinstance(m, IdentityMap):
        return {"identity": {}}
    if isinstance(m, ConstantMap):
        return {"constant": {"payload": payload_to_json(m.value)}}
    if isinstance(m, PairMap):
        return {"pair-map": {"T1": mapping_to_json(m.first), "T2": mapping_to_json(m.second)}}
    raise ConfigError(f"cannot serialize mapping {m!r}")


# -- experiment configs -----------------------------------------------------------------


VALID_CHECKS = ("rate", "gap-rate", "delta-limit", "oracle-agreement")
VALID_MODES = ("averaged", "composed", "product-reduction")


@dataclass(frozen=True)
class InstanceConfig:
    """One configured problem instance plus the checks to run on it."""

    name: str
    space: Space
    lam: float = 0.5
    set_a: ConvexSet | None = None
    set_b: ConvexSet | None = None
    start: Point | None = None
    n_max: int = 10_000
    eps_grid: tuple[float, ...] = (1.0, 0.5, 0.1)
    gap_eps_grid: tuple[float, ...] = (1.0, 0.5, 0.25)
    mode: str = "averaged"
    fixed_point: Point | None = None
    best_pair: tuple[Point, Point] | None = None
    set_dist: float | None = None
    rate_b: float | None = None
    rate_m: float | None = None
    grid: GridSpec = GridSpec()
    product_lambdas: tuple[float, ...] = ()
    checks: tuple[str, ...] = ()

    def require_sets(self):
        if self.set_a is None or self.set_b is None or self.start is None:
            raise ConfigError(
                f"instance '{self.name}' needs A, B, and start for this command"
            )
        return self.set_a, self.set_b, self.start


@dataclass(frozen=True)
class ExperimentConfig:
    schema: str
    seed: int
    space_samples: int = 10_000
    mapping_samples: int = 1_000
    minimality_samples: int = 1_000
    tol_exact: float = 1e-12
    tol_disk: float = 1e-8
    tol_p2: float = 1e-9
    tol_minimality: float = 1e-10
    instances: tuple[InstanceConfig, ...] = ()


def _eps_grid_from(doc, path):
    grid = tuple(float(e) for e in doc)
    if not grid or any(e <= 0.0 for e in grid):
        _fail(path, "eps grid entries must be positive")
    if any(a < b for a, b in zip(grid, grid[1:])):
        _fail(path, "eps grid must be sorted descending")
    return grid


def instance_from_json(doc, path: str) -> InstanceConfig:
    name = str(_get(doc, "name", path))
    space = space_from_json(_get(doc, "space", path), path + ".space")
    lam = float(doc.get("lambda", 0.5))
    if not 0.0 < lam < 1.0:
        _fail(path, f"lambda must be in (0, 1), got {lam}")

    def opt_point(key):
        return (
            point_from_json(space, doc[key], f"{path}.{key}")
            if doc.get(key) is not None
            else None
        )

    set_a = (
        set_from_json(space, doc["A"], path + ".A") if doc.get("A") is not None else None
    )
    set_b = (
        set_from_json(space, doc["B"], path + ".B") if doc.get("B") is not None else None
    )
    best_pair = None
    if doc.get("best_pair") is not None:
        pair = doc["best_pair"]
        if len(pair) != 2:
            _fail(path + ".best_pair", "expected two payloads")
        best_pair = (
            point_from_json(space, pair[0], path + ".best_pair[0]"),
            point_from_json(space, pair[1], path + ".best_pair[1]"),
        )
    grid_doc = doc.get("grid", {})
    grid = GridSpec(
        h=float(grid_doc.get("h", 1e-3)),
        window=(
            tuple((float(lo), float(hi)) for lo, hi in grid_doc["window"])
            if grid_doc.get("window") is not None
            else None
        ),
        surface=str(grid_doc.get("surface", "auto")),
    )
    mode = str(doc.get("mode", "averaged"))
    if mode not in VALID_MODES:
        _fail(path + ".mode", f"unknown mode '{mode}'")
    checks = tuple(str(c) for c in doc.get("checks", ()))
    for c in checks:
        if c not in VALID_CHECKS:
            _fail(path + ".checks", f"unknown check '{c}'")
    rate_doc = doc.get("rate", {})
    return InstanceConfig(
        name=name,
        space=space,
        lam=lam,
        set_a=set_a,
        set_b=set_b,
        start=opt_point("start"),
        n_max=int(doc.get("n_max", 10_000)),
        eps_grid=_eps_grid_from(doc.get("eps_grid", (1.0, 0.5, 0.1)), path + ".eps_grid"),
        gap_eps_grid=_eps_grid_from(
            doc.get("gap_eps_grid", (1.0, 0.5, 0.25)), path + ".gap_eps_grid"
        ),
        mode=mode,
        fixed_point=opt_point("fixed_point"),
        best_pair=best_pair,
        set_dist=float(doc["set_distance"]) if doc.get("set_distance") is not None else None,
        rate_b=float(rate_doc["b"]) if rate_doc.get("b") is not None else None,
        rate_m=float(rate_doc["M"]) if rate_doc.get("M") is not None else None,
        grid=grid,
        product_lambdas=tuple(float(v) for v in doc.get("product_lambdas", ())),
        checks=checks,
    )


def config_from_json(doc) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be an object")
    schema = str(doc.get("schema", SCHEMA_VERSION))
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema version '{schema}'")
    samples = doc.get("samples", {})
    tolerances = doc.get("tolerances", {})
    instances = tuple(
        instance_from_json(inst, f"instances[{i}]")
        for i, inst in enumerate(doc.get("instances", ()))
    )
    names = [inst.name for inst in instances]
    if len(set(names)) != len(names):
        raise ConfigError("instance names must be unique")
    return ExperimentConfig(
        schema=schema,
        seed=int(doc.get("seed", 0)),
        space_samples=int(samples.get("space", 10_000)),
        mapping_samples=int(samples.get("mapping", 1_000)),
        minimality_samples=int(samples.get("minimality", 1_000)),
        tol_exact=float(tolerances.get("exact", 1e-12)),
        tol_disk=float(tolerances.get("disk", 1e-8)),
        tol_p2=float(tolerances.get("p2", 1e-9)),
        tol_minimality=float(tolerances.get("minimality", 1e-10)),
        instances=instances,
    )


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")
    return config_from_json(doc)


def bundled_config_path(name: str = "default") -> Path:
    """Path of a configuration document shipped with the package."""
    root = Path(__file__).parent / "configs" / f"{name}.json"
    if not root.exists():
        raise ConfigError(f"no bundled config named '{name}'")
    return root


def load_bundled_config(name: str = "default") -> ExperimentConfig:
    return load_config(bundled_config_path(name))
