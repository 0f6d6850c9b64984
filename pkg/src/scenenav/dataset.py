"""Dataset pipeline: scene generation, instruction sampling, files, validation."""

from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import __version__
from .errors import NoUniqueInstruction, SceneNavError
from .generation import DEFAULT_D_MIN, GenConfig, import_clevr_scene
from .generation import generate_scene as _generate_scene
from .language import get_lexicon
from .oracle import verify_record
from .programs import (
    InstructionKind,
    InstructionRecord,
    program_from_json,
    program_to_json,
    sample_instruction,
)
from .scene import (
    DEFAULT_BOUNDS,
    CameraFrame,
    SceneBounds,
    SceneGraph,
    validate_scene,
)

log = logging.getLogger(__name__)

# Stream offsets keeping scene seeds, instruction seeds, and scene retries
# independent of one another for a given manifest seed.
_SCENE_STREAM = 0x5CE7E
_INSTR_STREAM = 0x1757
_RETRY_STREAM = 0xE7121

_MASK64 = (1 << 64) - 1


def _mix(seed: int, *parts: int) -> int:
    """splitmix64-style seed derivation; stable across platforms."""
    x = seed & _MASK64
    for p in parts:
        x = (x + 0x9E3779B97F4A7C15 + (p & _MASK64)) & _MASK64
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
        x = x ^ (x >> 31)
    return x


@dataclass(frozen=True)
class DatasetManifest:
    seed: int
    n_scenes: int
    simple_per_scene: int = 5
    complex_per_scene: int = 5
    lexicon_mode: str = "env"
    object_counts: Tuple[int, ...] = (3,)
    bounds: SceneBounds = DEFAULT_BOUNDS
    d_min: float = DEFAULT_D_MIN
    version: str = __version__

    def __post_init__(self):
        if self.n_scenes < 1:
            raise ValueError("n_scenes must be >= 1")
        if not self.object_counts:
            raise ValueError("object_counts must be non-empty")


@dataclass
class Dataset:
    manifest: DatasetManifest
    scenes: List[SceneGraph]
    records: List[InstructionRecord]

    def scenes_by_id(self) -> Dict[int, SceneGraph]:
        return {s.id: s for s in self.scenes}


def _sample_scene_records(scene: SceneGraph, manifest: DatasetManifest,
                          lexicon) -> List[InstructionRecord]:
    """All requested records for one scene; raises NoUniqueInstruction if stuck."""
    records = []
    for j in range(manifest.simple_per_scene):
        seed = _mix(manifest.seed, _INSTR_STREAM, scene.id, 0, j)
        records.append(sample_instruction(scene, InstructionKind.SIMPLE, seed, lexicon))
    for j in range(manifest.complex_per_scene):
        seed = _mix(manifest.seed, _INSTR_STREAM, scene.id, 1, j)
        records.append(sample_instruction(scene, InstructionKind.COMPLEX, seed, lexicon))
    return records


def generate_scenes(manifest: DatasetManifest) -> List[SceneGraph]:
    scenes = []
    for i in range(manifest.n_scenes):
        n = manifest.object_counts[i % len(manifest.object_counts)]
        cfg = GenConfig(n_objects=n, seed=_mix(manifest.seed, _SCENE_STREAM, i),
                        bounds=manifest.bounds, d_min=manifest.d_min)
        scenes.append(_generate_scene(cfg, scene_id=i))
    return scenes


def generate_instructions(scenes: List[SceneGraph], manifest: DatasetManifest,
                          skip_unsatisfiable: bool = True) -> List[InstructionRecord]:
    """Sample records for existing scenes; unsatisfiable scenes are skipped and logged."""
    lexicon = get_lexicon(manifest.lexicon_mode)
    records = []
    for scene in scenes:
        try:
            scene_records = _sample_scene_records(scene, manifest, lexicon)
        except NoUniqueInstruction as exc:
            if not skip_unsatisfiable:
                raise
            log.warning("skipping scene %d: %s", scene.id, exc)
            continue
        for rec in scene_records:
            if not verify_record(rec, scene):
                raise SceneNavError(
                    f"record failed uniqueness oracle: scene {scene.id}, {rec.text!r}")
        records.extend(scene_records)
    return records


def build_dataset(manifest: DatasetManifest, max_scene_retries: int = 20) -> Dataset:
    """Generate scenes plus instructions, replacing unsatisfiable scenes.

    Deterministic per manifest: retry seeds come from a dedicated stream keyed
    by slot and attempt, so the final dataset never depends on timing or order.
    """
    scenes = generate_scenes(manifest)
    lexicon = get_lexicon(manifest.lexicon_mode)
    records: List[InstructionRecord] = []
    for i, scene in enumerate(scenes):
        attempt = 0
        while True:
            try:
                scene_records = _sample_scene_records(scene, manifest, lexicon)
                break
            except NoUniqueInstruction as exc:
                attempt += 1
                if attempt > max_scene_retries:
                    raise
                log.warning("resampling scene %d (attempt %d): %s", i, attempt, exc)
                n = manifest.object_counts[i % len(manifest.object_counts)]
                cfg = GenConfig(n_objects=n,
                                seed=_mix(manifest.seed, _RETRY_STREAM, i, attempt),
                                bounds=manifest.bounds, d_min=manifest.d_min)
                scene = _generate_scene(cfg, scene_id=i)
        scenes[i] = scene
        for rec in scene_records:
            if not verify_record(rec, scene):
                raise SceneNavError(
                    f"record failed uniqueness oracle: scene {scene.id}, {rec.text!r}")
        records.extend(scene_records)
    return Dataset(manifest=manifest, scenes=scenes, records=records)


# --- files ---------------------------------------------------------------------

def _manifest_to_json(m: DatasetManifest) -> dict:
    return {
        "seed": m.seed,
        "n_scenes": m.n_scenes,
        "simple_per_scene": m.simple_per_scene,
        "complex_per_scene": m.complex_per_scene,
        "lexicon_mode": m.lexicon_mode,
        "object_counts": list(m.object_counts),
        "bounds": dataclasses.asdict(m.bounds),
        "d_min": m.d_min,
        "version": m.version,
    }


def _manifest_from_json(obj: dict) -> DatasetManifest:
    return DatasetManifest(
        seed=obj["seed"],
        n_scenes=obj["n_scenes"],
        simple_per_scene=obj["simple_per_scene"],
        complex_per_scene=obj["complex_per_scene"],
        lexicon_mode=obj["lexicon_mode"],
        object_counts=tuple(obj["object_counts"]),
        bounds=SceneBounds(**obj["bounds"]),
        d_min=obj["d_min"],
        version=obj.get("version", __version__),
    )


def scene_to_json(scene: SceneGraph) -> dict:
    return {
        "scene_id": scene.id,
        "objects": [
            {"color": o.color.value, "shape": o.shape.value, "size": o.size.value,
             "3d_coords": [o.position[0], o.position[1], 0.0]}
            for o in scene.objects
        ],
        "camera": {"left_dir": list(scene.camera.left_dir),
                   "front_dir": list(scene.camera.front_dir)},
        "bounds": dataclasses.asdict(scene.bounds),
    }


def scene_from_json(obj: dict) -> SceneGraph:
    bounds = SceneBounds(**obj["bounds"]) if "bounds" in obj else DEFAULT_BOUNDS
    if "camera" in obj:
        camera = CameraFrame(left_dir=tuple(obj["camera"]["left_dir"]),
                             front_dir=tuple(obj["camera"]["front_dir"]))
    else:
        camera = None
    kwargs = {"bounds": bounds}
    if camera is not None:
        kwargs["camera"] = camera
    return import_clevr_scene(obj, scene_id=obj.get("scene_id", 0), **kwargs)


def record_to_json(rec: InstructionRecord) -> dict:
    return {
        "scene_id": rec.scene_id,
        "kind": rec.kind.value,
        "text": rec.text,
        "program": program_to_json(rec.program),
        "target_id": rec.target_id,
    }


def record_from_json(obj: dict) -> InstructionRecord:
    return InstructionRecord(
        scene_id=obj["scene_id"],
        kind=InstructionKind(obj["kind"]),
        text=obj["text"],
        program=program_from_json(obj["program"]),
        target_id=obj["target_id"],
    )


def save_scenes(scenes: List[SceneGraph], path,
                manifest: Optional[DatasetManifest] = None):
    doc = {"scenes": [scene_to_json(s) for s in scenes]}
    if manifest is not None:
        doc["info"] = _manifest_to_json(manifest)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")


def load_scenes(path) -> Tuple[List[SceneGraph], Optional[DatasetManifest]]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    scenes = [scene_from_json(s) for s in doc["scenes"]]
    # CLEVR exports carry no explicit ids; fall back to list position
    for i, (raw, scene) in enumerate(zip(doc["scenes"], scenes)):
        if "scene_id" not in raw and scene.id != i:
            scenes[i] = dataclasses.replace(scene, id=i)
    manifest = _manifest_from_json(doc["info"]) if "info" in doc else None
    return scenes, manifest


def save_records(records: List[InstructionRecord], path):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(record_to_json(rec), sort_keys=True,
                                separators=(",", ":")))
            fh.write("\n")


def load_records(path) -> List[InstructionRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(record_from_json(json.loads(line)))
    return records


def validate_dataset(scenes: List[SceneGraph],
                     records: List[InstructionRecord]) -> List[str]:
    """Re-run the structural and uniqueness oracles; returns failure messages."""
    failures = []
    by_id = {s.id: s for s in scenes}
    for s in scenes:
        report = validate_scene(s, d_min=0.0)
        if not report.ok:
            failures.append(f"scene {s.id}: " +
                            "; ".join(v.message for v in report.violations))
    for idx, rec in enumerate(records):
        scene = by_id.get(rec.scene_id)
        if scene is None:
            failures.append(f"record {idx}: unknown scene_id {rec.scene_id}")
        elif not verify_record(rec, scene):
            failures.append(
                f"record {idx} (scene {rec.scene_id}, {rec.text!r}): "
                f"program does not denote exactly target {rec.target_id}")
    return failures
