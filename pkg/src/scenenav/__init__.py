"""Environment-agnostic navigation supervision: scene graphs, instruction
programs, template language, environment mapping, and seeded episodes."""

__version__ = "0.1.0"

from .scene import (  # noqa: F401
    Color,
    Shape,
    Size,
    SpatialRelation,
    ObjectDescriptor,
    SceneObject,
    CameraFrame,
    SceneBounds,
    SceneGraph,
    matches,
    relate,
    validate_scene,
)
from .generation import GenConfig, generate_scene, import_clevr_scene  # noqa: F401
from .programs import (  # noqa: F401
    FilterProgram,
    InstructionKind,
    InstructionRecord,
    complex_program,
    denotes_unique,
    enumerate_complex_space,
    eval_program,
    sample_instruction,
    simple_program,
)
from .language import Lexicon, env_lexicon, parse, realize, scene_lexicon, tokenize  # noqa: F401
from .mapping import EnvBounds, EnvObject, MapConfig, MappedScene, Pose, map_point, map_scene  # noqa: F401
from .sim import (  # noqa: F401
    Action,
    DENSE,
    EnvConfig,
    EpisodeState,
    Observation,
    OraclePolicy,
    Outcome,
    RandomPolicy,
    RewardScheme,
    SPARSE,
    observe,
    oracle_policy,
    reset,
    step,
)
from .dataset import Dataset, DatasetManifest, build_dataset  # noqa: F401
from .curriculum import CurriculumStage, default_curriculum, stage_sampler  # noqa: F401
from .evaluate import EvalReport, evaluate, run_episode  # noqa: F401
