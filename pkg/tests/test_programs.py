import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenenav.errors import NonUniqueReferent, NoUniqueInstruction
from scenenav.generation import GenConfig, generate_scene
from scenenav.language import env_lexicon
from scenenav.oracle import brute_force_denotation, verify_record
from scenenav.programs import (
    InstructionKind,
    SceneAll,
    all_descriptors,
    complex_program,
    denotes_unique,
    enumerate_complex_space,
    eval_program,
    fully_specified_count,
    program_from_json,
    program_to_json,
    sample_instruction,
    simple_program,
)
from scenenav.scene import (
    Color,
    ObjectDescriptor,
    SceneGraph,
    SceneObject,
    Shape,
    Size,
    SpatialRelation,
)


def _obj(oid, pos, color=Color.RED, shape=Shape.CUBE, size=Size.SMALL):
    return SceneObject(id=oid, color=color, shape=shape, size=size, position=pos)


THREE = SceneGraph(id=0, objects=(
    _obj(0, (2.0, 0.0), color=Color.RED, shape=Shape.SPHERE),
    _obj(1, (-2.0, 0.0), color=Color.BLUE, shape=Shape.CUBE),
    _obj(2, (0.0, 2.0), color=Color.GREEN, shape=Shape.CYLINDER, size=Size.LARGE),
))


class TestEval:
    def test_scene_all(self):
        assert eval_program(SceneAll(), THREE) == {0, 1, 2}

    def test_unique_filter(self):
        p = simple_program(ObjectDescriptor(color=Color.RED))
        assert eval_program(p, THREE) == {0}

    def test_complex_relate_left(self):
        # cube at (-2,0) is left of the red sphere at (2,0)
        p = complex_program(ObjectDescriptor(shape=Shape.CUBE), SpatialRelation.LEFT,
                            ObjectDescriptor(color=Color.RED, shape=Shape.SPHERE))
        assert eval_program(p, THREE) == {1}

    def test_non_unique_raises(self):
        scene = SceneGraph(id=0, objects=(
            _obj(0, (0.0, 0.0)), _obj(1, (1.0, 1.0))))
        with pytest.raises(NonUniqueReferent):
            eval_program(simple_program(ObjectDescriptor(color=Color.RED)), scene)

    def test_non_unique_referent_in_complex(self):
        scene = SceneGraph(id=0, objects=(
            _obj(0, (0.0, 0.0)), _obj(1, (1.0, 1.0)), _obj(2, (-1.0, -1.0),
                                                           shape=Shape.SPHERE)))
        p = complex_program(ObjectDescriptor(), SpatialRelation.LEFT,
                            ObjectDescriptor(shape=Shape.CUBE))
        with pytest.raises(NonUniqueReferent):
            eval_program(p, scene)


class TestDenotesUnique:
    def test_ambiguous_returns_none(self):
        scene = SceneGraph(id=0, objects=(_obj(0, (0.0, 0.0)), _obj(1, (1.0, 1.0))))
        assert denotes_unique(simple_program(ObjectDescriptor(color=Color.RED)),
                              scene) is None

    def test_unique_returns_id(self):
        p = simple_program(ObjectDescriptor(color=Color.GREEN))
        assert denotes_unique(p, THREE) == 2

    def test_non_unique_referent_returns_none(self):
        scene = SceneGraph(id=0, objects=(
            _obj(0, (0.0, 0.0)), _obj(1, (1.0, 1.0)), _obj(2, (-1.0, -1.0),
                                                           shape=Shape.SPHERE)))
        p = complex_program(ObjectDescriptor(shape=Shape.SPHERE), SpatialRelation.LEFT,
                            ObjectDescriptor(shape=Shape.CUBE))
        assert denotes_unique(p, scene) is None


def test_referent_requires_concrete_shape():
    with pytest.raises(ValueError):
        complex_program(ObjectDescriptor(), SpatialRelation.LEFT, ObjectDescriptor())


class TestCounts:
    def test_complex_space(self):
        assert enumerate_complex_space() == 9216

    def test_object_types(self):
        assert fully_specified_count() == 48

    def test_restricted_relations(self):
        assert enumerate_complex_space((SpatialRelation.LEFT,)) == 2304

    def test_descriptor_space(self):
        assert len(all_descriptors()) == 3 * 9 * 4


class TestSampling:
    def test_simple_record_is_sound(self):
        scene = generate_scene(GenConfig(n_objects=3, seed=5))
        rec = sample_instruction(scene, InstructionKind.SIMPLE, seed=1,
                                 lexicon=env_lexicon())
        assert eval_program(rec.program, scene) == {rec.target_id}
        assert verify_record(rec, scene)

    def test_complex_record_is_sound(self):
        scene = generate_scene(GenConfig(n_objects=5, seed=6))
        rec = sample_instruction(scene, InstructionKind.COMPLEX, seed=2,
                                 lexicon=env_lexicon())
        assert eval_program(rec.program, scene) == {rec.target_id}
        assert verify_record(rec, scene)

    def test_identical_objects_unsatisfiable(self):
        scene = SceneGraph(id=0, objects=(
            _obj(0, (-1.0, -1.0)), _obj(1, (1.0, 1.0))))
        with pytest.raises(NoUniqueInstruction):
            sample_instruction(scene, InstructionKind.SIMPLE, seed=0,
                               lexicon=env_lexicon(), max_attempts=200)

    def test_determinism(self):
        scene = generate_scene(GenConfig(n_objects=4, seed=9))
        a = sample_instruction(scene, InstructionKind.COMPLEX, 77, env_lexicon())
        b = sample_instruction(scene, InstructionKind.COMPLEX, 77, env_lexicon())
        assert a == b


@settings(max_examples=100)
@given(seed=st.integers(0, 2**32), n=st.integers(3, 6),
       kind=st.sampled_from(InstructionKind))
def test_sampler_agrees_with_brute_force(seed, n, kind):
    scene = generate_scene(GenConfig(n_objects=n, seed=seed))
    try:
        rec = sample_instruction(scene, kind, seed=seed ^ 0xABCD,
                                 lexicon=env_lexicon(), max_attempts=300)
    except NoUniqueInstruction:
        return
    assert brute_force_denotation(rec.program, scene) == {rec.target_id}


@settings(max_examples=100)
@given(seed=st.integers(0, 2**32), kind=st.sampled_from(InstructionKind))
def test_serialization_roundtrip(seed, kind):
    scene = generate_scene(GenConfig(n_objects=4, seed=seed))
    try:
        rec = sample_instruction(scene, kind, seed=seed, lexicon=env_lexicon(),
                                 max_attempts=300)
    except NoUniqueInstruction:
        return
    assert program_from_json(program_to_json(rec.program)) == rec.program


def test_serialized_prefix_form():
    p = complex_program(ObjectDescriptor(color=Color.RED), SpatialRelation.LEFT,
                        ObjectDescriptor(shape=Shape.CYLINDER, color=Color.RED))
    assert program_to_json(p) == [
        "unique", ["filter", {"color": "red"},
                   ["relate", "left",
                    ["unique", ["filter", {"color": "red", "shape": "cylinder"},
                                ["scene"]]]]]]


def test_eval_monotone_under_descriptor_weakening():
    scene = generate_scene(GenConfig(n_objects=6, seed=31))
    strong = ObjectDescriptor(size=Size.SMALL, color=Color.RED, shape=Shape.CUBE)
    weak = ObjectDescriptor(color=Color.RED, shape=Shape.CUBE)
    from scenenav.programs import Filter
    strong_set = eval_program(Filter(strong, SceneAll()), scene)
    weak_set = eval_program(Filter(weak, SceneAll()), scene)
    assert strong_set <= weak_set
