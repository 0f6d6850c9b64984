import pytest

from scenenav.errors import ParseError
from scenenav.language import (
    UNK_ID,
    build_vocabulary,
    env_lexicon,
    parse,
    realize,
    scene_lexicon,
    tokenize,
    write_vocabulary,
)
from scenenav.programs import complex_program, enumerate_programs, simple_program
from scenenav.scene import Color, ObjectDescriptor, Shape, Size, SpatialRelation


class TestRealize:
    def test_simple_env(self):
        p = simple_program(ObjectDescriptor(color=Color.RED, shape=Shape.CYLINDER))
        assert realize(p, env_lexicon()) == "go to the red torch"

    def test_complex_env(self):
        p = complex_program(
            ObjectDescriptor(size=Size.LARGE, color=Color.GRAY),
            SpatialRelation.RIGHT,
            ObjectDescriptor(color=Color.YELLOW, shape=Shape.CYLINDER))
        assert realize(p, env_lexicon()) == \
            "go to the large gray object to the right of the yellow torch"

    def test_complex_scene_bare_target(self):
        p = complex_program(
            ObjectDescriptor(), SpatialRelation.LEFT,
            ObjectDescriptor(color=Color.RED, shape=Shape.CYLINDER))
        assert realize(p, scene_lexicon()) == \
            "go to the object to the left of the red cylinder"

    def test_bare_object(self):
        assert realize(simple_program(ObjectDescriptor()), env_lexicon()) == \
            "go to the object"

    def test_noun_tables_differ(self):
        p = simple_program(ObjectDescriptor(shape=Shape.SPHERE))
        assert realize(p, scene_lexicon()) == "go to the sphere"
        assert realize(p, env_lexicon()) == "go to the column"


class TestParse:
    def test_simple(self):
        p = parse("go to the red torch", env_lexicon())
        assert p == simple_program(ObjectDescriptor(color=Color.RED,
                                                    shape=Shape.CYLINDER))

    def test_case_insensitive(self):
        assert parse("Go To The Red Torch", env_lexicon()) == \
            parse("go to the red torch", env_lexicon())

    def test_out_of_vocabulary(self):
        with pytest.raises(ParseError):
            parse("go to the crimson torch", env_lexicon())

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            parse("go to the crimson torch", env_lexicon())
        assert info.value.position == 3

    def test_synonym_phrase(self):
        canonical = parse("go to the skull to the left of the red torch", env_lexicon())
        assert parse("go to the skull on the left side of the red torch",
                     env_lexicon()) == canonical

    def test_bare_referent_rejected(self):
        with pytest.raises(ParseError):
            parse("go to the skull to the left of the object", env_lexicon())

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("go to the red torch now", env_lexicon())

    def test_truncated(self):
        with pytest.raises(ParseError):
            parse("go to the", env_lexicon())


def test_roundtrip_full_grammar_both_lexicons():
    for lex in (env_lexicon(), scene_lexicon()):
        for p in enumerate_programs():
            assert parse(realize(p, lex), lex) == p


def test_realize_is_injective():
    for lex in (env_lexicon(), scene_lexicon()):
        texts = set()
        count = 0
        for p in enumerate_programs():
            texts.add(realize(p, lex))
            count += 1
        assert len(texts) == count


class TestTokenize:
    def test_known_words(self):
        ids = tokenize("go to the red torch", "env")
        assert len(ids) == 5
        assert all(i != UNK_ID for i in ids)

    def test_unknown_maps_to_unk(self):
        assert tokenize("zap", "env") == [UNK_ID]

    def test_empty(self):
        assert tokenize("", "env") == []

    def test_vocab_contents(self):
        vocab = build_vocabulary("env")
        assert vocab[UNK_ID] == "<unk>"
        # 8 colors + 2 sizes + 3 nouns + object + go/to/the + in/front/of/
        # behind/left/right + unk
        expected_words = set("go to the object in front of behind left right".split())
        expected_words |= {c.value for c in Color}
        expected_words |= {s.value for s in Size}
        expected_words |= {"column", "skull", "torch"}
        assert set(vocab) == expected_words | {"<unk>"}

    def test_sidecar_file(self, tmp_path):
        path = tmp_path / "vocab.txt"
        write_vocabulary(path, "env")
        lines = path.read_text().splitlines()
        assert lines == list(build_vocabulary("env"))


def test_lexicon_noun_bijection_enforced():
    from scenenav.language import Lexicon, RELATION_PHRASES
    with pytest.raises(ValueError):
        Lexicon("bad", {Shape.CUBE: "thing", Shape.SPHERE: "thing",
                        Shape.CYLINDER: "torch"}, RELATION_PHRASES, {})
