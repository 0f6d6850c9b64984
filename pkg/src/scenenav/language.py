"""Template language: program -> text realization, text -> program parsing, tokens."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import ParseError
from .programs import (
    Filter,
    FilterProgram,
    Relate,
    SceneAll,
    Unique,
    complex_program,
    enumerate_programs,
    simple_program,
)
from .scene import Color, ObjectDescriptor, Shape, Size, SpatialRelation

SCENE_NOUNS: Dict[Shape, str] = {
    Shape.CUBE: "cube",
    Shape.SPHERE: "sphere",
    Shape.CYLINDER: "cylinder",
}

# Positional pairing of the two ordered shape lists: sphere/cube/cylinder
# against column/skull/torch.
ENV_NOUNS: Dict[Shape, str] = {
    Shape.SPHERE: "column",
    Shape.CUBE: "skull",
    Shape.CYLINDER: "torch",
}

RELATION_PHRASES: Dict[SpatialRelation, str] = {
    SpatialRelation.LEFT: "to the left of",
    SpatialRelation.RIGHT: "to the right of",
    SpatialRelation.FRONT: "in front of",
    SpatialRelation.BEHIND: "behind",
}

DEFAULT_SYNONYMS: Dict[str, str] = {
    "on the left side of": "to the left of",
    "on the right side of": "to the right of",
}

UNK_TOKEN = "<unk>"
UNK_ID = 0


@dataclass(frozen=True)
class Lexicon:
    mode: str  # "scene" or "env"
    nouns: Mapping[Shape, str]
    relation_phrases: Mapping[SpatialRelation, str]
    synonyms: Mapping[str, str]

    def __post_init__(self):
        if len(set(self.nouns.values())) != len(self.nouns):
            raise ValueError("noun table must be a bijection")
        for phrase in self.synonyms.values():
            if phrase not in self.relation_phrases.values():
                raise ValueError(f"synonym target {phrase!r} is not a canonical phrase")


@functools.lru_cache(maxsize=None)
def scene_lexicon() -> Lexicon:
    return Lexicon("scene", SCENE_NOUNS, RELATION_PHRASES, DEFAULT_SYNONYMS)


@functools.lru_cache(maxsize=None)
def env_lexicon() -> Lexicon:
    return Lexicon("env", ENV_NOUNS, RELATION_PHRASES, DEFAULT_SYNONYMS)


def get_lexicon(mode: str) -> Lexicon:
    if mode == "scene":
        return scene_lexicon()
    if mode == "env":
        return env_lexicon()
    raise ValueError(f"unknown lexicon mode {mode!r}")


def _descriptor_words(d: ObjectDescriptor, lex: Lexicon) -> List[str]:
    words = []
    if d.size is not None:
        words.append(d.size.value)
    if d.color is not None:
        words.append(d.color.value)
    words.append(lex.nouns[d.shape] if d.shape is not None else "object")
    return words


def realize(p: FilterProgram, lex: Lexicon) -> str:
    """Deterministic canonical text for a program: lowercase, single-spaced."""
    inner = p.inner
    if not isinstance(inner, Filter):
        raise ValueError(f"unsupported program form: {p!r}")
    words = ["go", "to", "the"] + _descriptor_words(inner.descriptor, lex)
    if isinstance(inner.inner, Relate):
        rel = inner.inner
        referent = rel.inner.inner.descriptor  # Unique(Filter(d1, SceneAll))
        words += lex.relation_phrases[rel.relation].split()
        words += ["the"] + _descriptor_words(referent, lex)
    return " ".join(words)


# --- parsing ------------------------------------------------------------------

def _canonicalize(tokens: List[str], lex: Lexicon) -> List[str]:
    """Replace synonym phrase token runs with their canonical phrase tokens."""
    entries = sorted(((syn.split(), canon.split()) for syn, canon in lex.synonyms.items()),
                     key=lambda e: -len(e[0]))
    out: List[str] = []
    i = 0
    while i < len(tokens):
        for syn, canon in entries:
            if tokens[i:i + len(syn)] == syn:
                out.extend(canon)
                i += len(syn)
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


class _Cursor:
    def __init__(self, tokens: List[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, word: str):
        if self.peek() != word:
            raise ParseError(f"expected {word!r}, found {self.peek()!r}", self.pos)
        self.pos += 1

    def match_phrase(self, phrase_words: List[str]) -> bool:
        if self.tokens[self.pos:self.pos + len(phrase_words)] == phrase_words:
            self.pos += len(phrase_words)
            return True
        return False


def _parse_descriptor(cur: _Cursor, lex: Lexicon) -> ObjectDescriptor:
    size_words = {s.value: s for s in Size}
    color_words = {c.value: c for c in Color}
    noun_words = {noun: shape for shape, noun in lex.nouns.items()}
    size = color = shape = None
    tok = cur.peek()
    if tok in size_words:
        size = size_words[tok]
        cur.pos += 1
        tok = cur.peek()
    if tok in color_words:
        color = color_words[tok]
        cur.pos += 1
        tok = cur.peek()
    if tok in noun_words:
        shape = noun_words[tok]
    elif tok != "object":
        raise ParseError(f"expected a noun, found {tok!r}", cur.pos)
    cur.pos += 1
    return ObjectDescriptor(size=size, color=color, shape=shape)


def parse(text: str, lex: Lexicon) -> FilterProgram:
    """Inverse of realize over the template language; case-insensitive."""
    tokens = _canonicalize(text.lower().split(), lex)
    cur = _Cursor(tokens)
    cur.expect("go")
    cur.expect("to")
    cur.expect("the")
    d2 = _parse_descriptor(cur, lex)
    if cur.peek() is None:
        return simple_program(d2)
    relation = None
    for r, phrase in sorted(lex.relation_phrases.items(),
                            key=lambda kv: -len(kv[1].split())):
        if cur.match_phrase(phrase.split()):
            relation = r
            break
    if relation is None:
        raise ParseError(f"expected a relation phrase, found {cur.peek()!r}", cur.pos)
    cur.expect("the")
    referent_pos = cur.pos
    d1 = _parse_descriptor(cur, lex)
    if d1.shape is None:
        raise ParseError("referent must be a concrete noun, not 'object'", referent_pos)
    if cur.peek() is not None:
        raise ParseError(f"unexpected trailing token {cur.peek()!r}", cur.pos)
    return complex_program(d2, relation, d1)


# --- tokenization -------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def build_vocabulary(mode: str) -> Tuple[str, ...]:
    """Token id table: UNK at id 0, then every word of the enumerated template
    language in sorted order."""
    lex = get_lexicon(mode)
    words = set()
    for p in enumerate_programs():
        words.update(realize(p, lex).split())
    return (UNK_TOKEN,) + tuple(sorted(words))


@functools.lru_cache(maxsize=None)
def _vocab_index(mode: str) -> Mapping[str, int]:
    return {w: i for i, w in enumerate(build_vocabulary(mode))}


def tokenize(text: str, mode: str = "env") -> List[int]:
    index = _vocab_index(mode)
    return [index.get(w, UNK_ID) for w in text.lower().split()]


def write_vocabulary(path, mode: str = "env"):
    """Sidecar file: one word per line, line number = token id."""
    with open(path, "w", encoding="utf-8") as fh:
        for word in build_vocabulary(mode):
            fh.write(word + "\n")
