"""Exception types shared across the toolkit."""


class SceneNavError(Exception):
    """Base class for all toolkit errors."""


class SameObjectError(SceneNavError):
    """Spatial relation queried between an object and itself."""


class UnknownIdError(SceneNavError):
    """Object id not present in the scene."""


class EmptySceneError(SceneNavError):
    """Imported scene document contains no objects."""


class MissingAttributeError(SceneNavError):
    """Imported object lacks a required attribute."""


class UnknownValueError(SceneNavError):
    """Imported attribute value outside the fixed vocabulary."""


class GenerationExhausted(SceneNavError):
    """Too many consecutive placement rejections during scene generation."""


class NonUniqueReferent(SceneNavError):
    """A program node that requires a singleton denoted a set of size != 1."""


class NoUniqueInstruction(SceneNavError):
    """Instruction sampling exhausted its attempt budget without a unique target."""


class ParseError(SceneNavError):
    """Instruction text outside the template language."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at token {position})")
        self.position = position


class DegenerateBoundsError(SceneNavError):
    """Bounds with zero extent on an axis cannot be mapped."""


class SceneMismatchError(SceneNavError):
    """Instruction record does not belong to the supplied scene."""


class UnknownTargetError(SceneNavError):
    """Instruction target id absent from the mapped scene."""


class EpisodeFinished(SceneNavError):
    """step() called on a terminated episode."""


class InsufficientDataError(SceneNavError):
    """No dataset entry qualifies for the requested curriculum stage."""
