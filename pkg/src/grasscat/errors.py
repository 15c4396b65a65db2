"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`GrasscatError`, so callers (and the CLI) can catch one type.
"""


class GrasscatError(Exception):
    pass


class RankDeficient(GrasscatError):
    pass


class NotOrthonormal(GrasscatError):
    pass


class ShapeMismatch(GrasscatError):
    pass


class AmbientMismatch(ShapeMismatch):
    pass


class OutsideChartDomain(GrasscatError):
    pass


class NotComposable(GrasscatError):
    pass


class SamplerExhausted(GrasscatError):
    pass


class TypingMismatch(GrasscatError):
    pass


class InconsistentSamples(GrasscatError):
    pass


class CocycleViolation(GrasscatError):
    pass


class NotRankOne(GrasscatError):
    pass


class NotCircle(GrasscatError):
    pass


class UndersampledLoop(GrasscatError):
    pass


class SectionMismatch(GrasscatError):
    pass


class SchemaError(GrasscatError):
    pass
