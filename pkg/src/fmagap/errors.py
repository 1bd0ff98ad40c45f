"""Exception hierarchy shared by every layer of the index."""


class FMAError(Exception):
    """Base class for all index errors."""


class SegmentationError(FMAError):
    """The common/non-common decomposition does not describe the strings."""


class GapPositionError(FMAError):
    """A transformed column falls inside a gap of the requested string."""


class ModelViolationError(FMAError):
    """Suffixes of one a-suffix are not consecutive in the generalized suffix array."""


class LemmaViolationError(FMAError):
    """Same-symbol characters of one L entry map to different F entries."""


class UndefinedPairError(FMAError):
    """LF requested for a (symbol, entry) pair that is not in L."""


class CorruptIndexError(FMAError):
    """An LF walk failed to reach a sample; the index is inconsistent."""


class ParseError(FMAError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class IngestError(FMAError):
    """Variant records cannot be turned into a segmentation."""


class ImageError(FMAError):
    """Base class for index image problems."""


class BadMagicError(ImageError):
    pass


class VersionMismatchError(ImageError):
    pass


class ChecksumError(ImageError):
    pass
