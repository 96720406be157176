"""Exception hierarchy.

Every parse error carries enough location information (source name plus
line number or offset) for the CLI to print a useful diagnostic.
"""


class SemFidError(ValueError):
    """Base class for all errors raised by semfid."""


class _Located(SemFidError):
    def __init__(self, message, source=None, line_no=None):
        self.source = source
        self.line_no = line_no
        where = []
        if source is not None:
            where.append(str(source))
        if line_no is not None:
            where.append(f"line {line_no}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MalformedLine(_Located):
    """A vector-file row with non-numeric components or the wrong arity."""


class EmptyTable(SemFidError):
    pass


class DimMismatch(SemFidError):
    pass


class LengthMismatch(SemFidError):
    pass


class EmptyLexicon(SemFidError):
    pass


class MalformedRecord(_Located):
    """A detections or captions record that cannot be interpreted."""


class DuplicateImage(_Located):
    def __init__(self, image_id, source=None, line_no=None):
        self.image_id = image_id
        super().__init__(f"duplicate image_id {image_id!r}", source, line_no)


class ZeroGroundTruthObjects(SemFidError):
    pass


class MixedImageIds(SemFidError):
    pass


class DegenerateInput(SemFidError):
    pass


class DomainError(SemFidError):
    pass


class NoOverlap(SemFidError):
    pass


class MissingDetections(SemFidError):
    """A captioned image has no record in a detections file."""
