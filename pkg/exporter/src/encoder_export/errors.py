class ExportError(Exception):
    """Base class for export failures."""


class ManifestError(ExportError):
    """Malformed manifest; message carries path and line number."""


class EncoderUnavailableError(ExportError):
    """The requested encoder or its weights could not be loaded."""


class EncodingFailedError(ExportError):
    """A text could not be embedded; message names the offending key."""
