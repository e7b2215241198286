"""Exception types shared across the toolkit."""


class ZeroshotTopicsError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ZeroshotTopicsError):
    """Malformed input file; message carries path and line number."""


class FormatError(ZeroshotTopicsError):
    """Structurally invalid vector or store file."""


class ValidationError(ZeroshotTopicsError):
    """Input violates a documented precondition or invariant."""


class ProviderError(ZeroshotTopicsError):
    """An embedding provider could not produce a required vector."""


class MissingStoreKeysError(ProviderError):
    """A precomputed store lacks vectors the run needs.

    Carries every missing key plus the path of the manifest emitted for
    the exporter; the message previews at most the first ten keys.
    """

    def __init__(self, missing_keys, manifest_path):
        self.missing_keys = list(missing_keys)
        self.manifest_path = str(manifest_path)
        preview = ", ".join(self.missing_keys[:10])
        super().__init__(
            f"embedding store is missing {len(self.missing_keys)} key(s) "
            f"(first 10: {preview}); manifest of missing texts written to "
            f"{self.manifest_path}"
        )
