class ConfigError(ValueError):
    """Invalid simulation or experiment configuration."""

    def __init__(self, message, *, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class LayoutError(ConfigError):
    """Layout fails validation.  ``element`` names the offending location or doorway."""

    def __init__(self, message, *, element=None, line=None):
        self.element = element
        self.detail = message
        if element is not None:
            message = f"{element}: {message}"
        super().__init__(message, line=line)
