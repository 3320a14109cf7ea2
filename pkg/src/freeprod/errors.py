"""Exception hierarchy.

Input problems (bad syntax, malformed factors, invalid graph-of-groups
documents) derive from :class:`InputError`; the CLI maps them to exit code 2.
"""


class FreeProdError(Exception):
    pass


class InputError(FreeProdError, ValueError):
    pass


class MalformedFactorError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class SpecError(InputError):
    """A graph-of-groups document that fails validation."""


class SchemaError(InputError):
    """A certificate or action document with the wrong JSON shape."""


class PreconditionError(FreeProdError, ValueError):
    pass


class InvalidCoverError(FreeProdError):
    def __init__(self, violation):
        self.violation = violation
        super().__init__(str(violation))


class NotCommensurableError(FreeProdError):
    def __init__(self, class1, class2):
        self.class1 = class1
        self.class2 = class2
        super().__init__(f"not commensurable: {class1} vs {class2}")


class WiringError(FreeProdError, RuntimeError):
    """Connectivity repair exceeded its iteration bound."""
