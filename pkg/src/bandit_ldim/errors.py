"""Exception hierarchy shared by the library and the CLI."""


class BanditLdimError(Exception):
    """Base class for all library errors."""


class InputError(BanditLdimError, ValueError):
    """Invalid argument or malformed user input (CLI exit code 2)."""


class ParseError(InputError):
    """A class, stream or tree file could not be parsed."""


class ValidationError(InputError):
    """A file parsed but violates a structural invariant."""


class ConfigurationError(InputError):
    """Incompatible learner / adversary / protocol combination."""


class CapacityError(BanditLdimError):
    """A configured size cap would be exceeded (CLI exit code 3)."""


class InvariantViolation(BanditLdimError, RuntimeError):
    """An internal numerical or logical invariant failed."""


class ContractViolation(BanditLdimError, RuntimeError):
    """A wrapped component broke its interface contract."""
