"""Exception types shared by the wavebench modules."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class PrecisionError(ValueError):
    """A numerical control is too coarse for the requested accuracy."""
