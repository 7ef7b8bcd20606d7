"""Exception types shared across foamlab."""


class FoamlabError(Exception):
    """Base class for all foamlab errors."""


class LimitError(FoamlabError):
    """A desk-scale guardrail (element cap, cell cap, search bound) was exceeded."""


class InconsistentLiftError(FoamlabError):
    """The real-structure images do not define an automorphism of the image group."""


class IncompatibleLiftsError(FoamlabError):
    """No involutive real form on the regular cover is compatible with a component lift."""


class InadmissibleComponentError(FoamlabError):
    """A component has an oval that does not map homeomorphically onto the base circle.

    This is item 5 of the equipped-family axioms: every oval of a component
    quotient must cover the real locus of the base exactly once.
    """

    def __init__(self, name, reason):
        self.name = name
        self.reason = reason
        super().__init__(
            f"component {name!r} is inadmissible (family axiom 5, oval is not a "
            f"homeomorphism onto the base circle): {reason}")


class ConsistencyError(FoamlabError):
    """A proven inequality or structural invariant failed; indicates a bug."""


class ParseError(FoamlabError):
    """An input document or permutation string is malformed."""


class ExpansionError(FoamlabError):
    """Expansion data does not define a graph surjection commuting with the walks."""
