"""Exception hierarchy shared across the package."""


class MatchingError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(MatchingError, ValueError):
    """Input does not describe a valid graph or matching, or a walk leaves its graph."""


class ContractViolation(MatchingError, RuntimeError):
    """A precondition or postcondition of an operation failed."""


class OracleRefusal(MatchingError):
    """The exhaustive oracle refuses instances above its node limit."""


class NoPathError(MatchingError):
    """An augmenting path was promised but could not be constructed."""


class CertificateError(ContractViolation):
    """The sparse certificate lost an augmenting path it should preserve."""


class BandwidthViolation(MatchingError):
    """A node tried to send a message larger than the per-edge budget."""

    def __init__(self, node, edge, rnd, bits, budget):
        self.node, self.edge, self.round = node, edge, rnd
        self.bits, self.budget = bits, budget
        super().__init__(
            f"node {node} sent {bits} bits on edge {edge} in round {rnd} "
            f"(budget {budget})"
        )


class NonTermination(MatchingError):
    """The simulation exceeded its round cap."""


class BudgetExceeded(ContractViolation):
    """A subroutine used more rounds than its schedule slot allows."""
