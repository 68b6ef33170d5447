"""Exception types shared across the toolkit."""


class CardTableError(Exception):
    """Base class for every error raised by this package."""


class InsufficientCards(CardTableError):
    """A deal asked for more cards than the deck holds."""


class DuplicateCard(CardTableError):
    """A deck was constructed with a card multiset that does not match its kind."""


class UnknownGame(CardTableError):
    """game_id is not registered."""


class InvalidParam(CardTableError):
    """A config carried an unknown or out-of-range parameter."""


class AgentsNotSet(CardTableError):
    """Env.run was called before agents were attached."""


class IllegalAction(CardTableError):
    """An action id outside the current legal set was submitted."""


class IllegalMove(CardTableError):
    """A concrete move violates the game rules at this state."""


class GameOver(CardTableError):
    """step was called on a finished game."""


class GameNotOver(CardTableError):
    """Payoffs were requested before the game finished."""


class NotSingleAgentMode(CardTableError):
    """reset/sa_step require an env built with make_single_agent."""


class NoConcreteMove(CardTableError):
    """An abstract action id has no concrete completion in the current hand."""


class GameTooLarge(CardTableError):
    """A full tree walk would exceed the enumeration guard."""


class NotZeroSum(CardTableError):
    """Exploitability is only defined for two-player zero-sum games."""


class SeatMismatch(CardTableError):
    """The number of agents does not match the number of seats."""


class WorkerFailure(CardTableError):
    """A rollout worker raised; carries the failing game index."""

    def __init__(self, game_index: int, message: str):
        super().__init__(f"game {game_index}: {message}")
        self.game_index = game_index


class ParseError(CardTableError):
    """A policy file, config file, or trajectory log is malformed."""
