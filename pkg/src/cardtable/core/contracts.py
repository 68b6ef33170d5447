"""Role contracts every game implements: Player, Dealer, Judger, Round, Game.

A Game owns the turn loop and exposes step/step_back. step_back is
implemented once here as a stack of full-state snapshots; each game
supplies snapshot() and restore() plus the move application. Snapshots
capture everything the transition touched, including the generator
state, so a restored game replays chance identically. The stack is only
maintained when allow_step_back is set; throughput paths leave it off.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

from cardtable.core.rng import Rng
from cardtable.errors import GameOver


class Player:
    """A seat: id plus whatever hand representation the game uses."""

    __slots__ = ("player_id", "hand")

    def __init__(self, player_id: int, hand=None):
        self.player_id = player_id
        self.hand = hand if hand is not None else []


class Dealer:
    """Shuffles and hands out cards. Owns the remaining stock."""

    __slots__ = ("rng", "stock")

    def __init__(self, rng: Rng):
        self.rng = rng
        self.stock: list = []

    def draw(self, n: int) -> list:
        drawn = self.stock[len(self.stock) - n :]
        drawn.reverse()
        del self.stock[len(self.stock) - n :]
        return drawn


class Judger:
    """Legal-move computation and payoff decisions. Stateless per game."""


class Round:
    """Progression state of one betting or trick round."""


class Game(ABC):
    """Turn-based engine with optional snapshot-based undo."""

    num_players: int = 1

    def __init__(self, rng: Rng, allow_step_back: bool = False):
        self.rng = rng
        self.allow_step_back = allow_step_back
        self._history: list[Any] = []

    def reset(self) -> int:
        """Deal a fresh hand; returns the first player to act."""
        self._history.clear()
        return self._start()

    def step(self, move) -> int | None:
        """Apply one concrete move; returns the next player to act, None if over."""
        if self.is_over():
            raise GameOver("step on a finished game")
        if self.allow_step_back:
            self._history.append(self.snapshot())
        self._apply(move)
        return None if self.is_over() else self.current_player()

    def step_back(self) -> bool:
        """Undo the most recent step. False when there is nothing to undo."""
        if not self._history:
            return False
        self.restore(self._history.pop())
        return True

    @abstractmethod
    def _start(self) -> int: ...

    @abstractmethod
    def _apply(self, move) -> None: ...

    @abstractmethod
    def is_over(self) -> bool: ...

    @abstractmethod
    def current_player(self) -> int: ...

    @abstractmethod
    def legal_moves(self) -> list: ...

    @abstractmethod
    def payoffs(self) -> list[float]: ...

    @abstractmethod
    def snapshot(self) -> Any: ...

    @abstractmethod
    def restore(self, snap: Any) -> None: ...
