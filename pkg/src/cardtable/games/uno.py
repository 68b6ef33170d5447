"""UNO with 2 to 4 seats over the 108-card deck.

Moves are 62 integer actions: 0..51 play the colored card with that
type id (color*13 + symbol), 52..55 play a wild declaring red, green,
blue, or yellow, 56..59 the same for wild-draw-four, 60 draw, 61 pass.
Pass is only available right after a draw, to decline replaying the
drawn card.

Rules: a card is playable when its color matches the active color, its
symbol matches a colored discard top, or it is a wild. Skip advances
two seats, reverse flips direction (and acts as a skip with two
players), draw-two and wild-draw-four make the next player draw and
lose their turn. A player with nothing playable must draw; when the
drawn card is playable they may immediately play it or pass, otherwise
the turn passes by itself. When the draw pile empties, the
discard pile minus its top is reshuffled with the game rng; if there
is still nothing to draw the draw simply yields fewer cards (a bare
draw then behaves like a pass). The opening discard is the first
number card from the top of the pile; action cards flipped before it
go to the bottom. Wild-draw-four may be played regardless of held
colors, and there are no challenges or UNO calls.

First to empty their hand wins: payoff 1, everyone else 0.

Log literals: "r-7", "g-skip", "wild+b", "wild-d4+y" (declared color
after the plus).
"""

from __future__ import annotations

import numpy as np

from cardtable.core.cards import UNO_COLORS, UNO_SYMBOLS, new_deck
from cardtable.core.contracts import Game, Player
from cardtable.errors import GameNotOver, IllegalMove, InvalidParam

NUM_TYPES = 54
WILD, WD4 = 52, 53
SKIP, REVERSE, DRAW2 = 10, 11, 12
DRAW_ACTION, PASS_ACTION = 60, 61
NUM_ACTIONS = 62

MAX_HAND_SIZE = 12  # keeps at least one number card in the pile after any deal


def type_literal(type_id: int, declared: int | None = None) -> str:
    if type_id == WILD:
        base = "wild"
    elif type_id == WD4:
        base = "wild-d4"
    else:
        base = UNO_COLORS[type_id // 13] + "-" + UNO_SYMBOLS[type_id % 13]
    if declared is not None and type_id in (WILD, WD4):
        base += "+" + UNO_COLORS[declared]
    return base


def play_action_ids(type_id: int) -> list[int]:
    """Action ids that play one card of this type."""
    if type_id == WILD:
        return [52, 53, 54, 55]
    if type_id == WD4:
        return [56, 57, 58, 59]
    return [type_id]


def action_literal(action_id: int) -> str:
    if action_id == DRAW_ACTION:
        return "draw"
    if action_id == PASS_ACTION:
        return "pass"
    if action_id < 52:
        return type_literal(action_id)
    if action_id < 56:
        return type_literal(WILD, action_id - 52)
    return type_literal(WD4, action_id - 56)


class UnoGame(Game):
    def __init__(self, rng, allow_step_back: bool = False, num_players: int = 2, hand_size: int = 7):
        if not 2 <= num_players <= 4:
            raise InvalidParam(f"num_players must be 2..4, got {num_players}")
        if not 1 <= hand_size <= MAX_HAND_SIZE:
            raise InvalidParam(f"hand_size must be 1..{MAX_HAND_SIZE}, got {hand_size}")
        self.num_players = num_players
        self.hand_size = hand_size
        super().__init__(rng, allow_step_back)

    def _start(self) -> int:
        order = [card.id for card in new_deck("uno108").cards]
        self.rng.shuffle(order)
        self.pile = order  # draw from the end
        self.players = [Player(i) for i in range(self.num_players)]
        self.hands = [[0] * NUM_TYPES for _ in range(self.num_players)]
        for seat in range(self.num_players):
            for _ in range(self.hand_size):
                self.hands[seat][self.pile.pop()] += 1
        self.discard: list[int] = []
        while True:  # number card opens the game, action cards cycle to the bottom
            top = self.pile.pop()
            if top < 52 and top % 13 <= 9:
                self.discard.append(top)
                break
            self.pile.insert(0, top)
        self.declared: int | None = None
        self.direction = 1
        self.turn = 0
        self.pending: int | None = None  # drawn type the player may replay
        self.winner: int | None = None
        self.move_log: list[tuple[int, int]] = []
        return self.turn

    # rule helpers ---------------------------------------------------

    def top(self) -> int:
        return self.discard[-1]

    def active_color(self) -> int:
        top = self.top()
        return self.declared if top >= 52 else top // 13

    def playable(self, type_id: int) -> bool:
        if type_id >= 52:
            return True
        top = self.top()
        if type_id // 13 == self.active_color():
            return True
        return top < 52 and type_id % 13 == top % 13

    def _draw_cards(self, seat: int, n: int) -> list[int]:
        got = []
        for _ in range(n):
            if not self.pile:
                if len(self.discard) > 1:
                    self.pile = self.discard[:-1]
                    self.discard = self.discard[-1:]
                    self.rng.shuffle(self.pile)
                if not self.pile:
                    break
            t = self.pile.pop()
            self.hands[seat][t] += 1
            got.append(t)
        return got

    def _advance(self, seats: int) -> None:
        self.turn = (self.turn + self.direction * seats) % self.num_players

    # game protocol --------------------------------------------------

    def current_player(self) -> int:
        return self.turn

    def legal_moves(self) -> list[int]:
        if self.pending is not None:
            return play_action_ids(self.pending) + [PASS_ACTION]
        hand = self.hands[self.turn]
        moves = []
        for t in range(NUM_TYPES):
            if hand[t] and self.playable(t):
                moves += play_action_ids(t)
        if not moves:  # stuck players draw, nobody draws voluntarily
            moves.append(DRAW_ACTION)
        return moves

    def _apply(self, action_id: int) -> None:
        if action_id not in self.legal_moves():
            raise IllegalMove(f"{action_literal(action_id)} not available")
        seat = self.turn
        self.move_log.append((seat, action_id))
        if action_id == DRAW_ACTION:
            got = self._draw_cards(seat, 1)
            if got and self.playable(got[0]):
                self.pending = got[0]
            else:
                self._advance(1)
            return
        if action_id == PASS_ACTION:
            self.pending = None
            self._advance(1)
            return

        if action_id < 52:
            played, declared = action_id, None
        elif action_id < 56:
            played, declared = WILD, action_id - 52
        else:
            played, declared = WD4, action_id - 56
        self.pending = None
        self.hands[seat][played] -= 1
        self.discard.append(played)
        self.declared = declared
        if sum(self.hands[seat]) == 0:
            self.winner = seat
            return
        if played >= 52:
            if played == WD4:
                self._draw_cards((seat + self.direction) % self.num_players, 4)
                self._advance(2)
            else:
                self._advance(1)
            return
        symbol = played % 13
        if symbol == SKIP:
            self._advance(2)
        elif symbol == REVERSE:
            self.direction = -self.direction
            self._advance(2 if self.num_players == 2 else 1)
        elif symbol == DRAW2:
            self._draw_cards((seat + self.direction) % self.num_players, 2)
            self._advance(2)
        else:
            self._advance(1)

    def is_over(self) -> bool:
        return self.winner is not None

    def payoffs(self) -> list[float]:
        if self.winner is None:
            raise GameNotOver("no empty hand yet")
        return [1.0 if i == self.winner else 0.0 for i in range(self.num_players)]

    def snapshot(self):
        return (
            tuple(tuple(h) for h in self.hands),
            tuple(self.pile),
            tuple(self.discard),
            self.declared,
            self.direction,
            self.turn,
            self.pending,
            self.winner,
            tuple(self.move_log),
            self.rng.getstate(),
        )

    def restore(self, snap) -> None:
        hands, pile, discard, declared, direction, turn, pending, winner, log, rng_state = snap
        self.hands = [list(h) for h in hands]
        self.pile = list(pile)
        self.discard = list(discard)
        self.declared = declared
        self.direction = direction
        self.turn = turn
        self.pending = pending
        self.winner = winner
        self.move_log = list(log)
        self.rng.setstate(rng_state)


def observe(game: UnoGame, seat: int, terminal: bool = False):
    hand = game.hands[seat]
    discarded = [0] * NUM_TYPES
    for t in game.discard:
        discarded[t] += 1
    raw = {
        "seat": seat,
        "hand_counts": tuple(hand),
        "hand": tuple(type_literal(t) for t in range(NUM_TYPES) for _ in range(hand[t])),
        "top": type_literal(game.top(), game.declared),
        "top_type": game.top(),
        "active_color": UNO_COLORS[game.active_color()],
        "active_color_index": game.active_color(),
        "direction": game.direction,
        "hand_sizes": tuple(sum(h) for h in game.hands),
        "discarded_counts": tuple(discarded),
        "pending": None if game.pending is None else type_literal(game.pending),
    }
    over = terminal or game.is_over()
    legal = tuple(game.legal_moves()) if not over and seat == game.turn else ()
    sizes = ",".join(str(sum(h)) for h in game.hands)
    pend = "-" if game.pending is None else str(game.pending)
    key = (
        f"U{seat}|h{''.join(map(str, hand))}|t{raw['top']}"
        f"|d{game.direction}|p{pend}|s{sizes}"
    )
    return raw, legal, key


def encode_planes(raw: dict) -> np.ndarray:
    """Four rows of 54: hand counts, active color block, top-symbol
    slots across colors (zero when the top is a wild), discard counts."""
    planes = np.zeros((4, NUM_TYPES), dtype=np.int8)
    planes[0, :] = raw["hand_counts"]
    color = raw["active_color_index"]
    planes[1, color * 13 : color * 13 + 13] = 1
    top = raw["top_type"]
    if top < 52:
        planes[2, [c * 13 + top % 13 for c in range(4)]] = 1
    planes[3, :] = raw["discarded_counts"]
    return planes


def decode_action(game: UnoGame, action_id: int) -> int:
    return action_id


def move_to_action_id(game: UnoGame, move: int) -> int:
    return move


def legal_action_ids(game: UnoGame) -> tuple[int, ...]:
    return tuple(game.legal_moves())
