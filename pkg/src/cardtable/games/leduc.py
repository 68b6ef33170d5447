"""Two-player leduc hold'em.

Six cards (J, Q, K in two suits). Both players ante 1 unit. One private
card each, a betting round, one public card, a second betting round,
then showdown: a private card pairing the public card wins, otherwise
the higher private rank; equal ranks split. Raises are fixed at 2 units
in round one and 4 in round two, at most two raises per round. Folding
is legal even when checking is free and simply forfeits the pot.
Payoffs are net units won (antes count), so they sum to zero.

Hands hold card ids 0..5 (suit * 3 + rank); play only ever depends on
the rank, id % 3. Action ids (shared with limit hold'em): 0 call,
1 raise, 2 fold, 3 check. Betting history letters: c call, r raise,
f fold, k check, '/' between rounds.
"""

from __future__ import annotations

import numpy as np

from cardtable.core.cards import LEDUC_RANKS, new_deck
from cardtable.core.contracts import Dealer, Game, Judger, Player, Round
from cardtable.errors import GameNotOver, IllegalMove

CALL, RAISE, FOLD, CHECK = 0, 1, 2, 3
ACTION_NAMES = ("call", "raise", "fold", "check")
NUM_ACTIONS = 4

ANTE = 1
RAISE_SIZE = (2, 4)  # by round index
MAX_RAISES = 2
_MOVE_CHAR = {CALL: "c", RAISE: "r", FOLD: "f", CHECK: "k"}


def round_legal_moves(facing_bet: bool, raises: int) -> tuple[int, ...]:
    """Legal betting moves, sorted by action id."""
    moves = [CALL] if facing_bet else [CHECK]
    if raises < MAX_RAISES:
        moves.append(RAISE)
    moves.append(FOLD)
    moves.sort()
    return tuple(moves)


def showdown_winner(rank0: int, rank1: int, public_rank: int) -> int:
    """0 or 1 for a winner, -1 for a split. Ranks, not card ids."""
    if rank0 == public_rank:
        return 0
    if rank1 == public_rank:
        return 1
    if rank0 == rank1:
        return -1
    return 0 if rank0 > rank1 else 1


def info_key(seat: int, private_rank: int, public_rank: int | None, history: str) -> str:
    pub = "-" if public_rank is None else LEDUC_RANKS[public_rank]
    return f"L{seat}|{LEDUC_RANKS[private_rank]}|{pub}|{history}"


class LeducDealer(Dealer):
    def __init__(self, rng):
        super().__init__(rng)
        self.stock = [c.id for c in new_deck("leduc6").cards]
        rng.shuffle(self.stock)


class LeducJudger(Judger):
    showdown_winner = staticmethod(showdown_winner)


class LeducRound(Round):
    """One betting round: who acts, what is owed, how many raises so far."""

    __slots__ = ("index", "raises", "to_act", "acted")

    def __init__(self, index: int, first: int):
        self.index = index
        self.raises = 0
        self.to_act = first
        self.acted = 0


class LeducGame(Game):
    num_players = 2

    def _start(self) -> int:
        self.dealer = LeducDealer(self.rng)
        self.players = [Player(i, [self.dealer.stock.pop()]) for i in range(2)]
        self.public: int | None = None  # card id
        self.chips = [ANTE, ANTE]  # total contribution to the pot
        self.round = LeducRound(0, 0)
        self.round_bets = [0, 0]
        self.history = ""
        self._winner: int | None = None  # -1 split
        return 0

    def facing_bet(self, seat: int) -> bool:
        return self.round_bets[seat] < max(self.round_bets)

    def legal_moves(self) -> list[int]:
        return list(round_legal_moves(self.facing_bet(self.round.to_act), self.round.raises))

    def current_player(self) -> int:
        return self.round.to_act

    def _apply(self, move: int) -> None:
        seat = self.round.to_act
        other = 1 - seat
        if move not in self.legal_moves():
            raise IllegalMove(f"{ACTION_NAMES[move]} not available")
        self.history += _MOVE_CHAR[move]
        if move == FOLD:
            self._winner = other
            return
        if move == RAISE:
            owe = max(self.round_bets) - self.round_bets[seat]
            put = owe + RAISE_SIZE[self.round.index]
            self.round_bets[seat] += put
            self.chips[seat] += put
            self.round.raises += 1
            self.round.acted += 1
            self.round.to_act = other
            return
        if move == CALL:
            owe = max(self.round_bets) - self.round_bets[seat]
            self.round_bets[seat] += owe
            self.chips[seat] += owe
            round_over = True
        else:  # CHECK
            round_over = self.round.acted >= 1
        self.round.acted += 1
        if round_over:
            self._advance_round()
        else:
            self.round.to_act = other

    def _advance_round(self) -> None:
        if self.round.index == 0:
            self.public = self.dealer.stock.pop()
            self.round = LeducRound(1, 0)
            self.round_bets = [0, 0]
            self.history += "/"
        else:
            self._winner = showdown_winner(
                self.players[0].hand[0] % 3, self.players[1].hand[0] % 3, self.public % 3
            )

    def is_over(self) -> bool:
        return self._winner is not None

    def payoffs(self) -> list[float]:
        if self._winner is None:
            raise GameNotOver("leduc hand still running")
        if self._winner == -1:
            return [0.0, 0.0]
        stake = float(self.chips[1 - self._winner])
        return [stake, -stake] if self._winner == 0 else [-stake, stake]

    def snapshot(self):
        return (
            self.players[0].hand[0],
            self.players[1].hand[0],
            self.public,
            tuple(self.chips),
            tuple(self.round_bets),
            (self.round.index, self.round.raises, self.round.to_act, self.round.acted),
            self.history,
            self._winner,
            tuple(self.dealer.stock),
            self.rng.getstate(),
        )

    def restore(self, snap) -> None:
        h0, h1, public, chips, bets, round_state, history, winner, stock, rng_state = snap
        self.players[0].hand = [h0]
        self.players[1].hand = [h1]
        self.public = public
        self.chips = list(chips)
        self.round_bets = list(bets)
        self.round = LeducRound(round_state[0], round_state[2])
        self.round.raises = round_state[1]
        self.round.acted = round_state[3]
        self.history = history
        self._winner = winner
        self.dealer.stock = list(stock)
        self.rng.setstate(rng_state)


def observe(game: LeducGame, seat: int, terminal: bool = False):
    private = game.players[seat].hand[0]
    raw = {
        "seat": seat,
        "hand": LEDUC_RANKS[private % 3],
        "hand_card": private,
        "public": None if game.public is None else LEDUC_RANKS[game.public % 3],
        "public_card": game.public,
        "history": game.history,
        "my_chips": game.chips[seat],
        "opp_chips": game.chips[1 - seat],
        "round": game.round.index + 1,
    }
    over = terminal or game.is_over()
    legal = () if over else tuple(round_legal_moves(game.facing_bet(seat), game.round.raises))
    key = info_key(seat, private % 3, None if game.public is None else game.public % 3, game.history)
    return raw, legal, key


def encode_planes(raw: dict) -> np.ndarray:
    """Own-card one-hot by id (6), public one-hot by id (6), both contributions."""
    planes = np.zeros(14, dtype=np.float64)
    planes[raw["hand_card"]] = 1.0
    if raw["public_card"] is not None:
        planes[6 + raw["public_card"]] = 1.0
    planes[12] = raw["my_chips"]
    planes[13] = raw["opp_chips"]
    return planes


def decode_action(game: LeducGame, action_id: int) -> int:
    return action_id


def move_to_action_id(game: LeducGame, move: int) -> int:
    return move


def legal_action_ids(game: LeducGame) -> tuple[int, ...]:
    return tuple(round_legal_moves(game.facing_bet(game.round.to_act), game.round.raises))
