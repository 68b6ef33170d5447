"""Single-player blackjack against a house dealer.

Rules kept to the core decision problem: hit or stand only (no splits,
doubles, insurance, or bets). The dealer stands on every 17, soft or
hard. A natural pays the same +1 as any win, so payoffs are -1, 0, +1.
Hands are tracked as french rank indices; suits never matter.

Action ids: 0 hit, 1 stand.
"""

from __future__ import annotations

import numpy as np

from cardtable.core.cards import FRENCH_RANKS, new_deck
from cardtable.core.contracts import Dealer, Game, Judger, Player, Round
from cardtable.errors import GameNotOver, IllegalMove

HIT, STAND = 0, 1
ACTION_NAMES = ("hit", "stand")
NUM_ACTIONS = 2

_RANK_SCORE = tuple(min(r + 2, 10) for r in range(12)) + (1,)  # ace counts 1 here


def hand_value(ranks) -> tuple[int, bool]:
    """Best blackjack total and whether an ace is counted as 11."""
    total = 0
    aces = 0
    for r in ranks:
        total += _RANK_SCORE[r]
        if r == 12:
            aces += 1
    if aces and total + 10 <= 21:
        return total + 10, True
    return total, False


class BlackjackDealer(Dealer):
    """Shuffles a fresh 52-card stock per hand and plays the house side."""

    _RANKS = tuple(c.rank for c in new_deck("standard52").cards)

    def __init__(self, rng):
        super().__init__(rng)
        self.stock = list(self._RANKS)
        rng.shuffle(self.stock)

    def play_out(self, hand: list[int]) -> None:
        while hand_value(hand)[0] < 17:
            hand.append(self.stock.pop())


class BlackjackJudger(Judger):
    @staticmethod
    def settle(player_ranks, dealer_ranks) -> int:
        p, _ = hand_value(player_ranks)
        if p > 21:
            return -1
        d, _ = hand_value(dealer_ranks)
        if d > 21 or p > d:
            return 1
        return -1 if p < d else 0


class BlackjackRound(Round):
    __slots__ = ("phase",)

    def __init__(self):
        self.phase = "player"  # then "over"


class BlackjackGame(Game):
    num_players = 1

    def _start(self) -> int:
        self.dealer = BlackjackDealer(self.rng)
        stock = self.dealer.stock
        self.player = Player(0, [stock.pop()])
        self.dealer_hand = [stock.pop()]  # first dealer card is the upcard
        self.player.hand.append(stock.pop())
        self.dealer_hand.append(stock.pop())
        self.round = BlackjackRound()
        self._payoff = 0
        return 0

    def _apply(self, move: int) -> None:
        if move not in (HIT, STAND):
            raise IllegalMove(f"no blackjack move {move}")
        if move == HIT:
            self.player.hand.append(self.dealer.stock.pop())
            if hand_value(self.player.hand)[0] > 21:
                self.round.phase = "over"
                self._payoff = -1
        else:
            self.dealer.play_out(self.dealer_hand)
            self.round.phase = "over"
            self._payoff = BlackjackJudger.settle(self.player.hand, self.dealer_hand)

    def is_over(self) -> bool:
        return self.round.phase == "over"

    def current_player(self) -> int:
        return 0

    def legal_moves(self) -> list[int]:
        return [HIT, STAND]

    def payoffs(self) -> list[float]:
        if not self.is_over():
            raise GameNotOver("blackjack hand still running")
        return [float(self._payoff)]

    def snapshot(self):
        return (
            tuple(self.player.hand),
            tuple(self.dealer_hand),
            tuple(self.dealer.stock),
            self.round.phase,
            self._payoff,
            self.rng.getstate(),
        )

    def restore(self, snap) -> None:
        hand, dealer_hand, stock, phase, payoff, rng_state = snap
        self.player.hand = list(hand)
        self.dealer_hand = list(dealer_hand)
        self.dealer.stock = list(stock)
        self.round.phase = phase
        self._payoff = payoff
        self.rng.setstate(rng_state)


def observe(game: BlackjackGame, seat: int, terminal: bool = False):
    score, soft = hand_value(game.player.hand)
    up = game.dealer_hand[0]
    up_score = 11 if up == 12 else _RANK_SCORE[up]
    if terminal or game.is_over():
        dealer_visible = hand_value(game.dealer_hand)[0]
        dealer_cards = tuple(FRENCH_RANKS[r] for r in game.dealer_hand)
    else:
        dealer_visible = up_score
        dealer_cards = (FRENCH_RANKS[up],)
    raw = {
        "seat": seat,
        "hand": tuple(FRENCH_RANKS[r] for r in game.player.hand),
        "score": score,
        "soft": soft,
        "dealer_visible": dealer_visible,
        "dealer_cards": dealer_cards,
    }
    legal = () if terminal or game.is_over() else (HIT, STAND)
    key = f"B|{score}{'s' if soft else 'h'}|n{len(game.player.hand)}|u{dealer_visible}"
    return raw, legal, key


def encode_planes(raw: dict) -> np.ndarray:
    """Integer pair: player score, dealer visible score."""
    return np.array([raw["score"], raw["dealer_visible"]], dtype=np.int64)


def decode_action(game: BlackjackGame, action_id: int) -> int:
    return action_id


def move_to_action_id(game: BlackjackGame, move: int) -> int:
    return move


def legal_action_ids(game: BlackjackGame) -> tuple[int, ...]:
    return (HIT, STAND)
