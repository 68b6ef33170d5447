"""Fixed-limit texas hold'em, two players by default.

Seat 0 posts the small blind (0.5 bb), seat 1 the big blind (1 bb).
Heads-up, the small blind acts first before the flop and second after
it; with three or more seats the player after the big blind opens and
seat 0 opens the later rounds. Four betting rounds (hole cards, flop,
turn, river) with a fixed raise of `fixed_raise` big blinds in the
first two rounds and double that in the last two, and at most four
raises per round. Stacks are unbounded so everyone either matches the
bet or folds; there are no side pots. Folding is legal even when
checking is free.

Chips are tracked in integer half-big-blind units and split pots are
divided exactly equally, so payoffs can be fractional big blinds but
always sum to zero. Suits never break ties and the ace plays low in a
five-high straight.

Action ids (shared with leduc): 0 call, 1 raise, 2 fold, 3 check.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from cardtable.core.cards import FRENCH_RANKS, FRENCH_SUITS, new_deck
from cardtable.core.contracts import Dealer, Game, Judger, Player, Round
from cardtable.errors import GameNotOver, IllegalMove, InvalidParam
from cardtable.games.hand_rank import evaluate_seven

CALL, RAISE, FOLD, CHECK = 0, 1, 2, 3
ACTION_NAMES = ("call", "raise", "fold", "check")
NUM_ACTIONS = 4

SMALL_BLIND = 1  # half big blinds
BIG_BLIND = 2
MAX_RAISES = 4
_COMMUNITY_PER_ROUND = (0, 3, 1, 1)
_MOVE_CHAR = {CALL: "c", RAISE: "r", FOLD: "f", CHECK: "k"}


def card_name(cid: int) -> str:
    return FRENCH_RANKS[cid % 13] + FRENCH_SUITS[cid // 13]


class HoldemDealer(Dealer):
    def __init__(self, rng):
        super().__init__(rng)
        self.stock = [c.id for c in new_deck("standard52").cards]
        rng.shuffle(self.stock)


class HoldemJudger(Judger):
    @staticmethod
    def winners(hole_by_seat, community, alive) -> list[int]:
        best = None
        out: list[int] = []
        for seat in alive:
            rank = evaluate_seven(hole_by_seat[seat] + community)
            if best is None or rank > best:
                best, out = rank, [seat]
            elif rank == best:
                out.append(seat)
        return out


class HoldemRound(Round):
    __slots__ = ("index", "raises", "to_act", "acted")

    def __init__(self, index: int, first: int):
        self.index = index
        self.raises = 0
        self.to_act = first
        self.acted: set[int] = set()


class LimitHoldemGame(Game):
    def __init__(self, rng, allow_step_back=False, num_players: int = 2, fixed_raise: int = 1):
        if not 2 <= num_players <= 10:
            raise InvalidParam(f"num_players must be 2..10, got {num_players}")
        if not (isinstance(fixed_raise, int) and fixed_raise >= 1):
            raise InvalidParam(f"fixed_raise must be a positive integer, got {fixed_raise!r}")
        super().__init__(rng, allow_step_back)
        self.num_players = num_players
        self.fixed_raise = fixed_raise

    def _raise_size(self) -> int:
        bb = 2 * self.fixed_raise
        return bb if self.round.index < 2 else 2 * bb

    def _first_actor(self, round_index: int) -> int:
        n = self.num_players
        if round_index == 0:
            return 0 if n == 2 else 2 % n
        return 1 if n == 2 else 0

    def _start(self) -> int:
        n = self.num_players
        self.dealer = HoldemDealer(self.rng)
        self.players = [Player(i, sorted(self.dealer.draw(2))) for i in range(n)]
        self.community: list[int] = []
        self.folded = [False] * n
        self.chips = [0] * n
        self.chips[0] = SMALL_BLIND
        self.chips[1 % n] = BIG_BLIND
        self.round = HoldemRound(0, self._first_actor(0))
        self.round_bets = [0] * n
        self.round_bets[0] = SMALL_BLIND
        self.round_bets[1 % n] = BIG_BLIND
        self.history = ""
        self._results: list | None = None  # net half-bb per seat, Fraction when a pot splits unevenly
        return self.round.to_act

    def alive(self) -> list[int]:
        return [i for i in range(self.num_players) if not self.folded[i]]

    def facing_bet(self, seat: int) -> bool:
        return self.round_bets[seat] < max(self.round_bets)

    def legal_moves(self) -> list[int]:
        moves = [CALL] if self.facing_bet(self.round.to_act) else [CHECK]
        if self.round.raises < MAX_RAISES:
            moves.append(RAISE)
        moves.append(FOLD)
        moves.sort()
        return moves

    def current_player(self) -> int:
        return self.round.to_act

    def _next_actor(self, seat: int) -> int:
        nxt = (seat + 1) % self.num_players
        while self.folded[nxt]:
            nxt = (nxt + 1) % self.num_players
        return nxt

    def _round_settled(self) -> bool:
        top = max(self.round_bets[i] for i in self.alive())
        return all(i in self.round.acted and self.round_bets[i] == top for i in self.alive())

    def _apply(self, move: int) -> None:
        seat = self.round.to_act
        if move not in self.legal_moves():
            raise IllegalMove(f"{ACTION_NAMES[move]} not available")
        self.history += _MOVE_CHAR[move]
        if move == FOLD:
            self.folded[seat] = True
            self.round.acted.discard(seat)
            alive = self.alive()
            if len(alive) == 1:
                self._settle_fold(alive[0])
                return
        else:
            if move in (CALL, RAISE):
                owe = max(self.round_bets) - self.round_bets[seat]
                put = owe + (self._raise_size() if move == RAISE else 0)
                self.round_bets[seat] += put
                self.chips[seat] += put
            if move == RAISE:
                self.round.raises += 1
                self.round.acted = {seat}
            else:
                self.round.acted.add(seat)
        if self._round_settled():
            self._advance_round()
        else:
            self.round.to_act = self._next_actor(seat)

    def _advance_round(self) -> None:
        if self.round.index == 3:
            self._settle_showdown()
            return
        nxt = self.round.index + 1
        self.community += self.dealer.draw(_COMMUNITY_PER_ROUND[nxt])
        self.round = HoldemRound(nxt, self._first_actor(nxt))
        if self.folded[self.round.to_act]:
            self.round.to_act = self._next_actor(self.round.to_act)
        self.round_bets = [0] * self.num_players
        self.history += "/"

    def _settle_fold(self, winner: int) -> None:
        pot = sum(self.chips)
        self._results = [pot - self.chips[i] if i == winner else -self.chips[i] for i in range(self.num_players)]

    def _settle_showdown(self) -> None:
        alive = self.alive()
        winners = HoldemJudger.winners([p.hand for p in self.players], self.community, alive)
        pot = sum(self.chips)
        share = Fraction(pot, len(winners))
        if share.denominator == 1:
            share = int(share)
        self._results = [-c for c in self.chips]
        for seat in winners:
            self._results[seat] += share

    def is_over(self) -> bool:
        return self._results is not None

    def payoffs(self) -> list[float]:
        if self._results is None:
            raise GameNotOver("hold'em hand still running")
        return [float(r) / 2 for r in self._results]  # half-bb to bb

    def snapshot(self):
        return (
            tuple(tuple(p.hand) for p in self.players),
            tuple(self.community),
            tuple(self.folded),
            tuple(self.chips),
            tuple(self.round_bets),
            (self.round.index, self.round.raises, self.round.to_act, frozenset(self.round.acted)),
            self.history,
            None if self._results is None else tuple(self._results),
            tuple(self.dealer.stock),
            self.rng.getstate(),
        )

    def restore(self, snap) -> None:
        hands, community, folded, chips, bets, round_state, history, results, stock, rng_state = snap
        for p, hand in zip(self.players, hands):
            p.hand = list(hand)
        self.community = list(community)
        self.folded = list(folded)
        self.chips = list(chips)
        self.round_bets = list(bets)
        self.round = HoldemRound(round_state[0], round_state[2])
        self.round.raises = round_state[1]
        self.round.acted = set(round_state[3])
        self.history = history
        self._results = None if results is None else list(results)
        self.dealer.stock = list(stock)
        self.rng.setstate(rng_state)


def observe(game: LimitHoldemGame, seat: int, terminal: bool = False):
    hole = game.players[seat].hand
    raw = {
        "seat": seat,
        "hole": tuple(hole),
        "hole_names": tuple(card_name(c) for c in hole),
        "community": tuple(game.community),
        "community_names": tuple(card_name(c) for c in game.community),
        "history": game.history,
        "round": game.round.index + 1,
        "my_chips": game.chips[seat] / 2,
        "max_bet": max(game.round_bets) / 2,
        "pot": sum(game.chips) / 2,
        "alive": tuple(game.alive()),
    }
    over = terminal or game.is_over()
    if over:
        legal = ()
    else:
        legal = tuple(game.legal_moves()) if seat == game.round.to_act else ()
    key = "H{}|{}|{}|{}".format(
        seat, ".".join(raw["hole_names"]), ".".join(raw["community_names"]), game.history
    )
    return raw, legal, key


def encode_planes(raw: dict) -> np.ndarray:
    """Hole one-hot (52), community one-hot (52), then chips-in, max bet, pot in bb."""
    planes = np.zeros(107, dtype=np.float64)
    for cid in raw["hole"]:
        planes[cid] = 1.0
    for cid in raw["community"]:
        planes[52 + cid] = 1.0
    planes[104] = raw["my_chips"]
    planes[105] = raw["max_bet"]
    planes[106] = raw["pot"]
    return planes


def decode_action(game: LimitHoldemGame, action_id: int) -> int:
    return action_id


def move_to_action_id(game: LimitHoldemGame, move: int) -> int:
    return move


def legal_action_ids(game: LimitHoldemGame) -> tuple[int, ...]:
    return tuple(game.legal_moves())
