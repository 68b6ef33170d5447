"""Dou dizhu move grammar and the 309-entry abstract action table.

Ranks are dou dizhu order 0..14: 3 4 5 6 7 8 9 T J Q K A 2, then black
joker (13) and red joker (14). Hands are 15-slot count vectors. Chains
never contain 2s or jokers, so chain ranks stop at 11 (the ace).

Categories and their shapes (length is the chain/plane span, 1 otherwise):

  pass                                          1 entry
  solo            one card, any rank           15
  pair            two of a rank 3..2           13
  trio            three of a rank              13
  trio_single     trio + one kicker card       13
  trio_pair       trio + one kicker pair       13
  solo_chain      5..12 consecutive singles    36
  pair_chain      3..10 consecutive pairs      52
  plane           2..6 consecutive trios       45
  plane_solo      2..5 trios + that many solo kickers   38
  plane_pair      2..4 trios + that many pair kickers   30
  quad_two_solo   four of a rank + two solo kickers     13
  quad_two_pair   four of a rank + two pair kickers     13
  bomb            four of a rank               13
  rocket          both jokers                   1
                                        total 309

An abstract action is (category, primal rank, length); kickers are
dropped. Where a move carries several kickers (plane_solo, plane_pair,
quad_two_solo, quad_two_pair) the kicker ranks must be pairwise
distinct, which keeps every emitted card multiset parseable back to
exactly one pattern. Kickers never reuse a primal rank. Solo kickers
may be 2s or jokers; pair kickers stop at rank 12. Playing a trio,
pair, or chain card out of a held bomb is allowed.

Decoding an abstract action completes the kickers deterministically:
take the lowest eligible kicker ranks that do not break a bomb (a rank
held as all four) or the rocket (both jokers held); fall back to
breaking ranks, lowest first, only when nothing else remains. Within a
rank the engine discards the lowest card ids first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from cardtable.errors import NoConcreteMove

DD_RANK_NAMES = ("3", "4", "5", "6", "7", "8", "9", "T", "J", "Q", "K", "A", "2", "B", "R")
NUM_RANKS = 15
CHAIN_TOP = 11  # highest rank allowed inside a chain (the ace)

PASS_ID = 0

_CARDS_PER_RANK = {
    "solo": 1, "solo_chain": 1,
    "pair": 2, "pair_chain": 2,
    "trio": 3, "trio_single": 3, "trio_pair": 3,
    "plane": 3, "plane_solo": 3, "plane_pair": 3,
    "quad_two_solo": 4, "quad_two_pair": 4, "bomb": 4,
}


def french_to_dd_rank(suit_or_color: int, rank: int) -> int:
    """Map a french_joker card to its dou dizhu rank index."""
    if suit_or_color == 4:
        return 13 + rank
    return 12 if rank == 0 else rank - 1


@dataclass(frozen=True, slots=True)
class CardPattern:
    category: str
    primal: int = 0
    length: int = 1
    kickers: tuple[int, ...] = field(default=())

    def rank_multiset(self) -> tuple[int, ...]:
        """Every card of the move as a sorted rank tuple."""
        if self.category == "pass":
            return ()
        if self.category == "rocket":
            return (13, 14)
        per = _CARDS_PER_RANK[self.category]
        body = []
        for r in range(self.primal, self.primal + self.length):
            body += [r] * per
        return tuple(sorted(body + list(self.kickers)))

    def size(self) -> int:
        return len(self.rank_multiset())

    def literal(self) -> str:
        """Log form: concatenated rank characters ("333A"), or "pass"."""
        if self.category == "pass":
            return "pass"
        return "".join(DD_RANK_NAMES[r] for r in self.rank_multiset())


PASS = CardPattern("pass", 0, 0)
ROCKET = CardPattern("rocket", 13)


def beats(a: CardPattern, b: CardPattern) -> bool:
    """Does non-pass move a beat non-pass move b?"""
    if a.category == "rocket":
        return True
    if b.category == "rocket":
        return False
    if a.category == "bomb":
        return b.category != "bomb" or a.primal > b.primal
    if b.category == "bomb":
        return False
    return a.category == b.category and a.length == b.length and a.primal > b.primal


def _build_table() -> tuple[tuple[str, int, int], ...]:
    entries: list[tuple[str, int, int]] = [("pass", 0, 0)]
    entries += [("solo", r, 1) for r in range(15)]
    for cat in ("pair", "trio", "trio_single", "trio_pair"):
        entries += [(cat, r, 1) for r in range(13)]
    spans = (
        ("solo_chain", 5, 12),
        ("pair_chain", 3, 10),
        ("plane", 2, 6),
        ("plane_solo", 2, 5),
        ("plane_pair", 2, 4),
    )
    for cat, lo, hi in spans:
        entries += [(cat, s, n) for n in range(lo, hi + 1) for s in range(CHAIN_TOP - n + 2)]
    for cat in ("quad_two_solo", "quad_two_pair", "bomb"):
        entries += [(cat, r, 1) for r in range(13)]
    entries.append(("rocket", 13, 1))
    return tuple(entries)


ABSTRACT_ACTIONS = _build_table()
ACTION_INDEX = {triple: i for i, triple in enumerate(ABSTRACT_ACTIONS)}
NUM_ACTIONS = len(ABSTRACT_ACTIONS)
assert NUM_ACTIONS == 309, f"abstract action table has {NUM_ACTIONS} entries"
assert len(ACTION_INDEX) == 309, "abstract action triples must be unique"


def abstract_id(pattern: CardPattern) -> int:
    """Abstract action id of a concrete pattern (kickers dropped)."""
    if pattern.category == "pass":
        return PASS_ID
    return ACTION_INDEX[(pattern.category, pattern.primal, pattern.length)]


def _chain_runs(cnt, need: int) -> list[int]:
    """run[s] = consecutive ranks from s (chain ranks only) holding at least `need` cards."""
    run = [0] * (CHAIN_TOP + 2)
    for s in range(CHAIN_TOP, -1, -1):
        run[s] = run[s + 1] + 1 if cnt[s] >= need else 0
    return run


def _kicker_ranks(cnt, primal_lo: int, primal_hi: int, need: int, pair_kicker: bool) -> list[int]:
    """Ranks eligible as kickers, ascending. The primal span is excluded."""
    top = 13 if pair_kicker else 15
    return [k for k in range(top) if cnt[k] >= need and not primal_lo <= k < primal_hi]


def matching_abstract_ids(cnt, to_beat: CardPattern | None) -> list[int]:
    """Sorted abstract ids playable from a count vector against to_beat (None = leading)."""
    out: list[int] = []
    lead = to_beat is None
    if not lead:
        if to_beat.category == "pass":
            raise ValueError("to_beat cannot be a pass")
        out.append(PASS_ID)

    # rocket and bombs answer anything except the rocket or a bigger bomb
    if lead or to_beat.category != "rocket":
        if cnt[13] and cnt[14]:
            out.append(ACTION_INDEX[("rocket", 13, 1)])
        bomb_floor = to_beat.primal if not lead and to_beat.category == "bomb" else -1
        for r in range(13):
            if cnt[r] == 4 and r > bomb_floor:
                out.append(ACTION_INDEX[("bomb", r, 1)])
    if not lead and to_beat.category in ("bomb", "rocket"):
        return sorted(set(out))

    def want(cat: str) -> bool:
        return lead or to_beat.category == cat

    def floor_of(cat: str) -> int:
        return to_beat.primal if not lead and to_beat.category == cat else -1

    if want("solo"):
        out += [ACTION_INDEX[("solo", r, 1)] for r in range(floor_of("solo") + 1, 15) if cnt[r] >= 1]
    if want("pair"):
        out += [ACTION_INDEX[("pair", r, 1)] for r in range(floor_of("pair") + 1, 13) if cnt[r] >= 2]
    if want("trio"):
        out += [ACTION_INDEX[("trio", r, 1)] for r in range(floor_of("trio") + 1, 13) if cnt[r] >= 3]
    for cat, need in (("trio_single", 1), ("trio_pair", 2)):
        if want(cat):
            for r in range(floor_of(cat) + 1, 13):
                if cnt[r] >= 3 and _kicker_ranks(cnt, r, r + 1, need, cat == "trio_pair"):
                    out.append(ACTION_INDEX[(cat, r, 1)])

    chain_specs = (
        ("solo_chain", 1, 0, 5, 12),
        ("pair_chain", 2, 0, 3, 10),
        ("plane", 3, 0, 2, 6),
        ("plane_solo", 3, 1, 2, 5),
        ("plane_pair", 3, 2, 2, 4),
    )
    for cat, per_rank, kick_need, lo_len, hi_len in chain_specs:
        if not want(cat):
            continue
        run = _chain_runs(cnt, per_rank)
        lens = range(lo_len, hi_len + 1) if lead else (to_beat.length,)
        for n in lens:
            for s in range(floor_of(cat) + 1, CHAIN_TOP - n + 2):
                if run[s] < n:
                    continue
                if kick_need and len(_kicker_ranks(cnt, s, s + n, kick_need, kick_need == 2)) < n:
                    continue
                out.append(ACTION_INDEX[(cat, s, n)])

    for cat, need in (("quad_two_solo", 1), ("quad_two_pair", 2)):
        if want(cat):
            for r in range(floor_of(cat) + 1, 13):
                if cnt[r] == 4 and len(_kicker_ranks(cnt, r, r + 1, need, cat == "quad_two_pair")) >= 2:
                    out.append(ACTION_INDEX[(cat, r, 1)])

    return sorted(set(out))


def legal_patterns(cnt, to_beat: CardPattern | None) -> list[CardPattern]:
    """Every concrete pattern playable from a count vector, kickers enumerated."""
    out: list[CardPattern] = []
    for aid in matching_abstract_ids(cnt, to_beat):
        cat, primal, length = ABSTRACT_ACTIONS[aid]
        if cat == "pass":
            out.append(PASS)
        elif cat in ("trio_single", "trio_pair"):
            need = 1 if cat == "trio_single" else 2
            for k in _kicker_ranks(cnt, primal, primal + 1, need, cat == "trio_pair"):
                out.append(CardPattern(cat, primal, 1, (k,) * need))
        elif cat in ("plane_solo", "plane_pair", "quad_two_solo", "quad_two_pair"):
            pair_kicker = cat.endswith("pair")
            need = 2 if pair_kicker else 1
            span = length if cat.startswith("plane") else 1
            n_kick = length if cat.startswith("plane") else 2
            pool = _kicker_ranks(cnt, primal, primal + span, need, pair_kicker)
            for combo in combinations(pool, n_kick):
                kick = tuple(sorted(k for k in combo for _ in range(need)))
                out.append(CardPattern(cat, primal, length, kick))
        else:
            out.append(CardPattern(cat, primal, length))
    return out


def decode(action_id: int, cnt, to_beat: CardPattern | None) -> CardPattern:
    """Concrete pattern for an abstract id, kickers completed by the documented rule."""
    if not 0 <= action_id < NUM_ACTIONS:
        raise NoConcreteMove(f"action id {action_id} out of range")
    cat, primal, length = ABSTRACT_ACTIONS[action_id]
    if cat == "pass":
        if to_beat is None:
            raise NoConcreteMove("cannot pass while leading")
        return PASS
    if cat not in ("trio_single", "trio_pair", "plane_solo", "plane_pair", "quad_two_solo", "quad_two_pair"):
        pattern = CardPattern(cat, primal, length)
        _require_playable(pattern, cnt, to_beat)
        return pattern

    pair_kicker = cat.endswith("pair")
    need = 2 if pair_kicker else 1
    span = length if cat.startswith("plane") else 1
    n_kick = {"trio_single": 1, "trio_pair": 1, "quad_two_solo": 2, "quad_two_pair": 2}.get(cat, length)
    pool = _kicker_ranks(cnt, primal, primal + span, need, pair_kicker)
    has_rocket = cnt[13] >= 1 and cnt[14] >= 1

    def breaks_protected(k: int) -> bool:
        return cnt[k] == 4 or (k >= 13 and has_rocket)

    safe = [k for k in pool if not breaks_protected(k)]
    risky = [k for k in pool if breaks_protected(k)]
    chosen = safe[:n_kick] + risky[: max(0, n_kick - len(safe))]
    if len(chosen) < n_kick:
        raise NoConcreteMove(f"no kicker completion for action {action_id}")
    kick = tuple(sorted(k for k in chosen for _ in range(need)))
    pattern = CardPattern(cat, primal, length, kick)
    _require_playable(pattern, cnt, to_beat)
    return pattern


def _require_playable(pattern: CardPattern, cnt, to_beat: CardPattern | None) -> None:
    needed = pattern.rank_multiset()
    for r in set(needed):
        if cnt[r] < needed.count(r):
            raise NoConcreteMove(f"hand lacks cards for {pattern.category} at rank {pattern.primal}")
    if to_beat is not None and not beats(pattern, to_beat):
        raise NoConcreteMove(f"{pattern.category} at rank {pattern.primal} does not beat the trick")


def parse(ranks) -> CardPattern | None:
    """Classify a rank multiset as one move, None if it is not a pattern."""
    n = len(ranks)
    if n == 0:
        return PASS
    cnt = [0] * NUM_RANKS
    for r in ranks:
        cnt[r] += 1
    if cnt[13] > 1 or cnt[14] > 1:
        return None
    if n == 2 and cnt[13] == 1 and cnt[14] == 1:
        return ROCKET

    quads = [r for r in range(13) if cnt[r] == 4]
    trios = [r for r in range(13) if cnt[r] == 3]
    pairs = [r for r in range(13) if cnt[r] == 2]
    singles = [r for r in range(NUM_RANKS) if cnt[r] == 1]

    def consecutive(rs: list[int]) -> bool:
        return bool(rs) and rs[-1] <= CHAIN_TOP and rs[-1] - rs[0] + 1 == len(rs)

    if n == 1:
        return CardPattern("solo", ranks[0])
    if n == 2:
        return CardPattern("pair", pairs[0]) if pairs else None
    if n == 3:
        return CardPattern("trio", trios[0]) if trios else None
    if n == 4:
        if quads:
            return CardPattern("bomb", quads[0])
        if trios and len(singles) == 1:
            return CardPattern("trio_single", trios[0], 1, (singles[0],))
        return None
    if quads:
        if len(quads) == 1 and not trios:
            q = quads[0]
            if n == 6 and len(singles) == 2:
                return CardPattern("quad_two_solo", q, 1, tuple(singles))
            if n == 8 and len(pairs) == 2:
                return CardPattern("quad_two_pair", q, 1, (pairs[0], pairs[0], pairs[1], pairs[1]))
        return None
    if trios:
        if n == 5 and len(trios) == 1 and len(pairs) == 1:
            return CardPattern("trio_pair", trios[0], 1, (pairs[0],) * 2)
        span = len(trios)
        if not consecutive(trios):
            return None
        if n == 3 * span and 2 <= span <= 6:
            return CardPattern("plane", trios[0], span)
        if n == 4 * span and 2 <= span <= 5 and len(singles) == span:
            return CardPattern("plane_solo", trios[0], span, tuple(singles))
        if n == 5 * span and 2 <= span <= 4 and len(pairs) == span:
            kick = tuple(sorted(p for p in pairs for _ in range(2)))
            return CardPattern("plane_pair", trios[0], span, kick)
        return None
    if len(singles) == n and consecutive(singles) and n >= 5:
        return CardPattern("solo_chain", singles[0], n)
    if 2 * len(pairs) == n and consecutive(pairs) and len(pairs) >= 3:
        return CardPattern("pair_chain", pairs[0], len(pairs))
    return None
