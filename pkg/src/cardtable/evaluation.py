"""Tournaments, exact best response and exploitability, info-set census.

Tournament blocks rotate the agents through the seats and replay the
same per-game deal seeds in every block, so role asymmetry (dealer
position, the landlord seat) cancels out of per-agent aggregates and
the whole run is reproducible from one master seed.

Best response comes in two independently written forms. The generic
one groups tree nodes by information key and maximizes reach-weighted
action values recursively; the leduc-specific one never touches the
tree module and instead pushes explicit hidden-state weight vectors
(opponent card, board card) down the public betting sequence. The test
suite requires them to agree to 1e-9, which guards both the tree
construction and the recursion logic.
"""

from __future__ import annotations

from dataclasses import dataclass

from cardtable.agents.policy import PolicyTable
from cardtable.env import REGISTRY, Env, EnvConfig, make
from cardtable.errors import GameTooLarge, InvalidParam, NotZeroSum, SeatMismatch
from cardtable.trees import LeducTree, blackjack_census, count_nodes, tree_for

# ---------------------------------------------------------------------------
# tournaments


@dataclass(frozen=True)
class SeatBlock:
    """One rotation block: agents[assignment[s]] sat in seat s."""

    assignment: tuple[int, ...]
    games: int
    seat_means: tuple[float, ...]
    seat_variances: tuple[float, ...]


@dataclass(frozen=True)
class TournamentResult:
    """Per-seat and per-agent payoff statistics for one tournament.

    CSV column order (one row per block and seat): block, seat, agent,
    games, mean_payoff, payoff_variance; aggregate per-agent rows use
    block "all" and seat "*". Variances are population variances.
    """

    game_id: str
    game_count: int
    scheme: str
    blocks: tuple[SeatBlock, ...]
    agent_means: tuple[float, ...]
    agent_variances: tuple[float, ...]

    def csv_table(self) -> str:
        lines = ["block,seat,agent,games,mean_payoff,payoff_variance"]
        for b, block in enumerate(self.blocks):
            for s in range(len(block.assignment)):
                lines.append(
                    f"{b},{s},{block.assignment[s]},{block.games},"
                    f"{block.seat_means[s]:.6f},{block.seat_variances[s]:.6f}"
                )
        for a, (mean, var) in enumerate(zip(self.agent_means, self.agent_variances)):
            lines.append(f"all,*,{a},{self.game_count},{mean:.6f},{var:.6f}")
        return "\n".join(lines)

    def summary_dict(self) -> dict:
        return {
            "game_id": self.game_id,
            "game_count": self.game_count,
            "scheme": self.scheme,
            "agent_means": list(self.agent_means),
            "agent_variances": list(self.agent_variances),
            "blocks": [
                {
                    "assignment": list(b.assignment),
                    "games": b.games,
                    "seat_means": list(b.seat_means),
                    "seat_variances": list(b.seat_variances),
                }
                for b in self.blocks
            ],
        }


def _mean_var(values) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, var


def tournament(config: EnvConfig, agents, n_games: int, rotate: bool = True) -> TournamentResult:
    """Play n_games between the agents under per-game derived seeds.

    With rotate=True the games are split into num_seats blocks; block b
    seats agents[(s - b) % k] at seat s, and every block replays the
    same deal seeds, so each agent faces the identical deal schedule
    from every seat. n_games rounds down to a multiple of the block
    count. rotate=False plays a single fixed-seat block.
    """
    agents = list(agents)
    seats = config.resolved_players()
    if len(agents) != seats:
        raise SeatMismatch(f"{config.game_id} seats {seats} players, got {len(agents)} agents")
    rotations = seats if rotate else 1
    per_block = n_games // rotations
    if per_block < 1:
        raise InvalidParam(f"n_games={n_games} is fewer than the {rotations} rotation blocks")
    blocks = []
    agent_payoffs: list[list[float]] = [[] for _ in agents]
    for b in range(rotations):
        assignment = tuple((s - b) % seats for s in range(seats))
        env = make(config)
        env.set_agents([agents[assignment[s]] for s in range(seats)])
        seat_payoffs: list[list[float]] = [[] for _ in range(seats)]
        for _ in range(per_block):
            _, payoffs = env.run()
            for s, p in enumerate(payoffs):
                seat_payoffs[s].append(p)
                agent_payoffs[assignment[s]].append(p)
        stats = [_mean_var(seat_payoffs[s]) for s in range(seats)]
        blocks.append(
            SeatBlock(
                assignment=assignment,
                games=per_block,
                seat_means=tuple(m for m, _ in stats),
                seat_variances=tuple(v for _, v in stats),
            )
        )
    agg = [_mean_var(p) for p in agent_payoffs]
    scheme = f"{'rotated' if rotate else 'fixed'}:{rotations}x{per_block}"
    return TournamentResult(
        game_id=config.game_id,
        game_count=per_block * rotations,
        scheme=scheme,
        blocks=tuple(blocks),
        agent_means=tuple(m for m, _ in agg),
        agent_variances=tuple(v for _, v in agg),
    )


def winrate_vs_random(agent, config: EnvConfig, n_games: int) -> float:
    """Mean payoff of the agent in seat 0 with random agents elsewhere.

    Seat 0 is the landlord seat under the default doudizhu config. For
    the betting games the payoff is big blinds (leduc: antes) per hand;
    for the win/loss games it is the win rate.
    """
    from cardtable.agents.base import RandomAgent

    seats = config.resolved_players()
    lineup = [agent] + [RandomAgent() for _ in range(seats - 1)]
    result = tournament(config, lineup, n_games, rotate=False)
    return result.blocks[0].seat_means[0]


# ---------------------------------------------------------------------------
# best response and exploitability


def tree_policy_value(game, tables) -> tuple[float, ...]:
    """Exact expected payoffs when every seat plays its PolicyTable.

    tables is one table shared by all seats or a sequence per seat;
    unseen keys fall back to uniform, matching PolicyAgent.
    """
    tree = tree_for(game)
    if isinstance(tables, PolicyTable):
        tables = [tables] * tree.num_players

    def walk(node):
        if tree.is_terminal(node):
            return tree.payoffs(node)
        if tree.is_chance(node):
            total = None
            for child, prob in tree.chance_outcomes(node):
                vals = walk(child)
                if total is None:
                    total = [prob * v for v in vals]
                else:
                    for i, v in enumerate(vals):
                        total[i] += prob * v
            return tuple(total)
        seat = tree.player(node)
        actions = tree.actions(node)
        ids, probs = tables[seat].probs_for(tree.info_key(node), actions)
        by_id = dict(zip(ids, probs))
        total = None
        for action in actions:
            prob = by_id.get(action, 0.0)
            if prob == 0.0:
                continue
            vals = walk(tree.child(node, action))
            if total is None:
                total = [prob * v for v in vals]
            else:
                for i, v in enumerate(vals):
                    total[i] += prob * v
        if total is None:
            total = [0.0] * tree.num_players
        return tuple(total)

    return walk(tree.root())


def best_response(game, policy: PolicyTable, player: int, node_limit: int = 10_000_000):
    """Exact best response for one player against a fixed policy.

    Returns (br_policy, br_value). Pass 1 collects every node of the
    responding player grouped by information key together with its
    chance-and-opponent reach probability; pass 2 picks, per key, the
    action maximizing the reach-weighted value sum, evaluating nodes
    lazily so the choice at a key and the values below it stay
    consistent. Ties break to the earliest legal action.
    """
    tree = tree_for(game)
    count_nodes(tree, node_limit)
    infosets: dict[str, list] = {}
    actions_at: dict[str, tuple] = {}

    def collect(node, reach: float) -> None:
        if tree.is_terminal(node):
            return
        if tree.is_chance(node):
            for child, prob in tree.chance_outcomes(node):
                collect(child, reach * prob)
            return
        actions = tree.actions(node)
        if tree.player(node) == player:
            key = tree.info_key(node)
            infosets.setdefault(key, []).append((node, reach))
            actions_at.setdefault(key, tuple(actions))
            for action in actions:
                collect(tree.child(node, action), reach)
        else:
            ids, probs = policy.probs_for(tree.info_key(node), actions)
            by_id = dict(zip(ids, probs))
            for action in actions:
                collect(tree.child(node, action), reach * by_id.get(action, 0.0))

    collect(tree.root(), 1.0)

    value_cache: dict = {}
    chosen: dict[str, int] = {}

    def value(node) -> float:
        hit = value_cache.get(node)
        if hit is not None:
            return hit
        if tree.is_terminal(node):
            v = tree.payoffs(node)[player]
        elif tree.is_chance(node):
            v = sum(prob * value(child) for child, prob in tree.chance_outcomes(node))
        elif tree.player(node) == player:
            v = value(tree.child(node, best_action(tree.info_key(node))))
        else:
            actions = tree.actions(node)
            ids, probs = policy.probs_for(tree.info_key(node), actions)
            by_id = dict(zip(ids, probs))
            v = sum(
                by_id.get(action, 0.0) * value(tree.child(node, action))
                for action in actions
                if by_id.get(action, 0.0)
            )
        value_cache[node] = v
        return v

    def best_action(key: str) -> int:
        hit = chosen.get(key)
        if hit is not None:
            return hit
        best = None
        best_score = None
        for action in actions_at[key]:
            score = sum(reach * value(tree.child(node, action)) for node, reach in infosets[key])
            if best_score is None or score > best_score:
                best, best_score = action, score
        chosen[key] = best
        return best

    br_policy = PolicyTable()
    for key in infosets:
        actions = actions_at[key]
        pick = best_action(key)
        br_policy.set(key, actions, [1.0 if a == pick else 0.0 for a in actions])
    return br_policy, value(tree.root())


# independent leduc route: explicit hidden-state weights on the public tree

_LEDUC_MOVE_CHAR = {0: "c", 1: "r", 2: "f", 3: "k"}
_LEDUC_RAISE = (2, 4)
_LEDUC_RANK_NAMES = ("J", "Q", "K")


def _leduc_winner(a: int, b: int, board: int) -> int:
    if a == board and b != board:
        return 0
    if b == board and a != board:
        return 1
    if a > b:
        return 0
    if b > a:
        return 1
    return -1


def _leduc_key(seat: int, rank: int, board, history: str) -> str:
    pub = "-" if board is None else _LEDUC_RANK_NAMES[board]
    return f"L{seat}|{_LEDUC_RANK_NAMES[rank]}|{pub}|{history}"


def leduc_best_response_value(policy: PolicyTable, br_seat: int) -> float:
    """Best-response value for one leduc seat by full deal expansion.

    Written from the betting rules directly (ante 1, raises 2 then 4,
    two raises per round): a weight vector over (seat-0 card, seat-1
    card) pairs flows down every betting line, opponent weights shrink
    by the policy's action probabilities, and at each decision of the
    responding seat the vector splits by the seat's own card so the
    maximization happens exactly once per information set.
    """
    opp = 1 - br_seat

    def legal(facing: bool, raises: int) -> list[int]:
        moves = [0] if facing else [3]
        if raises < 2:
            moves.append(1)
        moves.append(2)
        return sorted(moves)

    def terminal_value(weights, contrib, winner_of) -> float:
        total = 0.0
        for (a, b), mass in weights.items():
            w = winner_of(a, b)
            if w == -1:
                continue
            total += mass * (contrib[opp] if w == br_seat else -contrib[br_seat])
        return total

    def walk(weights, board, history, rnd, bets, contrib, to_act, raises, acted) -> float:
        if not weights:
            return 0.0
        facing = bets[to_act] < bets[1 - to_act]
        moves = legal(facing, raises)
        if to_act == br_seat:
            groups: dict[int, dict] = {}
            for (a, b), mass in weights.items():
                groups.setdefault(a if br_seat == 0 else b, {})[(a, b)] = mass
            return sum(
                max(
                    apply(move, part, board, history, rnd, bets, contrib, to_act, raises, acted)
                    for move in moves
                )
                for part in groups.values()
            )
        total = 0.0
        probs_by_rank = {}
        for rank in range(3):
            ids, probs = policy.probs_for(_leduc_key(opp, rank, board, history), moves)
            probs_by_rank[rank] = dict(zip(ids, probs))
        for move in moves:
            shrunk = {}
            for (a, b), mass in weights.items():
                prob = probs_by_rank[a if opp == 0 else b].get(move, 0.0)
                if prob:
                    shrunk[(a, b)] = mass * prob
            total += apply(move, shrunk, board, history, rnd, bets, contrib, to_act, raises, acted)
        return total

    def apply(move, weights, board, history, rnd, bets, contrib, seat, raises, acted) -> float:
        if not weights:
            return 0.0
        history += _LEDUC_MOVE_CHAR[move]
        other = 1 - seat
        if move == 2:  # fold: the other seat nets the folder's chips
            return terminal_value(weights, contrib, lambda a, b: other)
        if move == 1:  # raise
            put = (bets[other] - bets[seat]) + _LEDUC_RAISE[rnd]
            bets = _pair_add(bets, seat, put)
            contrib = _pair_add(contrib, seat, put)
            return walk(weights, board, history, rnd, bets, contrib, other, raises + 1, acted + 1)
        if move == 0:  # call
            owe = bets[other] - bets[seat]
            bets = _pair_add(bets, seat, owe)
            contrib = _pair_add(contrib, seat, owe)
            closed = True
        else:  # check
            closed = acted >= 1
        if not closed:
            return walk(weights, board, history, rnd, bets, contrib, other, raises, acted + 1)
        if rnd == 0:
            history += "/"
            total = 0.0
            for c in range(3):
                dealt = {}
                for (a, b), mass in weights.items():
                    remaining = 2 - (a == c) - (b == c)
                    if remaining:
                        dealt[(a, b)] = mass * (remaining / 4)
                total += walk(dealt, c, history, 1, (0, 0), contrib, 0, 0, 0)
            return total
        return terminal_value(weights, contrib, lambda a, b: _leduc_winner(a, b, board))

    weights0 = {(a, b): (2 if a == b else 4) / 30 for a in range(3) for b in range(3)}
    return walk(weights0, None, "", 0, (0, 0), (1, 1), 0, 0, 0)


def _pair_add(pair, seat, amount):
    out = list(pair)
    out[seat] += amount
    return tuple(out)


@dataclass(frozen=True)
class ExploitabilityReport:
    game_id: str
    br_values: tuple[float, float]
    exploitability: float
    units: str


_ZERO_SUM_2P = ("leduc", "limit_holdem")


def exploitability(game_id: str, policy: PolicyTable) -> ExploitabilityReport:
    """Mean best-response value against the policy from both seats.

    Zero at an exact equilibrium, positive elsewhere (within 1e-9);
    units are big blinds per hand (one leduc ante = one blind). Only
    two-player zero-sum games qualify, and of those only leduc fits
    under the enumeration guard.
    """
    if game_id not in _ZERO_SUM_2P:
        raise NotZeroSum(f"{game_id} is not a two-player zero-sum game")
    tree = tree_for(game_id)  # limit_holdem raises GameTooLarge here
    _, br0 = best_response(tree, policy, 0)
    _, br1 = best_response(tree, policy, 1)
    return ExploitabilityReport(
        game_id=game_id,
        br_values=(br0, br1),
        exploitability=(br0 + br1) / 2,
        units="bb/hand",
    )


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class Census:
    """Exact info-set counts from enumeration (never estimates).

    States that differ only by suit are pooled, matching the engines'
    rank-level information keys.
    """

    game_id: str
    num_players: int
    info_sets_per_player: tuple[int, ...]
    avg_states_per_info_set: float
    action_space_size: int


def count_info_sets(game_id: str) -> Census:
    """Census by exhaustive walk; games past the node guard raise."""
    if game_id not in REGISTRY:
        raise InvalidParam(f"unknown game {game_id!r}")
    spec = REGISTRY[game_id]
    if game_id == "blackjack":
        keys, states = blackjack_census()
        return Census(
            game_id=game_id,
            num_players=1,
            info_sets_per_player=(keys,),
            avg_states_per_info_set=states / keys,
            action_space_size=spec.num_actions,
        )
    if game_id == "leduc":
        tree = LeducTree()
        keys: list[set] = [set(), set()]
        nodes = 0
        stack = [tree.root()]
        while stack:
            node = stack.pop()
            if tree.is_terminal(node):
                continue
            if tree.is_chance(node):
                stack.extend(child for child, _ in tree.chance_outcomes(node))
                continue
            nodes += 1
            keys[tree.player(node)].add(tree.info_key(node))
            stack.extend(tree.child(node, a) for a in tree.actions(node))
        total_keys = len(keys[0]) + len(keys[1])
        return Census(
            game_id=game_id,
            num_players=2,
            info_sets_per_player=(len(keys[0]), len(keys[1])),
            avg_states_per_info_set=nodes / total_keys,
            action_space_size=spec.num_actions,
        )
    raise GameTooLarge(f"{game_id} info sets are not enumerable under the 10^7-node guard")
