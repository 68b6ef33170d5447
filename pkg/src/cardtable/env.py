"""Uniform environment wrapper over the card game engines.

An Env is built from an EnvConfig by make() and exposes three modes:

* run(training): play one full game with the registered agents and
  return per-player trajectories plus payoffs. Transitions carry a
  delayed next state: a player's next_state is their observation at
  their own next decision point (or the terminal view), rewards are
  zero until done.
* new_game()/step()/step_back(): manual tree traversal for solvers.
  step returns the new current player's observation; step_back undoes
  one step including every chance event (enable it with the
  allow_step_back config flag).
* make_single_agent(): gym-style reset()/sa_step() where one learner
  seat acts and every other seat is auto-played by a fixed agent.

Reproducibility contract: game number i of an Env seeded with S is
played from the derived seed split_seed(S, i). The deal uses stream 0
of that game seed and the agent at seat s uses stream 1+s, so results
never depend on how games are batched across processes or which agent
implementation sits at another table.

The observation hook (extract_state) and the action decoding hook
(decode_action) are instance attributes and can be replaced; a
replacement may change raw views and planes but must keep the engine's
legal action ids.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

from cardtable.core.rng import Rng, split_seed
from cardtable.errors import (
    AgentsNotSet,
    GameNotOver,
    GameOver,
    IllegalAction,
    InvalidParam,
    NotSingleAgentMode,
    UnknownGame,
)
from cardtable.games import blackjack, doudizhu, leduc, limit_holdem, uno

GAME_IDS = ("blackjack", "leduc", "limit_holdem", "uno", "doudizhu", "mini_doudizhu")


@dataclass(frozen=True)
class GameSpec:
    """Registry row tying a game id to its engine and encoders."""

    factory: Callable
    module: object
    num_actions: int
    default_players: int
    player_range: tuple[int, int]
    params: tuple[str, ...]
    plane_shape: tuple[int, ...]


def _build_registry() -> dict[str, GameSpec]:
    return {
        "blackjack": GameSpec(
            lambda rng, back, n, p: blackjack.BlackjackGame(rng, back),
            blackjack, blackjack.NUM_ACTIONS, 1, (1, 1), (), (2,),
        ),
        "leduc": GameSpec(
            lambda rng, back, n, p: leduc.LeducGame(rng, back),
            leduc, leduc.NUM_ACTIONS, 2, (2, 2), (), (14,),
        ),
        "limit_holdem": GameSpec(
            lambda rng, back, n, p: limit_holdem.LimitHoldemGame(rng, back, num_players=n, **p),
            limit_holdem, limit_holdem.NUM_ACTIONS, 2, (2, 10), ("fixed_raise",), (107,),
        ),
        "uno": GameSpec(
            lambda rng, back, n, p: uno.UnoGame(rng, back, num_players=n, **p),
            uno, uno.NUM_ACTIONS, 2, (2, 4), ("hand_size",), (4, 54),
        ),
        "doudizhu": GameSpec(
            lambda rng, back, n, p: doudizhu.DoudizhuGame(rng, back, variant="full", **p),
            doudizhu, doudizhu.NUM_ACTIONS, 3, (3, 3), ("landlord",), (6, 5, 15),
        ),
        "mini_doudizhu": GameSpec(
            lambda rng, back, n, p: doudizhu.DoudizhuGame(rng, back, variant="mini", **p),
            doudizhu, doudizhu.NUM_ACTIONS, 3, (3, 3), ("landlord",), (6, 5, 15),
        ),
    }


REGISTRY = _build_registry()


@dataclass(frozen=True)
class EnvConfig:
    game_id: str
    seed: int = 0
    num_players: int | None = None
    game_params: dict = field(default_factory=dict)
    allow_step_back: bool = False

    def resolved_players(self) -> int:
        spec = REGISTRY[self.game_id]
        return spec.default_players if self.num_players is None else self.num_players


class Observation:
    """One player's view of a state: raw dict, lazy planes, legal ids.

    Equality ignores the planes tensor (it is derived from raw and may
    be re-encoded by a replaced hook).
    """

    __slots__ = ("player_id", "legal_action_ids", "raw", "info_key", "_planes_fn", "_planes")

    def __init__(self, player_id, legal_action_ids, raw, info_key, planes_fn):
        self.player_id = player_id
        self.legal_action_ids = tuple(legal_action_ids)
        self.raw = raw
        self.info_key = info_key
        self._planes_fn = planes_fn
        self._planes = None

    @property
    def planes(self):
        if self._planes is None:
            self._planes = self._planes_fn(self.raw)
        return self._planes

    @property
    def is_terminal(self) -> bool:
        return not self.legal_action_ids

    def __eq__(self, other):
        if not isinstance(other, Observation):
            return NotImplemented
        return (
            self.player_id == other.player_id
            and self.legal_action_ids == other.legal_action_ids
            and self.raw == other.raw
            and self.info_key == other.info_key
        )

    def __hash__(self):
        return hash((self.player_id, self.legal_action_ids, self.info_key))

    def __repr__(self):
        return f"Observation(player={self.player_id}, key={self.info_key!r}, legal={self.legal_action_ids})"


@dataclass(frozen=True)
class Transition:
    state: Observation
    action: int
    reward: float
    next_state: Observation
    done: bool


@dataclass(frozen=True)
class Trajectory:
    player_id: int
    transitions: tuple[Transition, ...]


class Env:
    """One card game behind the uniform run/step/step_back interface."""

    def __init__(self, config: EnvConfig):
        if config.game_id not in REGISTRY:
            raise UnknownGame(f"no game called {config.game_id!r}; choose from {', '.join(GAME_IDS)}")
        spec = REGISTRY[config.game_id]
        lo, hi = spec.player_range
        n = config.resolved_players()
        if not lo <= n <= hi:
            raise InvalidParam(f"{config.game_id} supports {lo}..{hi} players, got {n}")
        for key in config.game_params:
            if key not in spec.params:
                allowed = ", ".join(spec.params) if spec.params else "none"
                raise InvalidParam(f"{config.game_id} has no parameter {key!r} (allowed: {allowed})")
        self.config = config
        self.spec = spec
        self.game_id = config.game_id
        self.num_players = n
        self.num_actions = spec.num_actions
        self.game = spec.factory(Rng(config.seed), config.allow_step_back, n, dict(config.game_params))
        self.game_index = -1  # becomes 0 on the first game
        self.timesteps = 0  # decisions taken across all games
        self._agents = None
        self._agent_rngs = None
        # customization hooks; replacements may change raw/planes but
        # must preserve the engine's legal action ids
        self.extract_state = self._default_extract_state
        self.decode_action = self._default_decode_action
        # single-agent mode plumbing
        self._sa_learner: int | None = None
        self._sa_opponents = None

    # hooks ----------------------------------------------------------

    def _default_extract_state(self, seat: int, terminal: bool = False) -> Observation:
        raw, legal, key = self.spec.module.observe(self.game, seat, terminal)
        return Observation(seat, legal, raw, key, self.spec.module.encode_planes)

    def _default_decode_action(self, action_id: int):
        return self.spec.module.decode_action(self.game, action_id)

    # shared plumbing --------------------------------------------------

    def _begin_game(self) -> int:
        """Advance to the next game in the seed sequence; returns first seat."""
        self.game_index += 1
        game_seed = split_seed(self.config.seed, self.game_index)
        self.game.rng = Rng(split_seed(game_seed, 0))
        self._agent_rngs = [Rng(split_seed(game_seed, 1 + s)) for s in range(self.num_players)]
        return self.game.reset()

    def seek(self, game_index: int) -> None:
        """Make the next game played use the given index's seed fan-out.

        Lets workers split a game range without replaying the prefix:
        seek(i) then run() plays exactly the game a fresh env would play
        i games in.
        """
        if game_index < 0:
            raise InvalidParam(f"game index must be >= 0, got {game_index}")
        self.game_index = game_index - 1

    def _require_legal(self, action_id: int) -> None:
        legal = self.spec.module.legal_action_ids(self.game)
        if action_id not in legal:
            raise IllegalAction(f"action {action_id} not in legal set {tuple(legal)}")

    # run mode ---------------------------------------------------------

    def set_agents(self, agents) -> None:
        agents = list(agents)
        if len(agents) != self.num_players:
            raise AgentsNotSet(f"need {self.num_players} agents, got {len(agents)}")
        self._agents = agents

    def run(self, training: bool = False):
        """Play one complete game; returns (trajectories, payoffs)."""
        if self._agents is None:
            raise AgentsNotSet("call set_agents() before run()")
        seat = self._begin_game()
        pending: list[tuple | None] = [None] * self.num_players
        transitions: list[list[Transition]] = [[] for _ in range(self.num_players)]
        while not self.game.is_over():
            obs = self.extract_state(seat)
            if pending[seat] is not None:
                prev_obs, prev_action = pending[seat]
                transitions[seat].append(Transition(prev_obs, prev_action, 0.0, obs, False))
            agent = self._agents[seat]
            rng = self._agent_rngs[seat]
            action = agent.sample_step(obs, rng) if training else agent.eval_step(obs, rng)
            if action not in obs.legal_action_ids:
                raise IllegalAction(f"agent at seat {seat} chose {action}, legal {obs.legal_action_ids}")
            pending[seat] = (obs, action)
            nxt = self.game.step(action)
            self.timesteps += 1
            if nxt is None:
                break
            seat = nxt
        payoffs = self.game.payoffs()
        for s in range(self.num_players):
            if pending[s] is not None:
                prev_obs, prev_action = pending[s]
                terminal_obs = self.extract_state(s, terminal=True)
                transitions[s].append(Transition(prev_obs, prev_action, float(payoffs[s]), terminal_obs, True))
        trajectories = [Trajectory(s, tuple(transitions[s])) for s in range(self.num_players)]
        return trajectories, [float(p) for p in payoffs]

    # tree mode ----------------------------------------------------------

    def new_game(self):
        """Start the next seeded game; returns (obs, current_player)."""
        seat = self._begin_game()
        return self.extract_state(seat), seat

    def step(self, action_id: int):
        """Apply one action; returns (obs of new current player, seat)."""
        if self.game.is_over():
            raise GameOver("game already over; call new_game()")
        self._require_legal(action_id)
        nxt = self.game.step(action_id)
        self.timesteps += 1
        if nxt is None:
            seat = self.game.current_player()
            return self.extract_state(seat, terminal=True), seat
        return self.extract_state(nxt), nxt

    def step_back(self) -> bool:
        return self.game.step_back()

    def is_over(self) -> bool:
        return self.game.is_over()

    def current_player(self) -> int:
        return self.game.current_player()

    def get_payoffs(self) -> list[float]:
        if not self.game.is_over():
            raise GameNotOver("payoffs undefined before the game ends")
        return [float(p) for p in self.game.payoffs()]

    # single-agent mode ---------------------------------------------------

    def _autoplay_opponents(self) -> None:
        while not self.game.is_over() and self.game.current_player() != self._sa_learner:
            seat = self.game.current_player()
            obs = self.extract_state(seat)
            action = self._sa_opponents[seat].eval_step(obs, self._agent_rngs[seat])
            if action not in obs.legal_action_ids:
                raise IllegalAction(f"opponent at seat {seat} chose {action}, legal {obs.legal_action_ids}")
            self.game.step(action)
            self.timesteps += 1

    def reset(self) -> Observation:
        """Start episodes until the learner has a decision; returns their view."""
        if self._sa_learner is None:
            raise NotSingleAgentMode("env was not built by make_single_agent()")
        while True:
            self._begin_game()
            self._autoplay_opponents()
            if not self.game.is_over():
                return self.extract_state(self._sa_learner)
            # the opponents ended the game before the learner ever moved;
            # skip to the next seeded game so reset always yields a decision

    def sa_step(self, action_id: int):
        """Learner action in; (next obs, reward, done) out."""
        if self._sa_learner is None:
            raise NotSingleAgentMode("env was not built by make_single_agent()")
        if self.game.is_over():
            raise GameOver("episode finished; call reset()")
        self._require_legal(action_id)
        self.game.step(action_id)
        self.timesteps += 1
        self._autoplay_opponents()
        if self.game.is_over():
            obs = self.extract_state(self._sa_learner, terminal=True)
            reward = float(self.game.payoffs()[self._sa_learner])
            return obs, reward, True
        return self.extract_state(self._sa_learner), 0.0, False

    @property
    def learner_rng(self) -> Rng:
        """The learner seat's per-game stream (matches run() seeding)."""
        if self._sa_learner is None:
            raise NotSingleAgentMode("env was not built by make_single_agent()")
        return self._agent_rngs[self._sa_learner]


def make(config: EnvConfig) -> Env:
    """Build the environment described by a config."""
    return Env(config)


def make_single_agent(config: EnvConfig, opponents, learner_seat: int = 0) -> Env:
    """Gym-style env: one learner seat, fixed agents everywhere else.

    opponents maps the non-learner seats in ascending seat order.
    """
    env = Env(config)
    opponents = list(opponents)
    if len(opponents) != env.num_players - 1:
        raise AgentsNotSet(f"need {env.num_players - 1} opponents, got {len(opponents)}")
    if not 0 <= learner_seat < env.num_players:
        raise InvalidParam(f"learner_seat {learner_seat} out of range")
    seats: list = [None] * env.num_players
    idx = 0
    for s in range(env.num_players):
        if s != learner_seat:
            seats[s] = opponents[idx]
            idx += 1
    env._sa_learner = learner_seat
    env._sa_opponents = seats
    return env


def state_hash(info_key: str) -> str:
    """Stable 16-hex-digit digest of an information key."""
    return hashlib.sha256(info_key.encode()).hexdigest()[:16]


def serialize_trajectories(game_id: str, seed: int, game_index: int, trajectories, payoffs) -> str:
    """One text block per game: header line then one line per transition.

    Fields: game id, master seed, game index, player, step index,
    state hash, action, reward, done. Stable across runs and platforms
    byte for byte.
    """
    lines = [f"# game={game_id} seed={seed} index={game_index} payoffs={','.join(f'{p:g}' for p in payoffs)}"]
    for traj in trajectories:
        for i, t in enumerate(traj.transitions):
            lines.append(
                f"{game_id},{seed},{game_index},{traj.player_id},{i},"
                f"{state_hash(t.state.info_key)},{t.action},{t.reward:g},{int(t.done)}"
            )
    return "\n".join(lines) + "\n"
