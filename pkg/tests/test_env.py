"""Env wrapper: seeding, run/tree/single-agent modes, serialization."""

import pytest

from cardtable.agents import RandomAgent
from cardtable.core.rng import Rng, split_seed
from cardtable.env import (
    GAME_IDS,
    EnvConfig,
    Observation,
    make,
    make_single_agent,
    serialize_trajectories,
    state_hash,
)
from cardtable.errors import (
    AgentsNotSet,
    GameOver,
    IllegalAction,
    InvalidParam,
    NotSingleAgentMode,
    UnknownGame,
)


def run_games(config, n):
    env = make(config)
    env.set_agents([RandomAgent() for _ in range(env.num_players)])
    out = []
    for _ in range(n):
        trajectories, payoffs = env.run()
        out.append((trajectories, payoffs, env.game_index))
    return env, out


class TestConfig:
    def test_game_ids(self):
        assert GAME_IDS == ("blackjack", "leduc", "limit_holdem", "uno", "doudizhu", "mini_doudizhu")
        for gid in GAME_IDS:
            env = make(EnvConfig(gid, seed=1))
            assert env.num_actions > 0

    def test_unknown_game(self):
        with pytest.raises(UnknownGame):
            make(EnvConfig("bridge"))

    def test_player_range_enforced(self):
        with pytest.raises(InvalidParam):
            make(EnvConfig("leduc", num_players=3))
        with pytest.raises(InvalidParam):
            make(EnvConfig("uno", num_players=5))
        assert make(EnvConfig("uno", num_players=4)).num_players == 4
        assert make(EnvConfig("uno")).num_players == 2

    def test_unknown_game_param(self):
        with pytest.raises(InvalidParam):
            make(EnvConfig("leduc", game_params={"hand_size": 3}))
        with pytest.raises(InvalidParam):
            make(EnvConfig("uno", game_params={"fixed_raise": 2}))

    def test_game_params_reach_engine(self):
        env = make(EnvConfig("uno", game_params={"hand_size": 3}))
        env.new_game()
        assert [sum(h) for h in env.game.hands] == [3, 3]
        env = make(EnvConfig("limit_holdem", game_params={"fixed_raise": 3}))
        assert env.game.fixed_raise == 3


class TestRunMode:
    def test_needs_agents(self):
        env = make(EnvConfig("leduc"))
        with pytest.raises(AgentsNotSet):
            env.run()
        with pytest.raises(AgentsNotSet):
            env.set_agents([RandomAgent()])

    def test_trajectories_chain(self):
        for gid in ("leduc", "uno", "doudizhu", "blackjack"):
            _, games = run_games(EnvConfig(gid, seed=11), 8)
            for trajectories, payoffs, _ in games:
                for traj in trajectories:
                    steps = traj.transitions
                    for i, t in enumerate(steps):
                        assert t.action in t.state.legal_action_ids
                        last = i == len(steps) - 1
                        assert t.done is last
                        assert t.reward == (payoffs[traj.player_id] if last else 0.0)
                        if not last:
                            assert t.next_state == steps[i + 1].state
                    if steps:
                        assert steps[-1].next_state.is_terminal

    def test_same_seed_same_games(self):
        _, first = run_games(EnvConfig("doudizhu", seed=40), 5)
        _, second = run_games(EnvConfig("doudizhu", seed=40), 5)
        for (ta, pa, _), (tb, pb, _) in zip(first, second):
            assert pa == pb
            assert ta == tb

    def test_games_differ_across_indices(self):
        _, games = run_games(EnvConfig("leduc", seed=2), 6)
        keys = {g[0][0].transitions[0].state.info_key for g in games}
        assert len(keys) > 1

    def test_seek_jumps_the_seed_sequence(self):
        _, games = run_games(EnvConfig("uno", seed=9), 4)
        env = make(EnvConfig("uno", seed=9))
        env.set_agents([RandomAgent(), RandomAgent()])
        env.seek(3)
        trajectories, payoffs = env.run()
        assert env.game_index == 3
        assert payoffs == games[3][1]
        assert trajectories == games[3][0]
        with pytest.raises(InvalidParam):
            env.seek(-1)

    def test_timesteps_count_decisions(self):
        env, games = run_games(EnvConfig("leduc", seed=5), 3)
        want = sum(len(t.transitions) for g in games for t in g[0])
        assert env.timesteps == want


class TestTreeMode:
    def test_walk_and_undo(self):
        rng = Rng(8)
        config = EnvConfig("doudizhu", seed=3, allow_step_back=True)
        env = make(config)
        obs, seat = env.new_game()
        trace = [(obs, seat)]
        actions = []
        for _ in range(12):
            action = rng.choice(obs.legal_action_ids)
            actions.append(action)
            obs, seat = env.step(action)
            trace.append((obs, seat))
        for _ in range(12):
            assert env.step_back()
        assert not env.step_back()
        # replay gives the same observations back
        obs, seat = env.extract_state(env.current_player()), env.current_player()
        assert (obs, seat) == trace[0]
        for i, action in enumerate(actions):
            obs, seat = env.step(action)
            assert (obs, seat) == trace[i + 1]

    def test_terminal_obs_and_payoffs(self):
        env = make(EnvConfig("leduc", seed=1))
        obs, seat = env.new_game()
        rng = Rng(0)
        while not env.is_over():
            obs, seat = env.step(rng.choice(obs.legal_action_ids))
        assert obs.is_terminal
        payoffs = env.get_payoffs()
        assert sum(payoffs) == 0.0
        with pytest.raises(GameOver):
            env.step(0)

    def test_illegal_action_rejected(self):
        env = make(EnvConfig("leduc", seed=1))
        obs, _ = env.new_game()
        bad = next(a for a in range(env.num_actions) if a not in obs.legal_action_ids)
        with pytest.raises(IllegalAction):
            env.step(bad)


class TestSingleAgentMode:
    def test_mode_guard(self):
        env = make(EnvConfig("leduc"))
        with pytest.raises(NotSingleAgentMode):
            env.reset()
        with pytest.raises(NotSingleAgentMode):
            env.sa_step(0)
        with pytest.raises(NotSingleAgentMode):
            env.learner_rng

    def test_opponent_count_checked(self):
        with pytest.raises(AgentsNotSet):
            make_single_agent(EnvConfig("doudizhu"), [RandomAgent()])
        with pytest.raises(InvalidParam):
            make_single_agent(EnvConfig("leduc"), [RandomAgent()], learner_seat=2)

    def test_matches_run_mode_payoffs(self):
        # the same seats, streams, and uniform play in both modes
        config = EnvConfig("leduc", seed=77)
        _, games = run_games(config, 20)
        want = [payoffs[0] for _, payoffs, _ in games]

        env = make_single_agent(config, [RandomAgent()], learner_seat=0)
        got = []
        for _ in range(20):
            obs = env.reset()
            done = False
            while not done:
                action = env.learner_rng.choice(obs.legal_action_ids)
                obs, reward, done = env.sa_step(action)
            got.append(reward)
        assert got == want

    def test_rewards_zero_until_done(self):
        env = make_single_agent(EnvConfig("blackjack", seed=5), [])
        for _ in range(30):
            obs = env.reset()
            done = False
            while not done:
                obs, reward, done = env.sa_step(env.learner_rng.choice(obs.legal_action_ids))
                if not done:
                    assert reward == 0.0
            assert reward in (-1.0, 0.0, 1.0)


class TestObservation:
    def test_equality_ignores_planes(self):
        a = Observation(0, (1, 2), {"x": 1}, "k", lambda raw: [1])
        b = Observation(0, (1, 2), {"x": 1}, "k", lambda raw: [2])
        assert a == b
        assert hash(a) == hash(b)
        assert a.planes == [1] and b.planes == [2]

    def test_inequality(self):
        a = Observation(0, (1, 2), {}, "k", lambda raw: None)
        assert a != Observation(1, (1, 2), {}, "k", lambda raw: None)
        assert a != Observation(0, (1,), {}, "k", lambda raw: None)
        assert (a == object()) is False

    def test_hooks_replaceable(self):
        env = make(EnvConfig("leduc", seed=3))
        base_extract = env.extract_state

        def tagged(seat, terminal=False):
            obs = base_extract(seat, terminal)
            obs.raw["tag"] = True
            return obs

        env.extract_state = tagged
        env.set_agents([RandomAgent(), RandomAgent()])
        trajectories, _ = env.run()
        assert all(t.state.raw["tag"] for traj in trajectories for t in traj.transitions)
        env.decode_action = lambda aid: ("decoded", aid)
        assert env.decode_action(1) == ("decoded", 1)


class TestSerialization:
    def test_layout(self):
        config = EnvConfig("leduc", seed=6)
        env = make(config)
        env.set_agents([RandomAgent(), RandomAgent()])
        trajectories, payoffs = env.run()
        text = serialize_trajectories("leduc", 6, 0, trajectories, payoffs)
        lines = text.splitlines()
        assert text.endswith("\n")
        assert lines[0].startswith("# game=leduc seed=6 index=0 payoffs=")
        for line in lines[1:]:
            fields = line.split(",")
            assert len(fields) == 9
            assert fields[0] == "leduc"
            assert len(fields[5]) == 16

    def test_byte_stable(self):
        blocks = []
        for _ in range(2):
            env = make(EnvConfig("uno", seed=12))
            env.set_agents([RandomAgent(), RandomAgent()])
            trajectories, payoffs = env.run()
            blocks.append(serialize_trajectories("uno", 12, 0, trajectories, payoffs))
        assert blocks[0] == blocks[1]

    def test_state_hash_frozen(self):
        assert state_hash("x") == "2d711642b726b044"
        assert len(state_hash("anything")) == 16


class TestSeeding:
    def test_deal_stream_is_game_seed_stream_zero(self):
        config = EnvConfig("leduc", seed=31)
        env = make(config)
        obs, _ = env.new_game()
        game_seed = split_seed(31, 0)
        twin = make(EnvConfig("leduc", seed=split_seed(game_seed, 0)))
        # the twin's construction rng is replaced on new_game, so drive
        # the engine directly with the derived stream instead
        twin.game.rng = Rng(split_seed(game_seed, 0))
        twin.game.reset()
        assert twin.game.players[0].hand == env.game.players[0].hand
        assert twin.game.players[1].hand == env.game.players[1].hand
