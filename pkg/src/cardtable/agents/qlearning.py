"""Tabular Q-learning over the single-agent environment mode.

Keys are the same information keys the rest of the toolkit uses, so a
trained table converts directly into a playable greedy policy. The
exploration stream is the env's own per-game learner stream, which
makes a full training run reproducible from the env config alone and
makes the epsilon=1 schedule draw-for-draw identical to RandomAgent.
"""

from __future__ import annotations

from dataclasses import dataclass

from cardtable.agents.policy import PolicyTable


@dataclass(frozen=True)
class QLearnParams:
    learning_rate: float = 0.05
    discount: float = 0.99
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    anneal_fraction: float = 0.5  # epsilon reaches its floor this far into training

    def epsilon_at(self, episode: int, episodes: int) -> float:
        cut = max(1, int(episodes * self.anneal_fraction))
        frac = min(1.0, episode / cut)
        return self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac


class QTable:
    """info_key -> action values aligned with the key's legal ids."""

    def __init__(self, params: QLearnParams):
        self.params = params
        self._table: dict[str, tuple[tuple[int, ...], list[float]]] = {}

    def __len__(self) -> int:
        return len(self._table)

    def values_for(self, key: str, legal_action_ids) -> tuple[tuple[int, ...], list[float]]:
        hit = self._table.get(key)
        if hit is None:
            ids = tuple(legal_action_ids)
            hit = self._table[key] = (ids, [0.0] * len(ids))
        return hit

    def best_value(self, key: str, legal_action_ids) -> float:
        _, values = self.values_for(key, legal_action_ids)
        return max(values)

    def items(self):
        return self._table.items()

    def greedy_policy(self) -> PolicyTable:
        """Probability 1 on each key's highest-valued action (first on ties)."""
        table = PolicyTable()
        for key, (ids, values) in self._table.items():
            best = values.index(max(values))
            table.set(key, ids, [1.0 if i == best else 0.0 for i in range(len(ids))])
        return table


def qlearn_train(env, episodes: int, params: QLearnParams | None = None) -> QTable:
    """Epsilon-greedy tabular Q-learning on a single-agent env.

    One episode per seeded game; rewards arrive only at the end, so
    intermediate targets are pure bootstrap. Greedy ties break to the
    first (lowest) legal action id for determinism.
    """
    params = params or QLearnParams()
    table = QTable(params)
    lr = params.learning_rate
    gamma = params.discount
    for episode in range(episodes):
        epsilon = params.epsilon_at(episode, episodes)
        obs = env.reset()
        rng = env.learner_rng
        while True:
            ids, values = table.values_for(obs.info_key, obs.legal_action_ids)
            # epsilon >= 1 skips the threshold draw, so a pure-exploration
            # run consumes the stream exactly like RandomAgent
            if epsilon >= 1.0 or rng.random() < epsilon:
                pick = rng.randbelow(len(ids))
            else:
                pick = values.index(max(values))
            nxt, reward, done = env.sa_step(ids[pick])
            if done:
                target = reward
            else:
                target = reward + gamma * table.best_value(nxt.info_key, nxt.legal_action_ids)
            values[pick] += lr * (target - values[pick])
            if done:
                break
            obs = nxt
    return table
