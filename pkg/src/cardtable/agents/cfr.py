"""Vanilla counterfactual regret minimization on exact game trees.

Every iteration walks the whole tree once, expanding chance nodes by
their exact outcome probabilities, so the regret and average-strategy
accumulators carry no sampling noise. Both players update on the same
walk, and the average strategy weights every iteration uniformly. The
average policy is what converges; the current regret-matched strategy
is only the exploration vehicle.
"""

from __future__ import annotations

from cardtable.agents.policy import PolicyTable
from cardtable.trees import count_nodes, tree_for


def regret_matching(regrets) -> list[float]:
    """Strategy proportional to positive regret, uniform if none is positive."""
    positives = [r if r > 0.0 else 0.0 for r in regrets]
    total = sum(positives)
    if total <= 0.0:
        return [1.0 / len(positives)] * len(positives)
    return [p / total for p in positives]


class CFRTrainer:
    """Simultaneous-update vanilla CFR over a two-player TreeGame.

    Keeps one cumulative-regret vector and one cumulative-strategy
    vector per information key, aligned with the key's legal action
    list. run() is incremental, so callers can snapshot the average
    policy at checkpoints without restarting.
    """

    def __init__(self, game, node_limit: int = 10_000_000):
        self.tree = tree_for(game)
        count_nodes(self.tree, node_limit)  # raises GameTooLarge before any work
        self.iterations = 0
        self.regrets: dict[str, list[float]] = {}
        self.strategy_sum: dict[str, list[float]] = {}
        self.actions_at: dict[str, tuple] = {}

    def run(self, iterations: int) -> None:
        root = self.tree.root()
        for _ in range(iterations):
            self._walk(root, 1.0, 1.0, 1.0)
            self.iterations += 1

    def policy(self) -> PolicyTable:
        """Normalized average strategy; unvisited keys fall back to uniform."""
        table = PolicyTable()
        for key, weights in self.strategy_sum.items():
            total = sum(weights)
            ids = self.actions_at[key]
            if total > 0.0:
                table.set(key, ids, [w / total for w in weights])
            else:
                table.set(key, ids, [1.0] * len(ids))
        return table

    def _tables(self, key: str, actions) -> tuple[list[float], list[float]]:
        regr = self.regrets.get(key)
        if regr is None:
            regr = self.regrets[key] = [0.0] * len(actions)
            self.strategy_sum[key] = [0.0] * len(actions)
            self.actions_at[key] = tuple(actions)
        return regr, self.strategy_sum[key]

    def _walk(self, node, reach0: float, reach1: float, reach_c: float):
        """Returns both players' expected values under the current strategies."""
        tree = self.tree
        if tree.is_terminal(node):
            return tree.payoffs(node)
        if tree.is_chance(node):
            v0 = v1 = 0.0
            for child, prob in tree.chance_outcomes(node):
                c0, c1 = self._walk(child, reach0, reach1, reach_c * prob)
                v0 += prob * c0
                v1 += prob * c1
            return v0, v1
        if reach0 == 0.0 and reach1 == 0.0:
            # no update anywhere below can carry weight
            return 0.0, 0.0
        seat = tree.player(node)
        key = tree.info_key(node)
        actions = tree.actions(node)
        regr, strat_sum = self._tables(key, actions)
        strategy = regret_matching(regr)
        values = []
        v0 = v1 = 0.0
        for prob, action in zip(strategy, actions):
            child = tree.child(node, action)
            if seat == 0:
                pair = self._walk(child, reach0 * prob, reach1, reach_c)
            else:
                pair = self._walk(child, reach0, reach1 * prob, reach_c)
            values.append(pair)
            v0 += prob * pair[0]
            v1 += prob * pair[1]
        counterfactual = reach_c * (reach1 if seat == 0 else reach0)
        if counterfactual:
            mine = v0 if seat == 0 else v1
            for i in range(len(actions)):
                regr[i] += counterfactual * (values[i][seat] - mine)
        my_reach = reach0 if seat == 0 else reach1
        if my_reach:
            for i, prob in enumerate(strategy):
                strat_sum[i] += my_reach * prob
        return v0, v1


def cfr_train(game, iterations: int, node_limit: int = 10_000_000) -> PolicyTable:
    """Train vanilla CFR and return the average policy.

    game may be a game id or a TreeGame instance; ids without an exact
    tree, and trees past the node guard, raise GameTooLarge.
    """
    trainer = CFRTrainer(game, node_limit)
    trainer.run(iterations)
    return trainer.policy()
