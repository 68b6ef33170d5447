"""Tabular policies keyed by information key, with a stable file form.

The file format ("cardtable-policy v1") is line-oriented text: a header,
then one sorted line per information key holding the legal action ids
and their probabilities at 12 decimal places. Keys absent from a table
fall back to uniform over the legal actions, so a partial table is
always playable.
"""

from __future__ import annotations

from cardtable.agents.base import Agent
from cardtable.errors import ParseError

_HEADER = "cardtable-policy v1"


class PolicyTable:
    """info_key -> (action ids, probabilities)."""

    def __init__(self):
        self._table: dict[str, tuple[tuple[int, ...], tuple[float, ...]]] = {}

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, key: str) -> bool:
        return key in self._table

    def set(self, key: str, action_ids, probs) -> None:
        action_ids = tuple(int(a) for a in action_ids)
        probs = tuple(float(p) for p in probs)
        if len(action_ids) != len(probs):
            raise ValueError("ids and probabilities differ in length")
        total = sum(probs)
        if total <= 0:
            raise ValueError("probabilities must have positive mass")
        self._table[key] = (action_ids, tuple(p / total for p in probs))

    def probs_for(self, key: str, legal_action_ids) -> tuple[tuple[int, ...], tuple[float, ...]]:
        """Stored distribution, or uniform over legal ids when unseen."""
        hit = self._table.get(key)
        if hit is not None:
            return hit
        legal = tuple(legal_action_ids)
        return legal, tuple(1.0 / len(legal) for _ in legal)

    def items(self):
        return self._table.items()

    def dumps(self) -> str:
        lines = [_HEADER]
        for key in sorted(self._table):
            ids, probs = self._table[key]
            lines.append(
                key
                + "\t"
                + ",".join(str(a) for a in ids)
                + "\t"
                + ",".join(f"{p:.12f}" for p in probs)
            )
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "PolicyTable":
        table = cls()
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            if header != _HEADER:
                raise ParseError(f"not a policy file (header {header!r})")
            for n, line in enumerate(fh, start=2):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ParseError(f"line {n}: expected 3 tab-separated fields")
                key, ids_s, probs_s = parts
                try:
                    ids = tuple(int(x) for x in ids_s.split(","))
                    probs = tuple(float(x) for x in probs_s.split(","))
                except ValueError as exc:
                    raise ParseError(f"line {n}: {exc}") from exc
                table.set(key, ids, probs)
        return table


class PolicyAgent(Agent):
    """Plays a PolicyTable; uniform over legal actions at unseen keys.

    eval_step samples from the stored distribution rather than taking
    an argmax, so the average strategy of a solver is played faithfully.
    """

    def __init__(self, table: PolicyTable):
        self.table = table

    def eval_step(self, obs, rng) -> int:
        ids, probs = self.table.probs_for(obs.info_key, obs.legal_action_ids)
        pick = rng.random()
        acc = 0.0
        for a, p in zip(ids, probs):
            acc += p
            if pick < acc:
                return a
        return ids[-1]
