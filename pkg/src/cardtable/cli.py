"""Command-line entry point: selfplay, train, tournament, exploit, census, bench.

Every run is reproducible from its flags: the master seed comes from
--seed, then a `seed` line in --config, then the CARDTABLE_SEED
environment variable, then 0. Commands that write artifacts also write
a manifest.json carrying the resolved configuration and a sha256 of
every output file, and never a timestamp, so reruns diff clean.

Config files are flat key=value text, one per line, with # comments.
Keys mirror the long flags (game, seed, algo, iters, episodes, games,
workers, agents, out); game-specific engine parameters use the
param.NAME=value form, mirroring repeatable --param NAME=value flags.
Flags win over file values.

Exit codes: 0 success, 2 command-line usage errors, 1 anything that
fails at run time.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from cardtable import __version__
from cardtable.agents import (
    CFRTrainer,
    MCCFRTrainer,
    PolicyTable,
    QLearnParams,
    RandomAgent,
    qlearn_train,
)
from cardtable.env import GAME_IDS, EnvConfig, make_single_agent
from cardtable.errors import CardTableError, GameTooLarge, ParseError
from cardtable.evaluation import count_info_sets, exploitability, tournament
from cardtable.parallel import BenchReport, RolloutSpec, bench, build_agent, rollout_parallel

_CONFIG_KEYS = ("game", "seed", "algo", "iters", "episodes", "games", "workers", "agents", "out")


def load_config(path: str) -> dict[str, str]:
    """Flat key=value file; unknown keys and bad lines raise ParseError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        if key not in _CONFIG_KEYS and not key.startswith("param."):
            raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(value: str):
    """Config values: int when possible, then float, else the string."""
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


class _Merged:
    """Flag values overriding config-file values, with seed fallback chain."""

    def __init__(self, args: argparse.Namespace):
        self.file = load_config(args.config) if getattr(args, "config", None) else {}
        self.args = args

    def get(self, key: str, default=None):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.file:
            return _coerce(self.file[key])
        return default

    def seed(self) -> int:
        flag = getattr(self.args, "seed", None)
        if flag is not None:
            return flag
        if "seed" in self.file:
            return int(self.file["seed"])
        env = os.environ.get("CARDTABLE_SEED")
        if env is not None:
            return int(env)
        return 0

    def game_params(self) -> dict:
        params = {
            key[len("param.") :]: _coerce(value)
            for key, value in self.file.items()
            if key.startswith("param.")
        }
        for item in getattr(self.args, "param", None) or []:
            key, sep, value = item.partition("=")
            if not sep or not key:
                raise ParseError(f"--param expects NAME=value, got {item!r}")
            params[key.strip()] = _coerce(value.strip())
        return params

    def env_config(self, seed: int | None = None, allow_step_back: bool = False) -> EnvConfig:
        game = self.get("game")
        if game is None:
            raise ParseError("no game given (flag --game or config key game)")
        params = self.game_params()
        num_players = params.pop("num_players", None)
        return EnvConfig(
            game_id=game,
            seed=self.seed() if seed is None else seed,
            num_players=num_players,
            game_params=params,
            allow_step_back=allow_step_back,
        )

    def manifest_config(self, **extra) -> dict:
        merged = {key: self.get(key) for key in _CONFIG_KEYS if self.get(key) is not None}
        merged["seed"] = self.seed()
        merged.update({f"param.{k}": v for k, v in self.game_params().items()})
        merged.update(extra)
        return merged


def _write_outputs(out_dir: str, files: dict[str, str], command: str, config: dict) -> None:
    """Write named text files plus a manifest with their content hashes."""
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    hashes = {}
    for name, text in files.items():
        data = text.encode("utf-8")
        (path / name).write_bytes(data)
        hashes[name] = hashlib.sha256(data).hexdigest()
    manifest = {
        "command": command,
        "config": config,
        "outputs": hashes,
        "version": __version__,
    }
    (path / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _agent_list(merged: _Merged, seats: int):
    spec = merged.get("agents")
    if spec is None:
        return [RandomAgent() for _ in range(seats)], ("random",) * seats
    names = [part.strip() for part in str(spec).split(",") if part.strip()]
    return [build_agent(name) for name in names], tuple(names)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_selfplay(args) -> int:
    merged = _Merged(args)
    config = merged.env_config()
    n_games = int(merged.get("games", 1000))
    workers = int(merged.get("workers", 1))
    spec = RolloutSpec(
        env_config=config,
        agents=("random",) * config.resolved_players(),
        n_games=n_games,
        n_workers=workers,
    )
    result = rollout_parallel(spec, collect_logs=True)
    log_text = "".join(result.logs)
    out = merged.get("out")
    if out is None:
        sys.stdout.write(log_text)
    else:
        _write_outputs(out, {"trajectories.log": log_text}, "selfplay", merged.manifest_config())
        means = ",".join(f"{m:.6f}" for m in result.mean_payoffs)
        print(f"selfplay {config.game_id}: {n_games} games, {result.total_steps} steps, mean payoffs {means}")
    return 0


def _cmd_train(args) -> int:
    merged = _Merged(args)
    algo = merged.get("algo")
    config = merged.env_config()
    seed = merged.seed()
    if algo == "cfr":
        iters = int(merged.get("iters", 1000))
        trainer = CFRTrainer(config.game_id)
        trainer.run(iters)
        policy, detail = trainer.policy(), f"{iters} iterations"
    elif algo == "mccfr":
        iters = int(merged.get("iters", 1000))
        trainer = MCCFRTrainer(config)
        trainer.run(iters)
        policy, detail = trainer.policy(), f"{iters} iterations"
    elif algo == "qlearn":
        episodes = int(merged.get("episodes", 10000))
        seats = config.resolved_players()
        env = make_single_agent(config, opponents=[RandomAgent() for _ in range(seats - 1)])
        table = qlearn_train(env, episodes, QLearnParams())
        policy, detail = table.greedy_policy(), f"{episodes} episodes"
    else:  # random: an empty table plays uniform everywhere
        policy, detail = PolicyTable(), "no training"
    out = merged.get("out")
    if out is None:
        raise ParseError("train needs --out to store the policy")
    _write_outputs(out, {"policy.txt": policy.dumps()}, "train", merged.manifest_config(algo=algo))
    print(f"trained {algo} on {config.game_id} ({detail}, seed {seed}): {len(policy)} info sets -> {out}/policy.txt")
    return 0


def _cmd_tournament(args) -> int:
    merged = _Merged(args)
    config = merged.env_config()
    n_games = int(merged.get("games", 10000))
    agents, names = _agent_list(merged, config.resolved_players())
    result = tournament(config, agents, n_games)
    table = result.csv_table()
    print(table)
    out = merged.get("out")
    if out is not None:
        summary = json.dumps(result.summary_dict() | {"agents": list(names)}, indent=2, sort_keys=True) + "\n"
        _write_outputs(out, {"results.csv": table + "\n", "summary.json": summary}, "tournament", merged.manifest_config())
    return 0


def _cmd_exploit(args) -> int:
    merged = _Merged(args)
    config = merged.env_config()
    spec = merged.get("agents", "random")
    name = str(spec).split(",")[0].strip()
    policy = PolicyTable() if name == "random" else PolicyTable.load(name)
    report = exploitability(config.game_id, policy)
    lines = [
        "game,agent,exploitability,br_value_p0,br_value_p1,units",
        f"{config.game_id},{name},{report.exploitability:.12f},"
        f"{report.br_values[0]:.12f},{report.br_values[1]:.12f},{report.units}",
    ]
    text = "\n".join(lines)
    print(text)
    out = merged.get("out")
    if out is not None:
        _write_outputs(out, {"exploit.csv": text + "\n"}, "exploit", merged.manifest_config())
    return 0


def _cmd_census(args) -> int:
    merged = _Merged(args)
    config = merged.env_config()
    try:
        census = count_info_sets(config.game_id)
    except GameTooLarge:
        from cardtable.env import REGISTRY

        size = REGISTRY[config.game_id].num_actions
        print("game,action_space_size,note")
        print(f"{config.game_id},{size},info-set enumeration exceeds the node guard")
        return 0
    per_player = ";".join(str(n) for n in census.info_sets_per_player)
    print("game,players,info_sets_per_player,avg_states_per_info_set,action_space_size")
    print(
        f"{census.game_id},{census.num_players},{per_player},"
        f"{census.avg_states_per_info_set:.3f},{census.action_space_size}"
    )
    return 0


def _cmd_bench(args) -> int:
    merged = _Merged(args)
    config = merged.env_config()
    n_games = int(merged.get("games", 1000))
    workers = int(merged.get("workers", 1))
    report = bench(config.game_id, n_games, workers, seed=merged.seed())
    print(BenchReport.csv_header())
    print(report.csv_row())
    out = merged.get("out")
    if out is not None:
        path = Path(out)
        if path.is_dir():
            path = path / "bench.csv"
        fresh = not path.exists()
        with open(path, "a", encoding="utf-8") as fh:
            if fresh:
                fh.write(BenchReport.csv_header() + "\n")
            fh.write(report.csv_row() + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cardtable",
        description="Deterministic card-game environments with tabular solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, games: bool = False, workers: bool = False):
        p.add_argument("--game", choices=sorted(GAME_IDS))
        p.add_argument("--seed", type=int)
        p.add_argument("--config", help="flat key=value file; flags override it")
        p.add_argument("--out", help="output directory (bench: file to append)")
        p.add_argument("--param", action="append", metavar="NAME=VALUE", help="game parameter, repeatable")
        if games:
            p.add_argument("--games", type=int)
        if workers:
            p.add_argument("--workers", type=int)

    p = sub.add_parser("selfplay", help="random self-play, trajectory log out")
    common(p, games=True, workers=True)
    p.set_defaults(func=_cmd_selfplay)

    p = sub.add_parser("train", help="fit a tabular policy and save it")
    common(p)
    p.add_argument("--algo", choices=("cfr", "mccfr", "qlearn", "random"), required=True)
    p.add_argument("--iters", type=int)
    p.add_argument("--episodes", type=int)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("tournament", help="round-robin seat-rotated match")
    common(p, games=True)
    p.add_argument("--agents", help="comma list: random or policy file paths")
    p.set_defaults(func=_cmd_tournament)

    p = sub.add_parser("exploit", help="exact exploitability of a policy")
    common(p)
    p.add_argument("--agents", help="one entry: random or a policy file path")
    p.set_defaults(func=_cmd_exploit)

    p = sub.add_parser("census", help="exact info-set counts where enumerable")
    common(p)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("bench", help="random self-play throughput")
    common(p, games=True, workers=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CardTableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())
