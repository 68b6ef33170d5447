import pathlib

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def load_ints(name: str) -> list[int]:
    return [int(line) for line in (FIXTURES / name).read_text().splitlines() if line.strip()]
