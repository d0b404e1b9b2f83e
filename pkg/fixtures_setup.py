import sys
from pathlib import Path
from typing import Any, Dict, List

from models.descriptors import dump_descriptor, parse_descriptor
from shared.config import WICKROT_FIXTURES


def _c(re: float, im: float = 0.0) -> List[float]:
    return [re, im]


SAMPLE_DESCRIPTORS: Dict[str, Dict[str, Any]] = {
    "oscillator": {"family": "oscillator", "name": "oscillator", "winding": 1},
    "line": {"family": "line", "name": "line", "winding": 1},
    "finite": {"family": "finite", "name": "finite", "B": [[_c(1.0), _c(0.0)]]},
    "first_order": {
        "family": "first-order",
        "name": "first_order",
        "M": [[[_c(0.0, 1.0), _c(0.0)], [_c(0.0), _c(0.0, -1.0)]]],
        "K": [[_c(0.0), _c(0.0)], [_c(0.0), _c(0.0)]],
        "L": 3.141592653589793,
    },
    "first_order_degenerate": {
        "family": "first-order",
        "name": "first_order_degenerate",
        "M": [[[_c(1.0), _c(0.0)], [_c(0.0), _c(0.0)]]],
        "K": [[_c(0.0), _c(0.0)], [_c(0.0), _c(0.0)]],
        "L": 3.141592653589793,
        "expect_failure": ["axiom 4", "first-order condition invertible_symbol"],
    },
    "lorentz": {"family": "lorentz", "name": "lorentz", "A": [[_c(1.0), _c(0.5)], [_c(0.5), _c(2.0)]]},
    "pauli": {"family": "pauli", "name": "pauli"},
}


class FixtureSetup:
    """Seeds the model descriptor directory."""

    def __init__(self, directory: str = WICKROT_FIXTURES):
        self.directory = Path(directory)

    def initialize(self) -> List[Path]:
        """Create the directory and write the sample descriptors if it holds none."""

        self.directory.mkdir(parents=True, exist_ok=True)
        if any(self.directory.glob("*.json")):
            return []
        return self.insert_sample_descriptors()

    def insert_sample_descriptors(self) -> List[Path]:
        written = []
        for name, payload in SAMPLE_DESCRIPTORS.items():
            path = self.directory / f"{name}.json"
            dump_descriptor(parse_descriptor(payload), path)
            written.append(path)
        print(f"Seeded {len(written)} model descriptors into {self.directory}", file=sys.stderr)
        return written


def main():
    FixtureSetup().initialize()


if __name__ == "__main__":
    main()
