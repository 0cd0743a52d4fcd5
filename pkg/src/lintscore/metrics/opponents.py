"""Opponent sets: the fixed evaluation gauntlet for behavior comparison."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..microlang import Program, parse, print_program
from ..resources import data_path
from ..sim import GameState, MatchRecord, play_match, state_from_map_dict


@dataclass(frozen=True)
class Opponent:
    ident: str
    source: str
    program: Program


class OpponentSet:
    """A named list of opponent policies on one map with fixed seeds.

    Matches are cached per (policy text, opponent index): the simulator is
    deterministic, so equal canonical sources always replay identically.
    """

    def __init__(
        self,
        name: str,
        opponents: list[Opponent],
        map_data: dict,
        seed: int = 0,
        max_ticks: int = 400,
        decision_period: int = 1,
    ):
        self.name = name
        self.opponents = opponents
        self.map_data = map_data
        self.seed = seed
        self.max_ticks = max_ticks
        self.decision_period = decision_period
        self._cache: dict[tuple[str, int], MatchRecord] = {}

    def __len__(self) -> int:
        return len(self.opponents)

    def initial_state(self, index: int) -> GameState:
        return state_from_map_dict(self.map_data, seed=self.seed + index)

    def matches(self, program: Program) -> list[MatchRecord]:
        """One record per opponent, evaluated policy playing as player 0."""
        key_text = print_program(program)
        records = []
        for index, opponent in enumerate(self.opponents):
            key = (key_text, index)
            record = self._cache.get(key)
            if record is None:
                record = play_match(
                    program,
                    opponent.program,
                    self.initial_state(index),
                    max_ticks=self.max_ticks,
                    decision_period=self.decision_period,
                )
                self._cache[key] = record
            records.append(record)
        return records

    def signature(self, program: Program) -> tuple[int, ...]:
        return tuple(record.outcome for record in self.matches(program))

    @classmethod
    def from_file(cls, path: str | Path) -> "OpponentSet":
        path = Path(path)
        data = json.loads(path.read_text())
        root = path.parent
        opponents = []
        for entry in data["programs"]:
            source = (root / entry).read_text()
            opponents.append(Opponent(Path(entry).stem, source, parse(source)))
        map_data = json.loads((root / data["map"]).read_text())
        return cls(
            data.get("name", path.stem),
            opponents,
            map_data,
            seed=data.get("seed", 0),
            max_ticks=data.get("max_ticks", 400),
            decision_period=data.get("decision_period", 1),
        )


_STANDARD_FILES = {16: "opponents16.json", 8: "opponents8.json"}
_standard_cache: dict[int, OpponentSet] = {}


def standard_opponents(size: int = 16) -> OpponentSet:
    """The bundled opponent set for the given map size (16 or 8), shared
    process-wide so its match cache accumulates."""
    if size not in _standard_cache:
        _standard_cache[size] = OpponentSet.from_file(
            data_path(_STANDARD_FILES[size])
        )
    return _standard_cache[size]


@dataclass
class AdmissionReport:
    all_win: list[str]
    all_loss: list[str]

    @property
    def ok(self) -> bool:
        return not self.all_win and not self.all_loss


def validate_opponents(
    candidates: dict[str, Program], oset: OpponentSet
) -> AdmissionReport:
    """Check that no candidate sweeps or loses the entire gauntlet.

    Outcome signatures with no variation carry no information for the
    outcome metric, so such a pool would be degenerate.
    """
    all_win, all_loss = [], []
    for ident, program in candidates.items():
        outcomes = oset.signature(program)
        if all(o == 1 for o in outcomes):
            all_win.append(ident)
        if all(o == -1 for o in outcomes):
            all_loss.append(ident)
    return AdmissionReport(all_win, all_loss)
