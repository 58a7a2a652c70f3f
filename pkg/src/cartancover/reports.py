"""Reports: a machine-readable JSON section plus a human rendering.

Machine reports contain only JSON-native values (strings for exact
scalars), are key-sorted, and carry no timing or environment data, so a
given instance always produces byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    command: str
    machine: dict
    human_lines: list = field(default_factory=list)
    exit_code: int = 0

    def to_machine_text(self) -> str:
        doc = {"command": self.command, **self.machine}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def to_human_text(self) -> str:
        return "\n".join(self.human_lines) + "\n"


def render_matrix(field_obj, m) -> list:
    return [[field_obj.render(x) for x in row] for row in m.rows]


def render_vector(field_obj, v) -> list:
    return [field_obj.render(x) for x in v]


def matrix_oneline(field_obj, m) -> str:
    return "[" + "; ".join(" ".join(field_obj.render(x) for x in row) for row in m.rows) + "]"


def render_filtration(filtration) -> list:
    return [{"weight": str(w), "jump": j} for w, j in filtration.jumps]


def filtration_oneline(filtration) -> str:
    return ", ".join(f"({w}, {j})" for w, j in filtration.jumps)


def perm_to_json(perm) -> list:
    return [x + 1 for x in perm]
