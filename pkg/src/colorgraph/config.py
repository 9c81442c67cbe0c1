"""Run configuration shared by the command line and the experiment scripts."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field


@dataclass
class RunConfig:
    """Everything that determines a run's output.

    ``jobs`` only controls parallelism and is left out of :meth:`header`, so
    results do not depend on it.
    """

    command: str
    dimension: int | None = None
    p: int | None = None
    seed: int = 0
    samples: int | None = None
    truncation: int | None = None
    window: tuple[int, int] | None = None
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    format: str = "text"
    jobs: int = 1
    options: dict = field(default_factory=dict)

    def header(self) -> dict:
        doc = asdict(self)
        doc.pop("jobs")
        doc.pop("output")
        if doc["window"] is not None:
            doc["window"] = list(doc["window"])
        return doc

    def header_line(self) -> str:
        return "# config: " + json.dumps(self.header(), sort_keys=True, separators=(",", ":"))
