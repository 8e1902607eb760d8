"""Experiment reports and their JSON/CSV serialization."""
import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..utils.logger import get_logger
from ..utils.stats import Histogram
from .settings import ExperimentConfig

logger = get_logger(__name__)


def _plain(value):
    """Recursively turn numpy scalars and arrays into JSON-ready builtins."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        number = float(value)
        return number if np.isfinite(number) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def _cell(values, index: int) -> str:
    return repr(float(values[index])) if index < len(values) else ""


@dataclass
class ExperimentReport:
    """
    Result of one experiment run.

    ``checks`` holds one {name, passed, detail} entry per tolerance test; the
    run passes only when every check does.
    """

    config: ExperimentConfig
    moments: List[float] = field(default_factory=list)
    se: List[float] = field(default_factory=list)
    targets: List[float] = field(default_factory=list)
    histogram: Histogram = field(default_factory=lambda: Histogram([], []))
    checks: List[dict] = field(default_factory=list)
    wall_time_ms: Optional[float] = None
    data: dict = field(default_factory=dict)

    def add_check(self, name: str, passed: bool, **detail) -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "detail": _plain(detail)})
        if not passed:
            logger.warning(f"{self.config.experiment}: check {name} failed")
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(check["passed"] for check in self.checks)

    @property
    def failed_checks(self) -> List[str]:
        return [check["name"] for check in self.checks if not check["passed"]]

    def to_dict(self) -> dict:
        result = {
            "config": self.config.to_dict(),
            "moments": _plain(self.moments),
            "se": _plain(self.se),
            "targets": _plain(self.targets),
            "histogram": self.histogram.to_dict(),
            "checks": self.checks,
            "passed": self.passed,
            "wall_time_ms": self.wall_time_ms,
        }
        if self.data:
            result["data"] = _plain(self.data)
        return result

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """
        Moments, histogram bins and checks as one CSV table.

        Histogram rows put the mass in ``value`` and the bin edges in the two
        trailing columns.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["section", "index", "value", "se", "target"])
        for k in range(len(self.moments)):
            writer.writerow(["moment", k + 1, _cell(self.moments, k), _cell(self.se, k), _cell(self.targets, k)])
        edges, masses = self.histogram.edges, self.histogram.masses
        for i, mass in enumerate(masses):
            writer.writerow(["histogram", i, repr(mass), repr(edges[i]), repr(edges[i + 1])])
        for check in self.checks:
            writer.writerow(["check", check["name"], int(check["passed"]), "", ""])
        return buffer.getvalue()

    def render(self) -> str:
        return self.to_csv() if self.config.output_format == "csv" else self.to_json() + "\n"

    def write(self, path: Union[str, Path]) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.render())
        logger.info(f"Wrote {self.config.experiment} report to {target}")
        return target
