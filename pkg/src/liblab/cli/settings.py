"""Experiment configuration assembled from command-line flags."""
from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..config import config
from ..ensembles.families import UNITARY_KINDS
from ..ensembles.laws import DiagonalLaw
from ..ensembles.rng import SeededRng
from ..errors import ValidationError
from ..linalg.hadamard import HADAMARD_KINDS, is_power_of_two

EXPERIMENTS = ("liberate", "sum", "product", "hadamard-iid", "compress", "concentrate", "verify")
FORMATS = ("json", "csv")
COUPLINGS = ("independent", "equal")
OPERATIONS = ("sum", "product")

DEFAULT_N = 512
DEFAULT_MOMENT_ORDER = 6
DEFAULT_PATTERN = (1, 2)

# Per-experiment laws for A and B (X and Y) when --law-a/--law-b are absent.
DEFAULT_LAWS = {
    "sum": ("rademacher", "rademacher"),
    "product": ("bernoulli:0.5", "bernoulli:0.5"),
    "hadamard-iid": ("bernoulli:0.5", "bernoulli:0.5"),
    "concentrate": ("rademacher", "rademacher"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one experiment run depends on.

    ``hadamard`` may be left unset; each dimension then resolves to Sylvester
    when it is a power of two and to the DFT otherwise. ``pattern`` holds
    1-based labels into the liberating family W, HW, D1HW, ...
    """

    experiment: str
    n: int = DEFAULT_N
    trials: int = field(default_factory=lambda: config.DEFAULT_TRIALS)
    seed: int = field(default_factory=lambda: config.DEFAULT_SEED)
    moment_order: int = DEFAULT_MOMENT_ORDER
    alpha: Optional[float] = None
    beta: Optional[float] = None
    hadamard: Optional[str] = None
    output_path: Optional[str] = None
    output_format: str = "json"
    sweep: Tuple[int, ...] = ()
    coupling: str = "independent"
    operation: str = "sum"
    unitary: str = "fake"
    law_a: Optional[str] = None
    law_b: Optional[str] = None
    pattern: Tuple[int, ...] = DEFAULT_PATTERN
    family_size: int = 0
    dump: Optional[str] = None
    timing: bool = False
    workers: Optional[int] = None
    log_level: Optional[str] = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENTS}")
        object.__setattr__(self, "sweep", tuple(int(v) for v in self.sweep))
        object.__setattr__(self, "pattern", tuple(int(v) for v in self.pattern))
        for n in self.ns:
            if n < 2:
                raise ValidationError(f"n must be at least 2, got {n}")
        if self.trials < 1:
            raise ValidationError(f"trials must be at least 1, got {self.trials}")
        SeededRng(self.seed)
        if self.moment_order < 1:
            raise ValidationError(f"moment order must be positive, got {self.moment_order}")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if value is not None and not 0.0 < value < 1.0:
                raise ValidationError(f"{name} must lie in (0, 1), got {value}")
        if self.hadamard is not None and self.hadamard not in HADAMARD_KINDS:
            raise ValidationError(f"unknown Hadamard kind {self.hadamard!r}; expected one of {HADAMARD_KINDS}")
        if self.hadamard == "sylvester":
            for n in self.ns:
                if not is_power_of_two(n):
                    raise ValidationError(f"sylvester needs a power-of-two n, got {n}")
        checks = (
            ("format", self.output_format, FORMATS),
            ("coupling", self.coupling, COUPLINGS),
            ("operation", self.operation, OPERATIONS),
            ("unitary", self.unitary, UNITARY_KINDS),
        )
        for name, value, allowed in checks:
            if value not in allowed:
                raise ValidationError(f"unknown {name} {value!r}; expected one of {allowed}")
        if self.family_size < 0:
            raise ValidationError(f"family size must be nonnegative, got {self.family_size}")
        if self.workers is not None and self.workers < 1:
            raise ValidationError(f"workers must be positive, got {self.workers}")
        if self.experiment in DEFAULT_LAWS:
            self.laws()

    @property
    def ns(self) -> Tuple[int, ...]:
        """The N-sweep, or just ``n`` when no sweep was given."""
        return self.sweep or (self.n,)

    @property
    def rng(self) -> SeededRng:
        return SeededRng(self.seed)

    def hadamard_for(self, n: int) -> str:
        if self.hadamard is not None:
            return self.hadamard
        return "sylvester" if is_power_of_two(n) else "dft"

    def laws(self) -> Tuple[DiagonalLaw, DiagonalLaw]:
        default_a, default_b = DEFAULT_LAWS.get(self.experiment, ("zero", "zero"))
        return DiagonalLaw.parse(self.law_a or default_a), DiagonalLaw.parse(self.law_b or default_b)

    @property
    def compression_params(self) -> Tuple[float, float]:
        return (0.5 if self.alpha is None else self.alpha, 0.5 if self.beta is None else self.beta)

    def to_dict(self) -> dict:
        """Echo of the run settings; output location and logging are left out."""
        data = {
            "experiment": self.experiment,
            "n": self.n,
            "sweep": list(self.ns),
            "trials": self.trials,
            "seed": self.seed,
            "moment_order": self.moment_order,
            "hadamard": [self.hadamard_for(n) for n in self.ns],
            "unitary": self.unitary,
        }
        if self.experiment in DEFAULT_LAWS:
            law_a, law_b = self.laws()
            data["law_a"], data["law_b"] = str(law_a), str(law_b)
        if self.experiment == "compress":
            data["alpha"], data["beta"] = self.compression_params
        if self.experiment == "hadamard-iid":
            data["coupling"] = self.coupling
        if self.experiment in ("hadamard-iid", "concentrate"):
            data["operation"] = self.operation
        if self.experiment == "liberate":
            data["pattern"] = list(self.pattern)
            data["family_size"] = self.family_size
        return data
