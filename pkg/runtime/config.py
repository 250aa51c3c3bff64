from dataclasses import dataclass, field

from model.errors import InvalidParams

DEFAULT_C_FACTOR = 3
DEFAULT_TIMEOUT_MS = 30000
DEFAULT_SOURCE_FIRINGS = 16


@dataclass
class RuntimeConfig:
    source_firings: int = DEFAULT_SOURCE_FIRINGS
    firing_overrides: dict = field(default_factory=dict)  # source actor -> firings
    core_pinning: dict = field(default_factory=dict)  # actor -> core
    seed: int = None
    c_factor: int = DEFAULT_C_FACTOR
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    jitter_ms: float = 0.0
    jitter_seed: int = None  # falls back to seed
    trace: object = None
    keep_outputs: bool = True

    def __post_init__(self):
        counts = [self.source_firings] + list(self.firing_overrides.values())
        if any(not isinstance(n, int) or n < 0 for n in counts):
            raise InvalidParams(f"source firings must be non-negative integers, got {counts}")
        if not isinstance(self.c_factor, int) or self.c_factor < 2:
            raise InvalidParams(f"buffering factor must be an integer >= 2, got {self.c_factor}")
        if self.timeout_ms <= 0:
            raise InvalidParams(f"timeout must be positive, got {self.timeout_ms} ms")
        if self.jitter_ms < 0:
            raise InvalidParams(f"jitter must be non-negative, got {self.jitter_ms} ms")

    def firings_for(self, actor_id):
        return self.firing_overrides.get(actor_id, self.source_firings)

    def seed_for(self, params):
        """The run seed when one is set, else the actor's own `seed` parameter."""
        if self.seed is not None:
            return self.seed
        return int(params.get("seed", 0))


def parse_pinning(spec):
    """Parse "actor=core,actor=core" into a dict."""
    pinning = {}
    if not spec:
        return pinning
    for item in spec.split(","):
        actor, sep, core = item.partition("=")
        if not sep or not actor.strip() or not core.strip().isdigit():
            raise InvalidParams(f"bad pin entry {item!r}; expected actor=core")
        pinning[actor.strip()] = int(core)
    return pinning
