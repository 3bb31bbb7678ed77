from __future__ import annotations

import enum
from dataclasses import dataclass, replace


class FaultMode(enum.Enum):
    PROPAGATE = "propagate"  # a transaction block ends with a visible ! label
    CONTAIN = "contain"  # the block-ending fault step is relabelled tau


class UnassignedMode(enum.Enum):
    ERROR = "error"
    DEFAULT_SKIP = "skip"


@dataclass(frozen=True)
class EngineOptions:
    interruptible_atoms: bool = False
    fault_mode: FaultMode = FaultMode.PROPAGATE
    unassigned_vars: UnassignedMode = UnassignedMode.ERROR
    max_channel_enumeration: int = 4096

    def with_(self, **changes) -> "EngineOptions":
        return replace(self, **changes)


DEFAULT_OPTIONS = EngineOptions()
