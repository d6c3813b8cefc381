"""Safety model checking for integer transition systems and linear CHCs.

Engines: plain bounded model checking, BMC with on-the-fly loop
acceleration, and the blocking variant that can also prove safety from
learned transitions.
"""

from __future__ import annotations

from .engine import Engine, EngineConfig, EngineResult, UnknownReason, Verdict, run
from .formulas import SafetyProblem

__all__ = [
    "Engine",
    "EngineConfig",
    "EngineResult",
    "SafetyProblem",
    "UnknownReason",
    "Verdict",
    "run",
]

__version__ = "0.1.0"
