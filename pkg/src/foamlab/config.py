"""Desk-scale limits, overridable through the FOAMLAB_LIMITS environment variable."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from .errors import ParseError

ENV_VAR = "FOAMLAB_LIMITS"


@dataclass(frozen=True)
class Limits:
    # enumeration guardrails
    max_degree: int = 5
    n: int = 6
    max_components: int = 4
    # single-document guardrails
    document_degree: int = 12
    document_components: int = 8
    group_order: int = 20000
    # weak isomorphism search
    iso_components: int = 6
    iso_degree: int = 8

    def enumeration_guardrails(self) -> dict:
        return {"max_degree": self.max_degree, "n": self.n, "max_components": self.max_components}

    def updated(self, overrides: dict) -> Limits:
        known = {f.name for f in fields(self)}
        bad = sorted(set(overrides) - known)
        if bad:
            raise ParseError(f"unknown limit keys {bad}")
        for key, value in overrides.items():
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ParseError(f"limit {key} must be a non-negative integer")
        return replace(self, **overrides)

    def as_dict(self) -> dict:
        return asdict(self)


def load_limits(environ=None) -> Limits:
    """Defaults, updated by the JSON object in FOAMLAB_LIMITS when it is set."""
    environ = os.environ if environ is None else environ
    raw = environ.get(ENV_VAR, "").strip()
    if not raw:
        return Limits()
    try:
        overrides = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{ENV_VAR} is not valid JSON: {exc}") from None
    if not isinstance(overrides, dict):
        raise ParseError(f"{ENV_VAR} must hold a JSON object")
    return Limits().updated(overrides)
