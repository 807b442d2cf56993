"""Engine configuration: duration parsing, flat config files, bundled presets.

Config files are flat ``key = value`` text mirroring the Config field
names; durations take s/m/h suffixes. Every key can be overridden from
the CLI.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from datetime import timedelta
from importlib import resources

_DURATION_RE = re.compile(r"^\s*([0-9]+(?:\.[0-9]+)?)\s*([smh])\s*$")

_SUFFIX_SECONDS = {"s": 1.0, "m": 60.0, "h": 3600.0}

PRESET_NAMES = ("covid19", "facup", "facup-v1", "facup-v2")


def parse_duration(text: str) -> timedelta:
    """Parse a duration like '90s', '1m', '1.5h', '24h'."""
    match = _DURATION_RE.match(text)
    if not match:
        raise ValueError(f"bad duration {text!r}: expected <number><s|m|h>")
    value, suffix = match.groups()
    seconds = float(value) * _SUFFIX_SECONDS[suffix]
    if seconds <= 0:
        raise ValueError(f"duration must be positive: {text!r}")
    return timedelta(seconds=seconds)


def format_duration(td: timedelta) -> str:
    seconds = td.total_seconds()
    if seconds == int(seconds):
        return f"{int(seconds)}s"
    return f"{seconds}s"


@dataclass
class Config:
    """All engine parameters; radius/threshold are cosine distances (1 - similarity)."""

    init_agents: int = 5
    init_agent_cap: int = 2
    timeslot: timedelta = timedelta(minutes=1)
    comm_int: timedelta = timedelta(minutes=1)
    slid_win_int: timedelta = timedelta(minutes=1)
    assign_radius: float = 0.25
    outlier_threshold: float = 0.27
    no_topics: int = 20
    no_keywords: int = 9
    agent_fading_rate: float = 0.0
    del_agent_weight_threshold: float = 0.0
    seed: int = 0
    topic_match_fraction: float = 0.5

    @property
    def bootstrap_count(self) -> int:
        """Points consumed by initialization: init_agents * init_agent_cap."""
        return self.init_agents * self.init_agent_cap

    def validate(self) -> None:
        if self.init_agents < 1 or self.init_agent_cap < 1:
            raise ValueError("init_agents and init_agent_cap must be >= 1")
        for name in ("timeslot", "comm_int", "slid_win_int"):
            if getattr(self, name) <= timedelta(0):
                raise ValueError(f"{name} must be positive")
        for name in ("assign_radius", "outlier_threshold"):
            value = getattr(self, name)
            if not 0.0 < value < 2.0:
                raise ValueError(f"{name} must be in (0, 2), got {value}")
        if self.no_topics < 1 or self.no_keywords < 1:
            raise ValueError("no_topics and no_keywords must be >= 1")
        if not 0.0 <= self.agent_fading_rate <= 1.0:
            raise ValueError("agent_fading_rate must be in [0, 1]")
        if self.del_agent_weight_threshold < 0.0:
            raise ValueError("del_agent_weight_threshold must be >= 0")
        if not 0.0 < self.topic_match_fraction <= 1.0:
            raise ValueError("topic_match_fraction must be in (0, 1]")

    def to_dict(self) -> dict:
        """Flat string-friendly form (durations with suffix), used by the manifest."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, timedelta):
                out[f.name] = format_duration(value)
            else:
                out[f.name] = value
        return out


_FIELD_PARSERS = {
    "init_agents": int,
    "init_agent_cap": int,
    "timeslot": parse_duration,
    "comm_int": parse_duration,
    "slid_win_int": parse_duration,
    "assign_radius": float,
    "outlier_threshold": float,
    "no_topics": int,
    "no_keywords": int,
    "agent_fading_rate": float,
    "del_agent_weight_threshold": float,
    "seed": int,
    "topic_match_fraction": float,
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse flat key/value lines into typed Config field values."""
    values: dict = {}
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{source}:{line_no}: expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{source}:{line_no}: unknown config key {key!r}")
        try:
            values[key] = _FIELD_PARSERS[key](raw)
        except ValueError as exc:
            raise ValueError(f"{source}:{line_no}: bad value for {key}: {exc}") from exc
    return values


def load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=path)


def load_preset(name: str) -> dict:
    """Load one of the bundled presets by bare name."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
    text = resources.files("streamtopics.presets").joinpath(f"{name}.cfg").read_text("utf-8")
    return parse_config_text(text, source=f"preset:{name}")


def resolve_config(config_arg: str | None, overrides: dict) -> Config:
    """Build a Config from defaults < preset-or-file < CLI overrides."""
    values: dict = {}
    if config_arg:
        if config_arg in PRESET_NAMES:
            values.update(load_preset(config_arg))
        else:
            values.update(load_config_file(config_arg))
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = Config(**values)
    cfg.validate()
    return cfg
