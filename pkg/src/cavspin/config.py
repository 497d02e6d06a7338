"""Scenario config files.

Grammar (INI-like, one scenario per file)::

    # comment
    [oat]
    N = 40
    chi = 1.0
    t_max = 2.0
    seed = 7
    N_list = [20, 40, 80]
    boundary = open

Values are Python literals (numbers, quoted strings, lists, ``true``/``false``,
``inf``); anything else is kept as a bare string.  Keys are case-sensitive.
"""

import ast
import configparser
import math
from dataclasses import dataclass, field
from pathlib import Path


class ConfigError(Exception):
    """Bad config file: syntax, unknown key, missing key or bad value."""

    def __init__(self, message, line=None, key=None):
        super().__init__(message)
        self.line = line
        self.key = key

    def to_dict(self):
        d = {"error": "config", "message": str(self)}
        if self.line is not None:
            d["line"] = self.line
        if self.key is not None:
            d["key"] = self.key
        return d


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out_dir: str = "out"
    formats: tuple = ("csv", "json")
    source: str = None


_WORDS = {"true": True, "false": False, "inf": math.inf, "+inf": math.inf, "-inf": -math.inf,
          "pi": math.pi}


def parse_value(text):
    s = text.strip()
    if s.lower() in _WORDS:
        return _WORDS[s.lower()]
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError(f"unterminated list {s!r}")
        inner = s[1:-1].strip()
        return [parse_value(p) for p in _split_list(inner)] if inner else []
    try:
        return ast.literal_eval(s)
    except (ValueError, SyntaxError):
        if any(c in s for c in "[]{}(),=\"'"):
            raise ValueError(f"cannot parse value {s!r}")
        return s


def _split_list(inner):
    parts, depth, cur = [], 0, []
    for ch in inner:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if any(not p.strip() for p in parts):
        raise ValueError("empty list element")
    return parts


def _key_lines(text):
    out = {}
    for k, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s and s[0] not in "#;[" and "=" in s:
            out.setdefault(s.split("=", 1)[0].strip(), k)
    return out


def parse_config_text(text, source="<string>", known=None) -> ScenarioConfig:
    """Parse config text.  ``known`` maps scenario name -> (required, optional) key sets."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"),
                                   inline_comment_prefixes=("#",), strict=True, empty_lines_in_values=False)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as e:
        raise ConfigError(f"{source}:{e.lineno}: expected a [scenario] header first", line=e.lineno)
    except configparser.ParsingError as e:
        lineno = e.errors[0][0]
        line = text.splitlines()[lineno - 1].strip()
        raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}", line=lineno)
    except configparser.DuplicateOptionError as e:
        raise ConfigError(f"{source}:{e.lineno}: duplicate key {e.option!r}", line=e.lineno, key=e.option)
    except configparser.DuplicateSectionError as e:
        raise ConfigError(f"{source}:{e.lineno}: duplicate section [{e.section}]", line=e.lineno)

    sections = cp.sections()
    if len(sections) != 1:
        raise ConfigError(f"{source}: expected exactly one scenario section, found {len(sections)}")
    name = sections[0]
    lines = _key_lines(text)
    params = {}
    for key, raw in cp[name].items():
        if "\n" in raw:
            raise ConfigError(f"{source}:{lines.get(key)}: value of {key!r} spans several lines",
                              line=lines.get(key), key=key)
        try:
            params[key] = parse_value(raw)
        except ValueError as e:
            raise ConfigError(f"{source}:{lines.get(key)}: {e}", line=lines.get(key), key=key)

    seed = params.pop("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"{source}: seed must be a non-negative integer", line=lines.get("seed"), key="seed")

    if known is not None:
        if name not in known:
            raise ConfigError(f"{source}: unknown scenario {name!r}", key=name)
        required, optional = known[name]
        for key in params:
            if key not in required and key not in optional:
                raise ConfigError(f"{source}:{lines.get(key)}: unknown key {key!r} for scenario {name!r}",
                                  line=lines.get(key), key=key)
        for key in sorted(required):
            if key not in params:
                raise ConfigError(f"{source}: missing required key {key!r} for scenario {name!r}", key=key)
    return ScenarioConfig(name, params, seed, source=source)


def parse_config(path, known=None) -> ScenarioConfig:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(p.read_text(), source=str(p), known=known)
