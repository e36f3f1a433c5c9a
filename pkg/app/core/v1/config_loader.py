"""JSON experiment config loading with line-anchored schema errors."""

from pathlib import Path
from typing import Any, Dict, Sequence, Tuple, Union

import orjson
from pydantic import ValidationError

from app.core.v1.exceptions import SchemaException
from app.core.v1.experiment_schema import LabConfig
from app.core.v1.log_manager import LogManager

logger = LogManager(__name__)

_WHITESPACE = " \t\r\n"


class JsonLocator:
    """Maps a JSON path (keys and indices) to the 1-based line of its value."""

    def __init__(self, text: str):
        self.text = text
        self.lines: Dict[Tuple, int] = {}
        self._pos = 0
        try:
            self._value(())
        except (IndexError, ValueError):
            # Malformed text: keep whatever was located so far
            pass

    def _line(self, position: int) -> int:
        return self.text.count("\n", 0, position) + 1

    def _skip(self) -> None:
        while self._pos < len(self.text) and self.text[self._pos] in _WHITESPACE:
            self._pos += 1

    def _string(self) -> str:
        start = self._pos + 1
        self._pos = start
        while self.text[self._pos] != '"':
            self._pos += 2 if self.text[self._pos] == "\\" else 1
        self._pos += 1
        return orjson.loads(self.text[start - 1:self._pos])

    def _value(self, path: Tuple) -> None:
        self._skip()
        self.lines.setdefault(path, self._line(self._pos))
        char = self.text[self._pos]
        if char == "{":
            self._object(path)
        elif char == "[":
            self._array(path)
        elif char == '"':
            self._string()
        else:
            while self._pos < len(self.text) and self.text[self._pos] not in ",]}" + _WHITESPACE:
                self._pos += 1

    def _object(self, path: Tuple) -> None:
        self._pos += 1
        self._skip()
        if self.text[self._pos] == "}":
            self._pos += 1
            return
        while True:
            self._skip()
            key_line = self._line(self._pos)
            key = self._string()
            self.lines[path + (key,)] = key_line
            self._skip()
            self._pos += 1  # colon
            self._value(path + (key,))
            self._skip()
            closing = self.text[self._pos]
            self._pos += 1
            if closing == "}":
                return

    def _array(self, path: Tuple) -> None:
        self._pos += 1
        self._skip()
        if self.text[self._pos] == "]":
            self._pos += 1
            return
        index = 0
        while True:
            self._value(path + (index,))
            self._skip()
            closing = self.text[self._pos]
            self._pos += 1
            if closing == "]":
                return
            index += 1

    def locate(self, loc: Sequence[Union[str, int]]) -> int:
        """Line of the deepest located prefix of loc; union tags are skipped."""
        found: Tuple = ()
        for part in loc:
            candidate = found + (part,)
            if candidate in self.lines:
                found = candidate
        return self.lines.get(found, 1)


def _format_loc(loc: Sequence[Union[str, int]]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_config(text: str, source: str = "<config>") -> LabConfig:
    """Parse and validate config text.

    Raises:
        SchemaException: For malformed JSON or schema violations, with the offending line.
    """
    try:
        document: Any = orjson.loads(text)
    except orjson.JSONDecodeError as err:
        logger.error("Config is not valid JSON", source=source, error=err.msg)
        raise SchemaException(f"{source}: invalid JSON: {err.msg}", line=err.lineno) from err

    if not isinstance(document, dict):
        raise SchemaException(f"{source}: top level must be an object", line=1)

    try:
        return LabConfig.model_validate(document)
    except ValidationError as err:
        first = err.errors()[0]
        line = JsonLocator(text).locate(first["loc"])
        others = len(err.errors()) - 1
        suffix = f" (+{others} more)" if others else ""
        logger.error("Config schema violation", source=source, line=line, location=_format_loc(first["loc"]))
        raise SchemaException(
            f"{source}: {_format_loc(first['loc'])}: {first['msg']}{suffix}", line=line
        ) from err


def load_config(path: Union[str, Path]) -> LabConfig:
    """Read and validate a config file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise SchemaException(f"{path}: cannot read config: {err.strerror}") from err
    return parse_config(text, str(path))
