"""Exceptions, guard checks and canonical serialization shared by all modules."""

import json
from typing import Any

import yaml


class GraphValidationError(ValueError):
    """A graph violates one of its structural invariants."""

    def __init__(self, violations: list[str]) -> None:
        """Keep the violations around for reporting.

        Parameters
        ----------
        violations : list[str]
            Human-readable descriptions, one per violated invariant
        """
        self.violations = list(violations)
        super().__init__("Invalid graph: " + "; ".join(self.violations))


class GuardLimitExceededError(ValueError):
    """A desk-scale guard was exceeded."""

    def __init__(self, guard: str, value: int, limit: int) -> None:
        """Record which guard fired and by how much.

        Parameters
        ----------
        guard : str
            Name of the guard, matching a field of ``Limits``
        value : int
            Size of the offending input
        limit : int
            Configured maximum
        """
        self.guard = guard
        self.value = value
        self.limit = limit
        super().__init__(
            f"Guard '{guard}' exceeded: {value} > {limit} (use --unsafe-limits to override)",
        )


class DocumentError(ValueError):
    """An input document could not be read or parsed."""


def document_entries(data: dict, key: str, kind: str, fields: tuple[str, ...]) -> list[dict]:
    """Return the entries listed under ``key`` once each holds the required ``fields``.

    Raises
    ------
    DocumentError
        ``key`` is not a list, or an entry is not an object or lacks a field
    """
    entries = data.get(key, [])
    if not isinstance(entries, list):
        msg = f"'{key}' must be a list, got {type(entries).__name__}"
        raise DocumentError(msg)

    for index, entry in enumerate(entries):
        if not isinstance(entry, dict):
            msg = f"{kind} {index} is not an object"
            raise DocumentError(msg)
        if missing := [f for f in fields if f not in entry]:
            msg = f"{kind} {index} is missing field '{missing[0]}'"
            raise DocumentError(msg)
    return entries


def check_limit(guard: str, value: int, limit: int | None) -> None:
    """Raise if ``value`` exceeds ``limit``. A limit of None disables the guard.

    Raises
    ------
    GuardLimitExceededError
        When the guard is enabled and exceeded
    """
    if limit is not None and value > limit:
        raise GuardLimitExceededError(guard, value, limit)


def _is_absent(obj: Any) -> bool:  # noqa: ANN401
    return obj is None


def _drop_absent_object(obj: Any) -> Any:  # noqa: ANN401
    if isinstance(obj, dict):
        return drop_absent_fields(obj)
    if isinstance(obj, list | tuple):
        return drop_absent_elements(obj)
    return obj


def drop_absent_elements(list_to_sanitize: list[Any] | tuple[Any, ...]) -> list[Any]:
    """Drop None elements from a list, recursing into nested containers.

    Parameters
    ----------
    list_to_sanitize : list[Any] | tuple[Any, ...]
        Sequence to sanitize. Tuples come back as lists, ready for JSON.

    Returns
    -------
    list[Any]
        Sanitized copy of the input
    """
    return [_drop_absent_object(v) for v in list_to_sanitize if not _is_absent(v)]


def drop_absent_fields(dict_to_sanitize: dict[str, Any]) -> dict[str, Any]:
    """Drop None-valued keys from a dict, recursing into nested containers.

    Empty dicts and lists are kept: an empty label map is the unit label and an
    empty witness list is still information.

    Parameters
    ----------
    dict_to_sanitize : dict[str, Any]
        Dictionary to sanitize

    Returns
    -------
    dict[str, Any]
        Sanitized copy with stringified keys
    """
    return {
        str(k): _drop_absent_object(v)
        for k, v in dict_to_sanitize.items()
        if not _is_absent(v)
    }


def to_canonical_text(obj: dict | list, pretty: bool = False) -> str:
    """Serialize a report deterministically.

    Parameters
    ----------
    obj : dict | list
        JSON-compatible object; None-valued fields are dropped first
    pretty : bool, optional
        Emit block-style YAML for humans instead of compact JSON, by default False

    Returns
    -------
    str
        Newline-terminated text with sorted keys

    Raises
    ------
    TypeError
        Input object must be a dict or a list.
    """
    if isinstance(obj, dict):
        sanitized = drop_absent_fields(obj)
    elif isinstance(obj, list | tuple):
        sanitized = drop_absent_elements(obj)
    else:
        msg = f"Object must be a dict or a list. Got {type(obj)}: {obj!s}"
        raise TypeError(msg)

    if pretty:
        return yaml.safe_dump(sanitized, sort_keys=True, default_flow_style=False)

    return json.dumps(sanitized, sort_keys=True, separators=(",", ":")) + "\n"
