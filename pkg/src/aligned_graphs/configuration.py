"""Input documents and guard limits.

Graph, weighted-graph and weight documents may be written as JSON, TOML or YAML;
the loader is selected by file suffix. Guard limits keep exhaustive searches at
desk scale and can be tuned from the environment.

Example:
-------
    data = read_document("tests/data/graphs/banana_xy.json")
    limits = Limits.from_env()

Notes:
-----
Environment variables use the ``ALIGNED_GRAPHS_`` prefix, e.g.
``ALIGNED_GRAPHS_CIRCUIT_EDGES=14``. An optional ``.env`` file in the working
directory is loaded first.

"""

import asyncio
import json
import logging
import os
from collections import defaultdict
from pathlib import Path

import aiofiles
import tomli
import yaml
from dotenv import load_dotenv
from pydantic import PositiveInt, dataclasses, validate_call

from aligned_graphs.validation import DocumentError

ENV_PREFIX = "ALIGNED_GRAPHS_"


def _json_position(e: json.JSONDecodeError) -> str:
    return f"line {e.lineno}, column {e.colno}: {e.msg}"


def _yaml_position(e: yaml.YAMLError) -> str:
    mark = getattr(e, "problem_mark", None)
    if mark is None:
        return str(e)
    return f"line {mark.line + 1}, column {mark.column + 1}: {getattr(e, 'problem', e)}"


@validate_call
async def get_document_from_file(document_path: Path | str) -> dict:
    """Load a document into a dictionary. Supported formats are JSON, YAML, and TOML.

    Parameters
    ----------
    document_path : Path | str
        Path to the document

    Returns
    -------
    dict
        The parsed document

    Raises
    ------
    DocumentError
        The file is missing, unreadable, of an unsupported type, not a mapping at
        top level, or malformed. Parse errors carry line and column.
    """
    loaders = defaultdict(
        lambda: None,
        {
            ".json": json.loads,
            ".toml": tomli.loads,
            ".yaml": yaml.safe_load,
            ".yml": yaml.safe_load,
        },
    )

    if isinstance(document_path, str):
        document_path = Path(document_path)

    loader = loaders[document_path.suffix.lower()]
    if loader is None:
        msg = f"Unsupported file type: {document_path.as_posix()}"
        raise DocumentError(msg)

    try:
        async with aiofiles.open(document_path, "r") as document_file:
            contents = await document_file.read()
    except FileNotFoundError as e:
        msg = f"File not found: {document_path.as_posix()}"
        raise DocumentError(msg) from e
    except OSError as e:
        msg = f"Could not open file: {document_path.as_posix()}"
        raise DocumentError(msg) from e

    try:
        document = loader(contents)
    except json.JSONDecodeError as e:
        msg = f"File is not valid JSON: {document_path.as_posix()} at {_json_position(e)}"
        raise DocumentError(msg) from e
    except yaml.YAMLError as e:
        msg = f"File is not valid YAML: {document_path.as_posix()} at {_yaml_position(e)}"
        raise DocumentError(msg) from e
    except tomli.TOMLDecodeError as e:
        msg = f"File is not valid TOML: {document_path.as_posix()}: {e}"
        raise DocumentError(msg) from e

    if not isinstance(document, dict):
        msg = f"Expected a mapping at top level of {document_path.as_posix()}, got {type(document).__name__}"
        raise DocumentError(msg)

    return document


def read_document(document_path: Path | str) -> dict:
    """Load a document synchronously. See ``get_document_from_file``."""
    return asyncio.run(get_document_from_file(document_path))


@dataclasses.dataclass(frozen=True)
class Limits:
    """Guards on exhaustive searches. A value of None disables that guard.

    Attributes
    ----------
    circuit_edges
        Maximum edge count for circuit enumeration and the brute-force alignment test
    strata_parameters
        Maximum parameter count when every stratum is enumerated
    coset_order
        Maximum component group order for the degree bound search
    degree_ball
        Maximum number of degree-zero multidegrees in a sup-norm ball searched
        by the degree bound
    coset_enumeration
        Maximum quotient order for listing coset representatives
    kirchhoff_edges
        Maximum edge count for spanning tree enumeration
    dominance_dimension
        Maximum dimension for the exhaustive dominance check
    """

    circuit_edges: PositiveInt | None = 12
    strata_parameters: PositiveInt | None = 16
    coset_order: PositiveInt | None = 10**5
    degree_ball: PositiveInt | None = 10**5
    coset_enumeration: PositiveInt | None = 10**6
    kirchhoff_edges: PositiveInt | None = 10
    dominance_dimension: PositiveInt | None = 6

    @classmethod
    def unlimited(cls) -> "Limits":
        """Return limits with every guard disabled."""
        return cls(
            circuit_edges=None,
            strata_parameters=None,
            coset_order=None,
            degree_ball=None,
            coset_enumeration=None,
            kirchhoff_edges=None,
            dominance_dimension=None,
        )

    @classmethod
    def from_env(cls, dotenv_path: Path | str | None = None) -> "Limits":
        """Build limits from ``ALIGNED_GRAPHS_<FIELD>`` environment variables.

        Parameters
        ----------
        dotenv_path : Path | str | None, optional
            .env file to load before reading the environment, by default the
            nearest one found by python-dotenv

        Returns
        -------
        Limits
            Defaults overridden by whatever the environment sets
        """
        log = logging.getLogger(__name__)

        if load_dotenv(dotenv_path=dotenv_path):
            log.info("Loaded environment variables from file")

        overrides = {}
        for field in cls.__dataclass_fields__:
            if (value := os.environ.get(f"{ENV_PREFIX}{field.upper()}")) is not None:
                overrides[field] = int(value)
                log.info(f"Limit {field} set to {value} from environment")

        return cls(**overrides)


DEFAULT_LIMITS = Limits()
