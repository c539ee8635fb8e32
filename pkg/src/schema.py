"""Schema validation for the documents the lab reads and writes."""
import re
from pathlib import Path

from jsonschema import Draft202012Validator

from src.jsonio import read_json

SCHEMAS_DIR = Path(__file__).parent.parent / "schemas"

KINDS = ("decomposition", "construction_state", "certificate")


class DocumentValidationError(ValueError):
    """A document does not match its schema; ``errors`` holds one line per problem."""

    def __init__(self, kind: str, errors: list[str]):
        self.kind = kind
        self.errors = errors
        super().__init__(f"invalid {kind} document: " + "; ".join(errors[:5]))


def get_latest_schema_version(kind: str) -> int:
    """
    Find the latest schema version number for a document kind.

    Returns:
        Latest version number (e.g., 1, 2, 3), 0 if none exists
    """
    pattern = re.compile(rf"{re.escape(kind)}\.v(\d+)\.schema\.json$")
    max_version = 0
    for path in SCHEMAS_DIR.glob(f"{kind}.v*.schema.json"):
        match = pattern.search(path.name)
        if match:
            max_version = max(max_version, int(match.group(1)))
    return max_version


def get_schema_path(kind: str, version: int | None = None) -> Path:
    if kind not in KINDS:
        raise ValueError(f"unknown document kind {kind!r}")
    if version is None:
        version = get_latest_schema_version(kind)
    return SCHEMAS_DIR / f"{kind}.v{version}.schema.json"


def load_schema(kind: str, version: int | None = None) -> dict:
    return read_json(get_schema_path(kind, version))


def validate_document(kind: str, data: dict, schema: dict | None = None) -> list[str]:
    """
    Validate a document against the schema of its kind.

    Returns:
        List of error messages. Empty list means validation passed.
    """
    if schema is None:
        schema = load_schema(kind)
    validator = Draft202012Validator(schema)
    errors = []
    for error in validator.iter_errors(data):
        path = ".".join(str(p) for p in error.path) if error.path else "(root)"
        errors.append(f"{path}: {error.message}")
    return errors


def require_valid(kind: str, data: dict) -> dict:
    """Return data unchanged, or raise DocumentValidationError."""
    errors = validate_document(kind, data)
    if errors:
        raise DocumentValidationError(kind, errors)
    return data
