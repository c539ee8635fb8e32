"""JSON documents for decompositions (schemas/decomposition.v1.schema.json)."""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from src.decomposition.decomposition import MultiplierDecomposition
from src.decomposition.pieces import DiagonalPiece, KernelPiece, TrapezoidPiece
from src.decomposition.stein import basis_decomposition, identity_decomposition, stein
from src.jsonio import decode_int, decode_real, decode_scalar, encode_int, encode_real, encode_scalar, read_json
from src.schema import require_valid

SCHEMA_VERSION = 1


def piece_to_document(piece) -> dict:
    if isinstance(piece, TrapezoidPiece):
        return {"type": "trapezoid", "nodes": [[encode_int(m), encode_real(v)] for m, v in piece.nodes]}
    if isinstance(piece, DiagonalPiece):
        return {"type": "diagonal", "support": [[encode_int(m), *encode_scalar(v)] for m, v in piece.values.items()]}
    if isinstance(piece, KernelPiece):
        return {"type": "kernel",
                "support": [[encode_int(o), encode_int(i), *encode_scalar(v)] for (o, i), v in piece.kernel.items()]}
    raise TypeError(f"cannot serialize piece of type {type(piece).__name__}")


def piece_from_document(doc: dict):
    kind = doc["type"]
    if kind == "trapezoid":
        return TrapezoidPiece(tuple((decode_int(m), Fraction(decode_real(v))) for m, v in doc["nodes"]))
    if kind == "diagonal":
        return DiagonalPiece({decode_int(m): decode_scalar(re, im) for m, re, im in doc["support"]})
    if kind == "kernel":
        return KernelPiece({(decode_int(o), decode_int(i)): decode_scalar(re, im) for o, i, re, im in doc["support"]})
    raise ValueError(f"unknown piece type {kind!r}")


def decomposition_to_document(D: MultiplierDecomposition) -> dict:
    document = {
        "schema_version": SCHEMA_VERSION,
        "name": D.name,
        "pieces": [piece_to_document(p) for p in D.pieces],
    }
    return require_valid("decomposition", document)


def decomposition_from_document(document: dict) -> MultiplierDecomposition:
    require_valid("decomposition", document)
    pieces = tuple(piece_from_document(p) for p in document["pieces"])
    return MultiplierDecomposition(pieces, name=document.get("name", "decomposition"))


BUILTIN = {
    "stein": stein,
    "basis": basis_decomposition,
    "identity": identity_decomposition,
}


def load_decomposition(source: str | Path, size: int | None = None) -> MultiplierDecomposition:
    """
    Load a decomposition from a JSON file, or build one by name.

    "stein" and "basis" take the last piece index as size, "identity" its
    horizon; any other value is read as a path.
    """
    builder = BUILTIN.get(str(source))
    if builder is not None:
        if size is None:
            raise ValueError(f"the {source} decomposition needs a size")
        return builder(size)
    return decomposition_from_document(read_json(Path(source)))
