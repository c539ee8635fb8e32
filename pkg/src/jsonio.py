"""JSON encoding shared by the document codecs."""
from fractions import Fraction
from pathlib import Path

import numpy as np
import orjson

# Integers beyond the double-precision safe range are written as strings.
SAFE_INTEGER = 2**53


def encode_int(n: int) -> int | str:
    return n if abs(n) < SAFE_INTEGER else str(n)


def decode_int(value: int | str) -> int:
    return int(value)


def encode_real(x) -> float | int | list:
    """Encode a real scalar; rationals become [numerator, denominator]."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return encode_int(x.numerator)
        return [encode_int(x.numerator), encode_int(x.denominator)]
    if isinstance(x, (int, np.integer)):
        return encode_int(int(x))
    return float(x)


def decode_real(value) -> Fraction | float:
    if isinstance(value, list):
        return Fraction(decode_int(value[0]), decode_int(value[1]))
    if isinstance(value, str) or isinstance(value, int):
        return Fraction(decode_int(value))
    return float(value)


def encode_scalar(z) -> list:
    """Encode a complex or real scalar as [re, im]."""
    if isinstance(z, (Fraction, int, np.integer)):
        return [encode_real(z), 0]
    z = complex(z)
    return [encode_real(z.real), encode_real(z.imag)]


def decode_scalar(re, im) -> Fraction | complex:
    real = decode_real(re)
    imag = decode_real(im)
    if imag == 0 and isinstance(real, Fraction):
        return real
    return complex(float(real), float(imag))


def encode_matrix(X: np.ndarray) -> list:
    """Encode a complex matrix as nested [re, im] pairs, row major."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(X, dtype=complex)]


def decode_matrix(rows: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def dumps(document) -> bytes:
    return orjson.dumps(document, option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)


def loads(data: bytes | str):
    return orjson.loads(data)


def write_json(document, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps(document))
    return path


def read_json(path: Path):
    return loads(Path(path).read_bytes())
