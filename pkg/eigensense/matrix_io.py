"""
Text formats for observation matrices, sidecar manifests and plot data.

A matrix file has a header line `K N` followed by K lines of N entries, each
written `re+imj`. Anything after a `#` is a comment and blank lines are
ignored.
"""
from typing import Any, Dict, IO, List, Optional

import os
import json

import numpy as np
import pandas as pd

from . import __version__
from .custom_json_encoder import CustomEncoder
from .errors import ParseError
from .linalg import as_complex_matrix
from .util import atomic_write

CSV_FLOAT_FORMAT = '%.9g'


def format_entry(z: complex) -> str:
    # repr precision so a written matrix reads back bit for bit
    return f'{z.real!r}{z.imag:+}j'


def write_matrix(path: str, Y, header: Optional[str] = None) -> None:
    Y = as_complex_matrix(Y)
    K, N = Y.shape

    def write(f: IO[str]) -> None:
        if header:
            for line in header.splitlines():
                f.write(f'# {line}\n')
        f.write(f'{K} {N}\n')
        for row in Y:
            f.write(' '.join(format_entry(complex(z)) for z in row))
            f.write('\n')

    atomic_write(path, write)


def _parse_entry(token: str, line: int) -> complex:
    try:
        z = complex(token)
    except ValueError:
        raise ParseError(f'cannot read {token!r} as a complex number', line=line)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ParseError(f'entry {token!r} is not finite', line=line)
    return z


def _decode_lines(data: bytes) -> List[str]:
    lines = []
    for number, raw in enumerate(data.splitlines(), start=1):
        try:
            lines.append(raw.decode('utf-8'))
        except UnicodeDecodeError as e:
            raise ParseError(f'invalid UTF-8 at byte {e.start}: {raw[e.start:e.end]!r}',
                             line=number)
    return lines


def read_matrix(path: str) -> np.ndarray:
    with open(path, 'rb') as f:
        lines = _decode_lines(f.read())

    content = []
    for number, raw in enumerate(lines, start=1):
        text = raw.split('#', 1)[0].strip()
        if text:
            content.append((number, text))

    if not content:
        raise ParseError(f'{path} holds no matrix')

    header_line, header = content[0]
    fields = header.split()
    if len(fields) != 2 or not all(f.isdigit() for f in fields):
        raise ParseError(f'expected header "K N", got {header!r}', line=header_line)
    K, N = int(fields[0]), int(fields[1])
    if K < 1 or N < 1:
        raise ParseError(f'K and N must be >= 1, got {K} {N}', line=header_line)

    rows = content[1:]
    if len(rows) != K:
        line = rows[-1][0] if rows else header_line
        raise ParseError(f'expected {K} rows, found {len(rows)}', line=line)

    Y = np.empty((K, N), dtype=np.complex128)
    for i, (number, text) in enumerate(rows):
        tokens = text.split()
        if len(tokens) != N:
            raise ParseError(f'expected {N} entries, found {len(tokens)}', line=number)
        Y[i] = [_parse_entry(token, number) for token in tokens]
    return Y


def manifest_path(matrix_path: str) -> str:
    return f'{matrix_path}.manifest.json'


def write_json(path: str, content: Dict[str, Any]) -> None:
    atomic_write(path, lambda f: json.dump(content, f, cls=CustomEncoder, indent=2))


def write_manifest(matrix_path: str, content: Dict[str, Any]) -> str:
    path = manifest_path(matrix_path)
    write_json(path, {**content, 'version': __version__})
    return path


def read_manifest(matrix_path: str) -> Optional[Dict[str, Any]]:
    path = manifest_path(matrix_path)
    if not os.path.exists(path):
        return None
    with open(path, 'r') as f:
        return json.load(f)


def write_csv(path: str, frame: pd.DataFrame) -> None:
    atomic_write(path, lambda f: frame.to_csv(f, index=False,
                                              float_format=CSV_FLOAT_FORMAT,
                                              na_rep='nan'))


def write_dat(path: str, frame: pd.DataFrame) -> None:
    """ gnuplot flavour: '#' header, whitespace separated, blank line between
    blocks of the first column """

    def write(f: IO[str]) -> None:
        columns: List[str] = list(frame.columns)
        f.write('# ' + ' '.join(columns) + '\n')
        previous = None
        for _, row in frame.iterrows():
            key = row[columns[0]]
            if previous is not None and key != previous:
                f.write('\n')
            previous = key
            f.write(' '.join(_dat_value(row[c]) for c in columns) + '\n')

    atomic_write(path, write)


def _dat_value(value) -> str:
    if isinstance(value, str):
        return value.replace(' ', '_')
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return CSV_FLOAT_FORMAT % float(value)
