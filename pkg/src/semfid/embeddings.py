"""Word vectors loaded from text files, and cosine similarity over term sets.

The file layout is the common word2vec/GloVe text format::

    [count dim]
    token v1 v2 ... vdim

Terms are sequences of tokens (a detector label such as "Cellular Telephone"
is one term with two tokens). A term's vector is the mean of its
in-vocabulary token vectors, and a set's vector is the mean of its
resolvable term vectors, so every term weighs the same.
"""

import math
import re
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from semfid._io import iter_text_lines, source_name
from semfid.errors import DimMismatch, EmptyTable, LengthMismatch, MalformedLine

_FIELD_SEP = re.compile(r"[ \t]+")


@dataclass(frozen=True)
class EmbeddingTable:
    """Immutable token -> vector map.

    Vectors live as rows of one read-only ``float64`` matrix; ``index`` maps
    each lowercase token to its row.
    """

    dim: int
    index: "MappingProxyType[str, int]"
    matrix: np.ndarray = field(repr=False)

    @classmethod
    def from_dict(cls, entries, dim=None):
        tokens = list(entries)
        if dim is None:
            if not tokens:
                raise EmptyTable("cannot infer dim from an empty mapping")
            dim = len(entries[tokens[0]])
        matrix = np.zeros((len(tokens), dim), dtype=np.float64)
        index = {}
        for row, token in enumerate(tokens):
            vec = np.asarray(entries[token], dtype=np.float64)
            if vec.shape != (dim,):
                raise DimMismatch(f"vector for {token!r} has shape {vec.shape}, expected ({dim},)")
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"vector for {token!r} has non-finite components")
            key = token.lower()
            if _FIELD_SEP.search(key) or not key:
                raise ValueError(f"invalid token {token!r}")
            matrix[row] = vec
            index[key] = row
        return cls._build(dim, index, matrix)

    @classmethod
    def empty(cls, dim):
        return cls._build(dim, {}, np.zeros((0, dim)))

    @classmethod
    def _build(cls, dim, index, matrix):
        if dim < 1:
            raise ValueError("dim must be >= 1")
        # drop rows shadowed by later duplicates
        rows = sorted(index.values())
        if len(rows) != matrix.shape[0]:
            remap = {old: new for new, old in enumerate(rows)}
            matrix = matrix[rows]
            index = {tok: remap[row] for tok, row in index.items()}
        matrix = np.ascontiguousarray(matrix, dtype=np.float64)
        matrix.setflags(write=False)
        return cls(dim=dim, index=MappingProxyType(dict(index)), matrix=matrix)

    def __len__(self):
        return len(self.index)

    def __contains__(self, token):
        return token.lower() in self.index

    @property
    def entries(self):
        """Mapping view ``token -> vector`` (built on demand)."""
        return {tok: self.matrix[row] for tok, row in self.index.items()}

    def scaled(self, factor):
        """Copy of the table with every vector multiplied by ``factor``."""
        return self._build(self.dim, dict(self.index), self.matrix * factor)


def _parse_floats(fields, source, line_no):
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise MalformedLine("non-numeric vector component", source, line_no) from None
    if not all(math.isfinite(v) for v in values):
        raise MalformedLine("non-finite vector component", source, line_no)
    return values


def _to_matrix(rows, line_nos, dim, name):
    # one bulk conversion; rescan row by row only to locate a bad line
    try:
        matrix = np.array([v for row in rows for v in row], dtype=np.float64)
    except ValueError:
        for row, line_no in zip(rows, line_nos):
            _parse_floats(row, name, line_no)
        raise
    matrix = matrix.reshape(len(rows), dim)
    finite = np.isfinite(matrix).all(axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise MalformedLine("non-finite vector component", name, line_nos[bad])
    return matrix


def _split_fields(text):
    # space/tab only: some public tables have tokens holding other whitespace
    fields = text.replace("\t", " ").strip(" ").split(" ")
    if "" in fields:
        fields = [f for f in fields if f]
    return fields


def _is_int(text):
    try:
        int(text)
    except ValueError:
        return False
    return True


def load_embeddings(source, expected_dim=None, name=None):
    """Parse a text vector file into an :class:`EmbeddingTable`.

    A first line of exactly two integers ``count dim`` is treated as a header
    when the next row has ``dim + 1`` fields; otherwise it is data. Tokens are
    lowercased and later duplicates overwrite earlier ones.

    Raises :class:`MalformedLine` on a bad row, :class:`EmptyTable` when no
    rows parse, and :class:`DimMismatch` when ``expected_dim`` disagrees with
    the inferred dimension.
    """
    name = name or source_name(source)
    lines = ((no, text) for no, text in iter_text_lines(source) if text.strip())

    dim = None
    index = {}
    rows = []
    line_nos = []
    candidate = None  # (line_no, fields) of a possible "count dim" header
    for line_no, text in lines:
        fields = _split_fields(text)
        if dim is None:
            if candidate is None:
                if len(fields) == 2 and _is_int(fields[0]) and _is_int(fields[1]):
                    candidate = (line_no, fields)
                    continue
                dim = len(fields) - 1
                if dim < 1:
                    raise MalformedLine("row has a token but no vector components", name, line_no)
            else:
                h_line, h_fields = candidate
                if len(fields) == 2 and int(h_fields[1]) != 1:
                    # followed by another two-field row: it was a dim-1 data row
                    dim = 1
                    _add_row(h_fields, h_line, name, index, rows, line_nos, dim)
                else:
                    dim = int(h_fields[1])
                    if dim < 1:
                        raise MalformedLine("header declares a non-positive dim", name, h_line)
        _add_row(fields, line_no, name, index, rows, line_nos, dim)

    if dim is None and candidate is not None:
        # a lone two-field line is a dim-1 row
        dim = 1
        _add_row(candidate[1], candidate[0], name, index, rows, line_nos, dim)

    if not rows:
        raise EmptyTable(f"{name}: no vectors found")
    if expected_dim is not None and expected_dim != dim:
        raise DimMismatch(f"{name}: expected dim {expected_dim}, found {dim}")
    return EmbeddingTable._build(dim, index, _to_matrix(rows, line_nos, dim, name))


def _add_row(fields, line_no, name, index, rows, line_nos, dim):
    if len(fields) != dim + 1:
        raise MalformedLine(
            f"expected {dim} vector components, found {len(fields) - 1}", name, line_no
        )
    rows.append(fields[1:])
    line_nos.append(line_no)
    index[fields[0].lower()] = len(rows) - 1


def dump_embeddings(table, stream, header=False):
    """Write ``table`` in the text vector format; floats round-trip exactly."""
    if header:
        stream.write(f"{len(table)} {table.dim}\n")
    for token, row in table.index.items():
        stream.write(token + " " + " ".join(repr(float(v)) for v in table.matrix[row]) + "\n")


def lookup(table, token):
    row = table.index.get(token.lower())
    return None if row is None else table.matrix[row]


def phrase_vector(table, tokens):
    """Mean vector of the in-vocabulary ``tokens``; ``None`` if none resolve."""
    rows = [table.index[t] for t in (tok.lower() for tok in tokens) if t in table.index]
    if not rows:
        return None
    return table.matrix[rows].mean(axis=0)


def set_mean_vector(table, terms):
    """Mean of per-term phrase vectors, each resolvable term weighted equally."""
    vecs = [v for v in (phrase_vector(table, term) for term in terms) if v is not None]
    if not vecs:
        return None
    return np.mean(vecs, axis=0)


def cosine(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
