"""Binary linear algebra on packed machine words.

Vectors over GF(2) are stored as little-endian ``uint64`` words so that XOR,
AND, and popcount run word-parallel.  Every vector and matrix carries optional
basis labels (e.g. ``"qubits"``, ``"meas_edges"``); operations that combine
two objects check the labels first, which catches index-space mix-ups at the
boundary instead of deep inside a decoder loop.

Row reduction is done once per matrix by :class:`Echelon`, which keeps a
record of how each reduced row was assembled from the original rows.  That
record is what lets :func:`solve` hand back an explicit witness and lets
repeated membership tests reuse a single elimination.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

_WORD_BITS = 64

_BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)

_HAS_BITWISE_COUNT = hasattr(np, "bitwise_count")


def _n_words(n_bits: int) -> int:
    return (n_bits + _WORD_BITS - 1) // _WORD_BITS


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array (last axis = bits) into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    pad = (-packed.shape[-1]) % 8
    if pad:
        pad_shape = packed.shape[:-1] + (pad,)
        packed = np.concatenate([packed, np.zeros(pad_shape, dtype=np.uint8)], axis=-1)
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def _unpack_bits(words: np.ndarray, n_bits: int) -> np.ndarray:
    """Inverse of :func:`_pack_bits`; returns a 0/1 uint8 array."""
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, count=n_bits, bitorder="little")


def _popcount(words: np.ndarray) -> np.ndarray:
    """Per-element popcount of a uint64 array."""
    if _HAS_BITWISE_COUNT:
        return np.bitwise_count(words)
    as_bytes = np.ascontiguousarray(words.astype("<u8")).view(np.uint8)
    counts = _BYTE_POPCOUNT[as_bytes]
    return counts.reshape(words.shape + (8,)).sum(axis=-1, dtype=np.int64)


def _check_same_basis(a: Optional[str], b: Optional[str], context: str) -> None:
    if a is not None and b is not None and a != b:
        raise ValueError(f"{context}: basis mismatch ({a!r} vs {b!r})")


class BitVec:
    """Immutable fixed-length bit vector with an optional basis label."""

    __slots__ = ("n", "basis", "_words")

    def __init__(self, n: int, basis: Optional[str] = None, _words: Optional[np.ndarray] = None):
        if n < 0:
            raise ValueError("BitVec length must be non-negative")
        self.n = int(n)
        self.basis = basis
        if _words is None:
            _words = np.zeros(_n_words(self.n), dtype=np.uint64)
        else:
            _words = np.asarray(_words, dtype=np.uint64)
            if _words.shape != (_n_words(self.n),):
                raise ValueError("word buffer does not match declared length")
        _words.flags.writeable = False
        self._words = _words

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, n: int, basis: Optional[str] = None) -> "BitVec":
        return cls(n, basis)

    @classmethod
    def from_bits(cls, bits: Iterable[int], basis: Optional[str] = None) -> "BitVec":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("from_bits expects a 1-D sequence of 0/1")
        if arr.size and arr.max() > 1:
            raise ValueError("from_bits entries must be 0 or 1")
        return cls(arr.size, basis, _pack_bits(arr))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int], basis: Optional[str] = None) -> "BitVec":
        bits = np.zeros(n, dtype=np.uint8)
        idx = np.asarray(list(indices), dtype=np.intp)
        if idx.size:
            if idx.min() < 0 or idx.max() >= n:
                raise IndexError("support index out of range")
            np.bitwise_xor.at(bits, idx, 1)  # repeated indices cancel, as XOR demands
        return cls(n, basis, _pack_bits(bits))

    # -- views ------------------------------------------------------------

    @property
    def words(self) -> np.ndarray:
        """Read-only packed uint64 words (little-endian bit order)."""
        return self._words

    def to_bits(self) -> np.ndarray:
        return _unpack_bits(self._words, self.n)

    def support(self) -> np.ndarray:
        """Sorted indices of the set bits."""
        return np.flatnonzero(self.to_bits())

    def weight(self) -> int:
        return int(_popcount(self._words).sum())

    def is_zero(self) -> bool:
        return not self._words.any()

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        i = int(i)
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError("bit index out of range")
        return int((self._words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    # -- algebra ----------------------------------------------------------

    def _require_compatible(self, other: "BitVec", context: str) -> None:
        if not isinstance(other, BitVec):
            raise TypeError(f"{context}: expected BitVec, got {type(other).__name__}")
        if self.n != other.n:
            raise ValueError(f"{context}: length mismatch ({self.n} vs {other.n})")
        _check_same_basis(self.basis, other.basis, context)

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._require_compatible(other, "BitVec XOR")
        return BitVec(self.n, self.basis or other.basis, self._words ^ other._words)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._require_compatible(other, "BitVec AND")
        return BitVec(self.n, self.basis or other.basis, self._words & other._words)

    def dot(self, other: "BitVec") -> int:
        """GF(2) inner product: parity of the overlap."""
        self._require_compatible(other, "BitVec dot")
        return int(_popcount(self._words & other._words).sum()) & 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.n, self._words.tobytes()))

    def __repr__(self) -> str:
        label = f", basis={self.basis!r}" if self.basis else ""
        if self.n <= 64:
            body = "".join(str(b) for b in self.to_bits())
            return f"BitVec('{body}'{label})"
        return f"BitVec(n={self.n}, weight={self.weight()}{label})"


class BinMatrix:
    """Immutable binary matrix: packed rows over a shared column basis."""

    __slots__ = ("n_rows", "n_cols", "row_basis", "col_basis", "_words")

    def __init__(
        self,
        n_rows: int,
        n_cols: int,
        row_basis: Optional[str] = None,
        col_basis: Optional[str] = None,
        _words: Optional[np.ndarray] = None,
    ):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.row_basis = row_basis
        self.col_basis = col_basis
        if _words is None:
            _words = np.zeros((self.n_rows, _n_words(self.n_cols)), dtype=np.uint64)
        else:
            _words = np.asarray(_words, dtype=np.uint64)
            if _words.shape != (self.n_rows, _n_words(self.n_cols)):
                raise ValueError("word buffer does not match declared shape")
        _words.flags.writeable = False
        self._words = _words

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[BitVec],
        n_cols: Optional[int] = None,
        row_basis: Optional[str] = None,
        col_basis: Optional[str] = None,
    ) -> "BinMatrix":
        if not rows:
            if n_cols is None:
                raise ValueError("from_rows needs n_cols when no rows are given")
            return cls(0, n_cols, row_basis, col_basis)
        n = rows[0].n
        if n_cols is not None and n_cols != n:
            raise ValueError("n_cols disagrees with row length")
        words = np.empty((len(rows), _n_words(n)), dtype=np.uint64)
        for i, r in enumerate(rows):
            if r.n != n:
                raise ValueError("rows must share one column basis size")
            _check_same_basis(r.basis, col_basis or rows[0].basis, "BinMatrix.from_rows")
            words[i] = r.words
        return cls(len(rows), n, row_basis, col_basis or rows[0].basis, words)

    @classmethod
    def from_dense(
        cls,
        a: np.ndarray,
        row_basis: Optional[str] = None,
        col_basis: Optional[str] = None,
    ) -> "BinMatrix":
        a = np.asarray(a, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError("from_dense expects a 2-D array")
        if a.size and a.max() > 1:
            raise ValueError("from_dense entries must be 0 or 1")
        if a.shape[0] == 0:
            return cls(0, a.shape[1], row_basis, col_basis)
        return cls(a.shape[0], a.shape[1], row_basis, col_basis, _pack_bits(a))

    @classmethod
    def identity(cls, n: int, basis: Optional[str] = None) -> "BinMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8), basis, basis)

    @classmethod
    def zeros(
        cls,
        n_rows: int,
        n_cols: int,
        row_basis: Optional[str] = None,
        col_basis: Optional[str] = None,
    ) -> "BinMatrix":
        return cls(n_rows, n_cols, row_basis, col_basis)

    @classmethod
    def vstack(cls, mats: Sequence["BinMatrix"]) -> "BinMatrix":
        if not mats:
            raise ValueError("vstack needs at least one matrix")
        n_cols = mats[0].n_cols
        col_basis = mats[0].col_basis
        for m in mats[1:]:
            if m.n_cols != n_cols:
                raise ValueError("vstack: column counts differ")
            _check_same_basis(m.col_basis, col_basis, "BinMatrix.vstack")
        words = np.vstack([m._words for m in mats])
        return cls(sum(m.n_rows for m in mats), n_cols, None, col_basis, words)

    @classmethod
    def hstack(cls, mats: Sequence["BinMatrix"]) -> "BinMatrix":
        if not mats:
            raise ValueError("hstack needs at least one matrix")
        n_rows = mats[0].n_rows
        row_basis = mats[0].row_basis
        for m in mats[1:]:
            if m.n_rows != n_rows:
                raise ValueError("hstack: row counts differ")
            _check_same_basis(m.row_basis, row_basis, "BinMatrix.hstack")
        dense = np.concatenate([m.to_dense() for m in mats], axis=1)
        return cls.from_dense(dense, row_basis, None)

    # -- views ------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.n_rows, self.n_cols)

    @property
    def words(self) -> np.ndarray:
        return self._words

    def row(self, i: int) -> BitVec:
        return BitVec(self.n_cols, self.col_basis, self._words[i].copy())

    def rows(self) -> Iterable[BitVec]:
        for i in range(self.n_rows):
            yield self.row(i)

    def to_dense(self) -> np.ndarray:
        if self.n_rows == 0:
            return np.zeros((0, self.n_cols), dtype=np.uint8)
        return _unpack_bits(self._words, self.n_cols)

    def row_weights(self) -> np.ndarray:
        return _popcount(self._words).sum(axis=1).astype(np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._words, other._words))

    def __hash__(self) -> int:
        return hash((self.shape, self._words.tobytes()))

    def __repr__(self) -> str:
        rb = f", row_basis={self.row_basis!r}" if self.row_basis else ""
        cb = f", col_basis={self.col_basis!r}" if self.col_basis else ""
        return f"BinMatrix({self.n_rows}x{self.n_cols}{rb}{cb})"

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "BinMatrix":
        return BinMatrix.from_dense(self.to_dense().T, self.col_basis, self.row_basis)

    def matvec(self, x: BitVec) -> BitVec:
        """Matrix-vector product over GF(2): bit i is parity(row_i AND x)."""
        if not isinstance(x, BitVec):
            raise TypeError("matvec expects a BitVec")
        if x.n != self.n_cols:
            raise ValueError(f"matvec: length mismatch ({self.n_cols} cols vs {x.n})")
        _check_same_basis(self.col_basis, x.basis, "BinMatrix.matvec")
        if self.n_rows == 0:
            return BitVec(0, self.row_basis)
        overlap = self._words & x.words[None, :]
        parities = (_popcount(overlap).sum(axis=1) & 1).astype(np.uint8)
        return BitVec(self.n_rows, self.row_basis, _pack_bits(parities))

    def matmat(self, other: "BinMatrix") -> "BinMatrix":
        """Matrix product over GF(2): row i of the result XORs other's rows
        selected by the support of self's row i."""
        if self.n_cols != other.n_rows:
            raise ValueError(
                f"matmat: inner dimensions differ ({self.n_cols} vs {other.n_rows})"
            )
        _check_same_basis(self.col_basis, other.row_basis, "BinMatrix.matmat")
        out = np.zeros((self.n_rows, _n_words(other.n_cols)), dtype=np.uint64)
        dense_left = self.to_dense()
        for i in range(self.n_rows):
            sel = np.flatnonzero(dense_left[i])
            if sel.size:
                out[i] = np.bitwise_xor.reduce(other._words[sel], axis=0)
        return BinMatrix(self.n_rows, other.n_cols, self.row_basis, other.col_basis, out)

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            return self.matvec(other)
        if isinstance(other, BinMatrix):
            return self.matmat(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self._words.any()


class Echelon:
    """Reduced row-echelon form of a matrix, with a transformation record.

    ``record[k]`` stores, as a bit vector over the original rows, which rows
    were XORed together to produce reduced row ``k``.  :meth:`express` reduces
    a target vector against the pivots and either returns the combination of
    original rows that reproduces it, or ``None`` when a nonzero residue is
    left.
    """

    __slots__ = (
        "n_rows",
        "n_cols",
        "rank",
        "pivot_cols",
        "row_basis",
        "col_basis",
        "_rows",
        "_record",
    )

    def __init__(self, m: BinMatrix):
        if not isinstance(m, BinMatrix):
            raise TypeError("Echelon expects a BinMatrix")
        self.n_rows = m.n_rows
        self.n_cols = m.n_cols
        self.row_basis = m.row_basis
        self.col_basis = m.col_basis

        rows = m.words.copy()
        record = BinMatrix.identity(self.n_rows).words.copy()
        pivot_cols = []
        r = 0
        one = np.uint64(1)
        for c in range(self.n_cols):
            if r == self.n_rows:
                break
            w, b = c >> 6, np.uint64(c & 63)
            column = (rows[r:, w] >> b) & one
            hits = np.flatnonzero(column)
            if hits.size == 0:
                continue
            pivot = r + int(hits[0])
            if pivot != r:
                rows[[r, pivot]] = rows[[pivot, r]]
                record[[r, pivot]] = record[[pivot, r]]
            elim = np.flatnonzero((rows[:, w] >> b) & one)
            elim = elim[elim != r]
            if elim.size:
                rows[elim] ^= rows[r]
                record[elim] ^= record[r]
            pivot_cols.append(c)
            r += 1

        self.rank = r
        self.pivot_cols = np.asarray(pivot_cols, dtype=np.intp)
        self._rows = rows[: self.rank]
        self._record = record[: self.rank]

    def express(self, v: BitVec) -> Optional[BitVec]:
        """Combination of original rows equal to ``v``, or None if outside the span."""
        if not isinstance(v, BitVec):
            raise TypeError("express expects a BitVec")
        if v.n != self.n_cols:
            raise ValueError(f"express: length mismatch ({self.n_cols} cols vs {v.n})")
        _check_same_basis(self.col_basis, v.basis, "Echelon.express")
        residue = v.words.copy()
        combo = np.zeros(_n_words(self.n_rows), dtype=np.uint64)
        one = np.uint64(1)
        for k in range(self.rank):
            c = int(self.pivot_cols[k])
            if (residue[c >> 6] >> np.uint64(c & 63)) & one:
                residue ^= self._rows[k]
                combo ^= self._record[k]
        if residue.any():
            return None
        return BitVec(self.n_rows, self.row_basis, combo)

    def contains(self, v: BitVec) -> bool:
        return self.express(v) is not None


def rank(m: BinMatrix) -> int:
    """GF(2) row rank, computed by elimination on a copy."""
    return Echelon(m).rank


def solve(m: BinMatrix, b: BitVec) -> Optional[BitVec]:
    """Any x with m·x = b over GF(2), or None if b is outside the column span.

    The zero right-hand side always yields the zero witness.
    """
    if not isinstance(b, BitVec):
        raise TypeError("solve expects a BitVec right-hand side")
    if b.n != m.n_rows:
        raise ValueError(f"solve: m has {m.n_rows} rows but b has length {b.n}")
    _check_same_basis(m.row_basis, b.basis, "gf2.solve")
    x = Echelon(m.transpose()).express(b)
    if x is None:
        return None
    return BitVec(m.n_cols, m.col_basis, x.words)


def in_span(generators: BinMatrix, v: BitVec) -> bool:
    """True iff v is a GF(2) combination of the generator rows."""
    if not isinstance(v, BitVec):
        raise TypeError("in_span expects a BitVec")
    if v.n != generators.n_cols:
        raise ValueError(
            f"in_span: generators have {generators.n_cols} columns but v has length {v.n}"
        )
    _check_same_basis(generators.col_basis, v.basis, "gf2.in_span")
    return Echelon(generators).contains(v)
