"""The integral Lorentz group: integer 4x4 matrices with L^T eta L = eta.

Generated by four involutions: S1 and S2 permute spatial axes, S3 flips
the z axis, and S4 is the Lorentzian reflection that mixes time into all
three spatial directions. Words in these generators reach every
orthochronous element; parity products P1 = S1 S2 S3 S2 S1,
P2 = S2 S3 S2, P3 = S3 flip the x, y, z axis respectively.

The published table for S4 contains a sign slip: as printed, the Minkowski
inner product of its first and last columns is 2, so the matrix is not in
the group. Flipping the row-2, column-3 entry (0-based) from +1 to -1 is
the minimal single-entry edit restoring L^T eta L = eta, and that
corrected matrix is what ``generator("S4")`` returns. The verbatim table
entry stays available via ``printed_s4()`` for the documented failing
check.

Everything here is exact integer arithmetic; Python integers make
overflow impossible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, InternalInvariantError

Entries = tuple[tuple[int, int, int, int], ...]

ETA = (1, -1, -1, -1)

GENERATOR_LETTERS = ("S1", "S2", "S3", "S4")
PARITY_LETTERS = ("P1", "P2", "P3")
ALPHABET = GENERATOR_LETTERS + PARITY_LETTERS

#: Safety bound for ball enumeration word length.
MAX_BALL_WORD_LEN = 12

_IDENTITY: Entries = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))

_S1: Entries = ((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 0), (0, 0, 0, 1))
_S2: Entries = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))
_S3: Entries = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1))
_S4: Entries = ((2, 1, 1, 1), (-1, 0, -1, -1), (-1, -1, 0, -1), (-1, -1, -1, 0))
_S4_PRINTED: Entries = ((2, 1, 1, 1), (-1, 0, -1, -1), (-1, -1, 0, 1), (-1, -1, -1, 0))


def _as_entries(m) -> Entries:
    rows = tuple(tuple(int(x) for x in row) for row in m)
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise DomainError("expected a 4x4 integer matrix")
    return rows


def _mat_mul(a: Entries, b: Entries) -> Entries:
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4)
    )


def minkowski_square(v: Sequence[int]) -> int:
    if len(v) != 4:
        raise DomainError("expected a 4-vector")
    return v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3]


def preserves_metric(m) -> bool:
    """True iff m^T eta m = eta holds exactly in integer arithmetic."""
    entries = m.entries if isinstance(m, IntLorentzMatrix) else _as_entries(m)
    for i in range(4):
        for j in range(i, 4):
            gram = sum(ETA[r] * entries[r][i] * entries[r][j] for r in range(4))
            if gram != (ETA[i] if i == j else 0):
                return False
    return True


def metric_gram_defect(m, i: int, j: int) -> int:
    """The Minkowski inner product of columns i and j minus its required value."""
    entries = m.entries if isinstance(m, IntLorentzMatrix) else _as_entries(m)
    gram = sum(ETA[r] * entries[r][i] * entries[r][j] for r in range(4))
    return gram - (ETA[i] if i == j else 0)


@dataclass(frozen=True)
class IntLorentzMatrix:
    """A certified element of the integral Lorentz group."""

    entries: Entries

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_entries(self.entries))
        if not preserves_metric(self.entries):
            raise DomainError("matrix does not preserve the Minkowski form")

    def __matmul__(self, other: "IntLorentzMatrix") -> "IntLorentzMatrix":
        return IntLorentzMatrix(_mat_mul(self.entries, other.entries))

    @property
    def is_orthochronous(self) -> bool:
        return self.entries[0][0] >= 1

    def inverse(self) -> "IntLorentzMatrix":
        e = self.entries
        inv = tuple(
            tuple(ETA[i] * e[j][i] * ETA[j] for j in range(4)) for i in range(4)
        )
        return IntLorentzMatrix(inv)

    def determinant(self) -> int:
        return _det4(self.entries)

    def flat(self) -> tuple[int, ...]:
        return tuple(x for row in self.entries for x in row)


def _det3(m, r0, r1, r2, c0, c1, c2) -> int:
    return (
        m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1])
        - m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0])
        + m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0])
    )


def _det4(m: Entries) -> int:
    total = 0
    cols = (0, 1, 2, 3)
    for j, sign in zip(cols, (1, -1, 1, -1)):
        rest = tuple(c for c in cols if c != j)
        total += sign * m[0][j] * _det3(m, 1, 2, 3, *rest)
    return total


IDENTITY = IntLorentzMatrix(_IDENTITY)

_GENERATORS = {"S1": _S1, "S2": _S2, "S3": _S3, "S4": _S4}


def generator(name: str) -> IntLorentzMatrix:
    """One of the four group generators (S4 with the sign correction)."""
    if name not in _GENERATORS:
        raise DomainError(f"unknown generator {name!r}; expected one of {GENERATOR_LETTERS}")
    return IntLorentzMatrix(_GENERATORS[name])


def printed_s4() -> Entries:
    """S4 exactly as published; fails preserves_metric with Gram defect 2."""
    return _S4_PRINTED


def parity_products() -> tuple[IntLorentzMatrix, IntLorentzMatrix, IntLorentzMatrix]:
    """P1 = S1 S2 S3 S2 S1, P2 = S2 S3 S2, P3 = S3: single-axis spatial flips."""
    s1, s2, s3 = _S1, _S2, _S3
    p1 = _mat_mul(_mat_mul(s1, _mat_mul(s2, s3)), _mat_mul(s2, s1))
    p2 = _mat_mul(_mat_mul(s2, s3), s2)
    return IntLorentzMatrix(p1), IntLorentzMatrix(p2), IntLorentzMatrix(s3)


_P1, _P2, _P3 = (p.entries for p in parity_products())
_LETTER_MATRICES = {**_GENERATORS, "P1": _P1, "P2": _P2, "P3": _P3}


@dataclass(frozen=True)
class GeneratorWord:
    """An ordered word over {S1..S4, P1..P3}; the empty word is the identity."""

    letters: tuple[str, ...] = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        for letter in letters:
            if letter not in ALPHABET:
                raise DomainError(f"unknown letter {letter!r}; alphabet is {ALPHABET}")
        object.__setattr__(self, "letters", letters)

    def __iter__(self):
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)


def eval_word(word: GeneratorWord | Iterable[str]) -> IntLorentzMatrix:
    """Left-to-right product of the word's letter matrices."""
    letters = word.letters if isinstance(word, GeneratorWord) else tuple(word)
    m = _IDENTITY
    for letter in letters:
        if letter not in _LETTER_MATRICES:
            raise DomainError(f"unknown letter {letter!r}; alphabet is {ALPHABET}")
        m = _mat_mul(m, _LETTER_MATRICES[letter])
    return IntLorentzMatrix(m)


def enumerate_ball(max_word_len: int) -> list[IntLorentzMatrix]:
    """All products of at most max_word_len generators, breadth-first.

    Deduplicated by exact entries and returned in lexicographic entry
    order, so the output is identical across runs and platforms.
    """
    if not (isinstance(max_word_len, int) and max_word_len >= 0):
        raise DomainError("max_word_len must be a non-negative integer")
    if max_word_len > MAX_BALL_WORD_LEN:
        raise DomainError(f"max_word_len {max_word_len} exceeds safety bound {MAX_BALL_WORD_LEN}")
    seen: set[Entries] = {_IDENTITY}
    frontier: list[Entries] = [_IDENTITY]
    for _depth in range(max_word_len):
        new: list[Entries] = []
        for m in frontier:
            for g in (_S1, _S2, _S3, _S4):
                q = _mat_mul(m, g)
                if q not in seen:
                    seen.add(q)
                    new.append(q)
        frontier = new
    ordered = sorted(seen, key=lambda e: tuple(x for row in e for x in row))
    return [IntLorentzMatrix(e) for e in ordered]


def act(m: IntLorentzMatrix, v: Sequence[int]) -> tuple[int, int, int, int]:
    """Exact matrix-vector action on an integer 4-vector."""
    if len(v) != 4:
        raise DomainError("expected a 4-vector")
    vv = tuple(int(x) for x in v)
    e = m.entries
    return tuple(sum(e[i][k] * vv[k] for k in range(4)) for i in range(4))  # type: ignore[return-value]


# --- factorization into the generator normal form -----------------------------

# All 8 parity words, lexicographically ordered as letter tuples; the empty
# word comes first so the chosen prefix is always the smallest enabling one.
_PARITY_WORDS: tuple[tuple[str, ...], ...] = tuple(
    sorted(
        tuple(name for bit, name in zip((1, 2, 4), PARITY_LETTERS) if mask & bit)
        for mask in range(8)
    )
)

_signed_perm_words: dict[Entries, tuple[str, ...]] | None = None


def _signed_permutation_words() -> dict[Entries, tuple[str, ...]]:
    """Shortlex word over {S1, S2, S3} for each of the 48 signed permutations."""
    global _signed_perm_words
    if _signed_perm_words is None:
        table: dict[Entries, tuple[str, ...]] = {_IDENTITY: ()}
        queue = deque([(_IDENTITY, ())])
        while queue:
            m, word = queue.popleft()
            for letter in ("S1", "S2", "S3"):
                q = _mat_mul(m, _GENERATORS[letter])
                if q not in table:
                    table[q] = word + (letter,)
                    queue.append((q, word + (letter,)))
        _signed_perm_words = table
    return _signed_perm_words


def factorize(m: IntLorentzMatrix) -> GeneratorWord:
    """A word in the normal form (parity block, S4)* (signed permutation).

    While the time-time entry exceeds 1, the lexicographically smallest
    parity prefix that lets S4 strictly decrease it is applied; the
    remainder with unit time-time entry is a signed spatial permutation
    resolved by table lookup. The returned word evaluates back to ``m``
    exactly; neither minimality nor uniqueness is claimed.
    """
    if not isinstance(m, IntLorentzMatrix):
        raise DomainError("factorize expects a certified IntLorentzMatrix")
    if not m.is_orthochronous:
        raise DomainError(
            "matrix reverses time orientation; not a word in S1..S4 (all of which are orthochronous)"
        )
    current = m.entries
    word: list[str] = []
    steps = 0
    initial_tt = current[0][0]
    while current[0][0] > 1:
        chosen = None
        for parity_word in _PARITY_WORDS:
            reduced = current
            for letter in parity_word:
                reduced = _mat_mul(_LETTER_MATRICES[letter], reduced)
            candidate = _mat_mul(_S4, reduced)
            if candidate[0][0] < current[0][0]:
                chosen = (parity_word, candidate)
                break
        if chosen is None:
            raise InternalInvariantError(
                f"no parity prefix decreases the time-time entry {current[0][0]}; "
                "this contradicts the reduction argument"
            )
        parity_word, current = chosen
        word.extend(parity_word)
        word.append("S4")
        steps += 1
        if steps > initial_tt:
            raise InternalInvariantError(
                "S4 reduction ran longer than the strict-decrease bound allows"
            )
    tail = _signed_permutation_words().get(current)
    if tail is None:
        raise InternalInvariantError("reduced matrix is not a signed spatial permutation")
    word.extend(tail)
    return GeneratorWord(tuple(word))


# --- serialization -----------------------------------------------------------


def matrix_to_json(m: IntLorentzMatrix) -> list[int]:
    """Row-major list of 16 integers."""
    return list(m.flat())


def matrix_from_json(values: Sequence[int]) -> IntLorentzMatrix:
    values = [int(v) for v in values]
    if len(values) != 16:
        raise DomainError(f"expected 16 integers, got {len(values)}")
    rows = tuple(tuple(values[4 * i : 4 * i + 4]) for i in range(4))
    return IntLorentzMatrix(rows)


def word_to_json(word: GeneratorWord) -> list[str]:
    return list(word.letters)


def word_from_json(letters: Sequence[str]) -> GeneratorWord:
    return GeneratorWord(tuple(letters))
