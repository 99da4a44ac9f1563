"""Coxeter systems realized by integer generalized Cartan matrices.

The space V* has the simple roots alpha_1..alpha_n as basis and the
generator s_i acts by alpha_j -> alpha_j - a_ij alpha_i, where a is the
Cartan matrix.  A bond order m_st is realizable over the integers exactly
when 4 cos^2(pi/m_st) is an integer, which restricts finite orders to
{1, 2, 3, 4, 6}; m_st = 5 is rejected.  Infinite bond order is recorded
as the integer 0 and requires a_st * a_ts >= 4.

Group elements are stored as the pair (canonical reduced word, matrix),
where the canonical word is the ShortLex-least reduced expression.  The
matrix is the element's action on V* in the simple-root basis and is an
integer matrix throughout.  All descent, reflection and Bruhat-order
computations are driven by root signs, so that a violation of the
expected total negativity or positivity of a column is detected rather
than silently accepted (RealizationError).

Words cross the API boundary 0-based as tuples of generator indices and
are serialized 1-based, as digit strings for rank <= 9 and comma
separated otherwise ("", "121", "2,10,3").
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from math import gcd

from .errors import InputError, RealizationError
from .linalg import kernel_basis, rank_dense
from .rationals import QQ

__all__ = [
    "INFINITE",
    "CoxeterSystem",
    "Element",
    "Root",
    "make_system",
    "load_system",
    "normal_form",
    "multiply",
    "right_descents",
    "left_descents",
    "is_reflection",
    "reflection_root",
    "bruhat_leq",
    "bruhat_interval",
    "inversions",
    "element_ball",
    "parse_word",
    "word_str",
    "sort_key",
]

INFINITE = 0  # bond order m_st = infinity

# 4 cos^2(pi/m) for the realizable finite bond orders
_COS2X4 = {2: 0, 3: 1, 4: 2, 6: 3}

_DEFAULT_PAIR = {
    2: (0, 0),
    3: (-1, -1),
    4: (-1, -2),
    6: (-1, -3),
    INFINITE: (-2, -2),
}


def _tupmat(rows):
    return tuple(tuple(int(x) for x in r) for r in rows)


def _matmul(a, b):
    n = len(a)
    rng = range(n)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in rng) for j in rng) for i in rng
    )


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Root:
    """Integer coordinate vector in the simple-root basis of V*.

    `positive` records the sign of the (sign-coherent) coordinate vector;
    mixed signs never form a Root and raise RealizationError upstream.
    """

    coords: tuple
    positive: bool

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _classify_root(coords):
    """Return (primitive coords, positive flag); mixed signs -> None."""
    if all(c == 0 for c in coords):
        return None
    g = 0
    for c in coords:
        g = gcd(g, abs(c))
    coords = tuple(c // g for c in coords)
    if all(c >= 0 for c in coords):
        return coords, True
    if all(c <= 0 for c in coords):
        return tuple(-c for c in coords), False
    return None


@dataclass(frozen=True)
class CoxeterSystem:
    """A Coxeter matrix together with a compatible integer Cartan matrix."""

    rank: int
    coxeter: tuple
    cartan: tuple
    labels: tuple

    @functools.cached_property
    def _gen_matrices(self):
        mats = []
        for i in range(self.rank):
            rows = [list(r) for r in _identity(self.rank)]
            for j in range(self.rank):
                rows[i][j] = (1 if i == j else 0) - self.cartan[i][j]
            mats.append(_tupmat(rows))
        return tuple(mats)

    @functools.cached_property
    def _identity_matrix(self):
        return _identity(self.rank)

    @functools.cached_property
    def identity(self):
        m = self._identity_matrix
        return Element(self, (), m, m)

    @functools.cached_property
    def generators(self):
        out = []
        for i in range(self.rank):
            m = self._gen_matrices[i]
            out.append(Element(self, (i,), m, m))
        return tuple(out)

    def element(self, word):
        return normal_form(self, word)

    def __str__(self):
        return f"CoxeterSystem(rank={self.rank})"


def make_system(coxeter, cartan=None, labels=None) -> CoxeterSystem:
    """Validate a Coxeter matrix and (optional) Cartan matrix.

    Bond order infinity is written 0.  When `cartan` is omitted, each bond
    gets the standard realization: m=2 -> (0,0), m=3 -> (-1,-1),
    m=4 -> (-1,-2), m=6 -> (-1,-3), m=infinity -> (-2,-2).
    """
    n = len(coxeter)
    if n == 0:
        raise InputError("empty Coxeter matrix")
    if any(len(row) != n for row in coxeter):
        raise InputError("Coxeter matrix must be square")
    cox = _tupmat(coxeter)
    for i in range(n):
        if cox[i][i] != 1:
            raise InputError("diagonal Coxeter entries must be 1")
        for j in range(n):
            if cox[i][j] != cox[j][i]:
                raise InputError("Coxeter matrix must be symmetric")
            if i != j:
                m = cox[i][j]
                if m == 5 or (m not in _COS2X4 and m != INFINITE):
                    raise InputError(
                        f"bond order {m} has no integer Cartan realization; "
                        "supported orders are 2, 3, 4, 6 and 0 (infinity)"
                    )
    if cartan is None:
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = 2
            for j in range(i + 1, n):
                a, b = _DEFAULT_PAIR[cox[i][j]]
                rows[i][j], rows[j][i] = a, b
        car = _tupmat(rows)
    else:
        car = _tupmat(cartan)
        if len(car) != n or any(len(r) != n for r in car):
            raise InputError("Cartan matrix shape must match the Coxeter matrix")
        for i in range(n):
            if car[i][i] != 2:
                raise InputError("diagonal Cartan entries must be 2")
            for j in range(n):
                if i != j:
                    if car[i][j] > 0:
                        raise InputError("off-diagonal Cartan entries must be <= 0")
                    m = cox[i][j]
                    prod = car[i][j] * car[j][i]
                    if m == INFINITE:
                        if prod < 4:
                            raise InputError(
                                "infinite bond order needs a_st*a_ts >= 4"
                            )
                    elif prod != _COS2X4[m]:
                        raise InputError(
                            f"bond order {m} needs a_st*a_ts = {_COS2X4[m]}, "
                            f"got {prod}"
                        )
    if labels is None:
        labels = tuple(f"s{i + 1}" for i in range(n))
    else:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InputError("wrong number of generator labels")
    return CoxeterSystem(n, cox, car, labels)


def load_system(path) -> CoxeterSystem:
    """Read a system from a JSON file {"rank", "coxeter", "cartan"?, "labels"?}."""
    with open(path) as fh:
        data = json.load(fh)
    try:
        rank = int(data["rank"])
        coxeter = data["coxeter"]
    except KeyError as exc:
        raise InputError(f"bad system file: missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad system file: {exc}") from exc
    if len(coxeter) != rank:
        raise InputError("rank does not match the Coxeter matrix size")
    return make_system(coxeter, data.get("cartan"), data.get("labels"))


@dataclass(frozen=True, eq=False)
class Element:
    """Group element: canonical reduced word plus its action on V*."""

    system: CoxeterSystem
    word: tuple
    matrix: tuple
    inv_matrix: tuple = field(repr=False)

    @property
    def length(self):
        return len(self.word)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.word == other.word and self.system == other.system

    def __hash__(self):
        return hash((self.word, self.system.cartan))

    def __mul__(self, other):
        return multiply(self, other)

    def inverse(self):
        return _from_matrices(self.system, self.inv_matrix, self.matrix)

    def apply(self, coords):
        """Image of the covector with the given simple-root coordinates."""
        return tuple(
            sum(self.matrix[i][j] * coords[j] for j in range(self.system.rank))
            for i in range(self.system.rank)
        )

    def __str__(self):
        return word_str(self.word) or "e"

    def __repr__(self):
        return f"Element({self})"


def sort_key(w: Element):
    """Sort elements by (length, ShortLex word)."""
    return (len(w.word), w.word)


def _column_nonpositive(mat, j):
    return all(mat[i][j] <= 0 for i in range(len(mat)))


_MAX_EXTRACT = 10_000


def _from_matrices(system, mat, inv) -> Element:
    """Recover the canonical word of the element with the given matrices.

    Repeatedly strips the smallest left descent (the first letter of every
    reduced word is a left descent, so taking the minimum at each step
    yields the ShortLex-least reduced word).
    """
    gens = system._gen_matrices
    ident = system._identity_matrix
    word = []
    a, ainv = mat, inv
    for _ in range(_MAX_EXTRACT):
        if a == ident:
            return Element(system, tuple(word), mat, inv)
        for s in range(system.rank):
            if _column_nonpositive(ainv, s):
                break
        else:
            raise RealizationError(
                "non-identity matrix with no left descent; the realization "
                "is not reflection faithful"
            )
        word.append(s)
        a = _matmul(gens[s], a)
        ainv = _matmul(ainv, gens[s])
    raise RealizationError("reduced-word extraction did not terminate")


def normal_form(system: CoxeterSystem, word) -> Element:
    """Canonical Element of an arbitrary word in the generators."""
    if isinstance(word, str):
        raise InputError(
            "words are sequences of 0-based generator indices; "
            "parse text like '121' with parse_word(text, rank)"
        )
    word = tuple(word)
    for s in word:
        if not (0 <= s < system.rank):
            raise InputError(f"generator index {s} out of range")
    gens = system._gen_matrices
    mat = system._identity_matrix
    for s in word:
        mat = _matmul(mat, gens[s])
    inv = system._identity_matrix
    for s in reversed(word):
        inv = _matmul(inv, gens[s])
    return _from_matrices(system, mat, inv)


def multiply(a: Element, b: Element) -> Element:
    if a.system != b.system:
        raise InputError("elements of different systems")
    return _from_matrices(
        a.system, _matmul(a.matrix, b.matrix), _matmul(b.inv_matrix, a.inv_matrix)
    )


def _mul_gen(w: Element, s: int) -> Element:
    return multiply(w, w.system.generators[s])


def right_descents(w: Element):
    """Generators s with l(ws) < l(w), i.e. w(alpha_s) negative."""
    return {s for s in range(w.system.rank) if _column_nonpositive(w.matrix, s)}


def left_descents(w: Element):
    return {s for s in range(w.system.rank) if _column_nonpositive(w.inv_matrix, s)}


def is_reflection(w: Element) -> bool:
    """True when rank(matrix - identity) = 1.

    A rank-one deviation from the identity that fails to be an involution
    (or appears at even length) falsifies the realization and raises.
    """
    n = w.system.rank
    mat = [
        [QQ(w.matrix[i][j] - (1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    if rank_dense(mat) != 1:
        return False
    if _matmul(w.matrix, w.matrix) != w.system._identity_matrix:
        raise RealizationError("rank-one element that is not an involution")
    if w.length % 2 == 0:
        raise RealizationError("reflection of even length")
    return True


def reflection_root(w: Element) -> Root:
    """The positive root of a reflection, primitive in the root lattice."""
    if not is_reflection(w):
        raise InputError(f"{w} is not a reflection")
    n = w.system.rank
    rows = []
    for i in range(n):
        row = {}
        for j in range(n):
            v = w.matrix[i][j] + (1 if i == j else 0)
            if v:
                row[j] = QQ(v)
        if row:
            rows.append(row)
    ker = kernel_basis(rows, n)
    if len(ker) != 1:
        raise RealizationError(
            f"(-1)-eigenspace of reflection {w} has dimension {len(ker)}"
        )
    vec = ker[0]
    denom = 1
    for c in vec:
        if c:
            denom = denom * c.denominator // gcd(denom, c.denominator)
    ints = [int(c * denom) for c in vec]
    cls = _classify_root(ints)
    if cls is None:
        raise RealizationError(f"reflection {w} has a mixed-sign root")
    coords, pos = cls
    if not pos:
        raise RealizationError(f"reflection {w} has a negative (-1)-eigenvector")
    return Root(coords, True)


@functools.lru_cache(maxsize=None)
def bruhat_leq(y: Element, x: Element) -> bool:
    """Bruhat order via the lifting property.

    With s a right descent of x: y <= x iff min(y, ys) <= xs.
    """
    if y.system != x.system:
        raise InputError("elements of different systems")
    if y.length > x.length:
        return False
    if y.word == x.word:
        return True
    if x.length == 0:
        return y.length == 0
    s = min(right_descents(x))
    xs = _mul_gen(x, s)
    ys = _mul_gen(y, s)
    return bruhat_leq(ys if ys.length < y.length else y, xs)


@functools.lru_cache(maxsize=None)
def bruhat_interval(x: Element):
    """All y <= x, sorted by (length, ShortLex word).

    Uses the subword property: the interval below x is exactly the set of
    elements represented by subwords of one reduced expression of x.
    """
    word = x.word
    seen = {}
    for mask in range(1 << len(word)):
        sub = tuple(word[i] for i in range(len(word)) if mask >> i & 1)
        w = normal_form(x.system, sub)
        seen[w.word] = w
    return tuple(sorted(seen.values(), key=sort_key))


def inversions(w: Element):
    """The positive roots sent negative by w^-1, listed from the word.

    For w = s_{i_1} ... s_{i_k} reduced these are the k roots
    s_{i_k} ... s_{i_{j+1}} (alpha_{i_j}).  Each must be positive and each
    must be mapped to a negative vector by w's matrix; violations raise.
    """
    n = w.system.rank
    gens = w.system._gen_matrices
    u = w.system._identity_matrix
    out = []
    for s in reversed(w.word):
        alpha = tuple(u[i][s] for i in range(n))
        cls = _classify_root(alpha)
        if cls is None or not cls[1]:
            raise RealizationError(f"inversion root of {w} not positive: {alpha}")
        image = tuple(
            sum(w.matrix[i][j] * alpha[j] for j in range(n)) for i in range(n)
        )
        if not all(c <= 0 for c in image):
            raise RealizationError(f"inversion root {alpha} of {w} not inverted")
        out.append(Root(cls[0], True))
        u = _matmul(u, gens[s])
    return out


def element_ball(system: CoxeterSystem, max_length: int):
    """All elements of length <= max_length, sorted by (length, word)."""
    layer = [system.identity]
    seen = {(): system.identity}
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for s in range(system.rank):
                ws = _mul_gen(w, s)
                if ws.length == w.length + 1 and ws.word not in seen:
                    seen[ws.word] = ws
                    nxt.append(ws)
        layer = nxt
        if not layer:
            break
    return sorted(seen.values(), key=sort_key)


def parse_word(text: str, rank: int):
    """Parse a 1-based word string ("", "121", "2,10,3") to 0-based indices.

    The empty string and "e" both denote the identity.
    """
    text = text.strip()
    if not text or text == "e":
        return ()
    if "," in text:
        parts = text.split(",")
    else:
        parts = list(text)
    word = []
    for p in parts:
        p = p.strip()
        if not p.isdigit():
            raise InputError(f"bad word {text!r}: {p!r} is not a generator index")
        idx = int(p) - 1
        if not (0 <= idx < rank):
            raise InputError(
                f"bad word {text!r}: generator {p} out of range for rank {rank}"
            )
        word.append(idx)
    return tuple(word)


def word_str(word) -> str:
    """Serialize a 0-based word tuple to the 1-based string form."""
    if any(s > 8 for s in word):
        return ",".join(str(s + 1) for s in word)
    return "".join(str(s + 1) for s in word)
