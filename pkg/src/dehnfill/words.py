"""Words over signed generator symbols.

A word is a tuple of letters; a letter is a ``(generator, exponent)`` pair
with exponent ``+1`` or ``-1``.  The textual form separates letters by
spaces and writes inverses as ``g^-1``; a power ``g^k`` is accepted on input
and expanded.
"""
from __future__ import annotations

from typing import Iterable, Sequence, Tuple

Letter = Tuple[str, int]
Word = Tuple[Letter, ...]

EMPTY: Word = ()


def letter(gen: str, exp: int = 1) -> Letter:
    if exp not in (1, -1):
        raise ValueError(f"letter exponent must be +1 or -1, got {exp}")
    return (gen, exp)


def inverse_letter(x: Letter) -> Letter:
    return (x[0], -x[1])


def inverse(w: Sequence[Letter]) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def free_reduce(w: Iterable[Letter]) -> Word:
    out: list = []
    for x in w:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_freely_reduced(w: Sequence[Letter]) -> bool:
    return all(not (a[0] == b[0] and a[1] == -b[1]) for a, b in zip(w, w[1:]))


def cyclic_reduce(w: Sequence[Letter]) -> Word:
    w = list(free_reduce(w))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def cyclic_conjugates(w: Sequence[Letter]) -> list:
    w = tuple(w)
    return [w[k:] + w[:k] for k in range(len(w))]


def power(w: Sequence[Letter], k: int) -> Word:
    if k < 0:
        return free_reduce(inverse(w) * (-k))
    return free_reduce(tuple(w) * k)


def mul(*words: Sequence[Letter]) -> Word:
    out: list = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def gen_word(gen: str, k: int = 1) -> Word:
    """``gen**k`` as a word."""
    e = 1 if k >= 0 else -1
    return tuple((gen, e) for _ in range(abs(k)))


def exponent_sum(w: Sequence[Letter], gens=None) -> int:
    """Sum of exponents; restricted to ``gens`` when given."""
    if gens is None:
        return sum(e for _, e in w)
    gens = set(gens)
    return sum(e for g, e in w if g in gens)


def height(w: Sequence[Letter]) -> int:
    """Image under the homomorphism sending every generator to 1."""
    return sum(e for _, e in w)


def generators_of(w: Sequence[Letter]) -> set:
    return {g for g, _ in w}


def substitute(w: Sequence[Letter], images: dict) -> Word:
    """Apply the letter map ``g -> images[g]`` (generators missing from
    ``images`` are left alone) and freely reduce."""
    out: list = []
    for g, e in w:
        img = images.get(g)
        if img is None:
            out.append((g, e))
        elif e == 1:
            out.extend(img)
        else:
            out.extend(inverse(img))
    return free_reduce(out)


def parse(text: str) -> Word:
    """Parse ``"a b^-1 t^3"``; ``1`` or the empty string is the empty word."""
    out: list = []
    for tok in text.replace(",", " ").split():
        if tok in ("1", "e"):
            continue
        if "^" in tok:
            gen, _, exp = tok.partition("^")
            k = int(exp)
        else:
            gen, k = tok, 1
        if not gen:
            raise ValueError(f"bad token {tok!r}")
        out.extend(gen_word(gen, k))
    return tuple(out)


def format_word(w: Sequence[Letter]) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^-1" for g, e in w)


def as_word(w) -> Word:
    """Accept a word, a string, or a list of pairs/lists (JSON form)."""
    if isinstance(w, str):
        return parse(w)
    return tuple((str(g), int(e)) for g, e in w)
