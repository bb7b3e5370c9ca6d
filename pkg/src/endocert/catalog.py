"""Named permutation groups used by the CLI and the property suites."""

from __future__ import annotations

import re

from .permgrp import PermGroup, format_cycles

_FIXED = {
    "F20": ("(1 2 3 4 5),(2 3 5 4)", 5),
    "PSL2_7": ("(1 2 3 4 5 6 7),(2 3)(4 7)", 7),
    "PSL2_7_8": ("(1 2 3 4 5 6 7),(2 3 5)(4 7 6),(1 8)(2 7)(3 4)(5 6)", 8),
    "PGL2_5": ("(1 2 3 4 5),(2 3 5 4),(1 6)(3 4)", 6),
    "M11": ("(1 2 3 4 5 6 7 8 9 10 11),(3 7 11 8)(4 10 5 6)", 11),
    "M12": ("(1 2 3 4 5 6 7 8 9 10 11),(3 7 11 8)(4 10 5 6),(1 12)(2 11)(3 6)(4 8)(5 9)(7 10)", 12),
}

# twenty groups over which the module-theoretic properties are swept
CORE_CATALOG = (
    "S4", "S5", "S6", "S7", "S8",
    "A4", "A5", "A6", "A7", "A8",
    "C5", "C6", "C7", "D5", "D6",
    "F20", "PSL2_7", "PSL2_7_8", "AGL1_8", "M11",
)


def _cycle(n: int, start: int = 1) -> str:
    return "(" + " ".join(str(i) for i in range(start, n + 1)) + ")"


def _agl1_8() -> str:
    # F_8 = F_2[a]/(a^3 + a + 1); points are 3-bit vectors, labelled value + 1
    def mul_a(v):
        v <<= 1
        if v & 8:
            v ^= 0b1011
        return v
    gens = []
    for t in (1, 2, 4):
        gens.append(tuple(v ^ t for v in range(8)))
    gens.append(tuple(mul_a(v) for v in range(8)))
    return ",".join(format_cycles(g) for g in gens)


def group_source(name: str) -> tuple:
    """(cycle string, degree) for a catalog name such as S5, A6, C7, D5, M11."""
    if name in _FIXED:
        return _FIXED[name]
    if name == "AGL1_8":
        return _agl1_8(), 8
    m = re.fullmatch(r"([SACD])(\d+)", name)
    if not m:
        raise KeyError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1:
        raise KeyError(f"unknown group name {name!r}")
    if kind == "C":
        return _cycle(n), n
    if kind == "S":
        return (f"(1 2),{_cycle(n)}" if n >= 2 else "()"), n
    if kind == "A":
        if n <= 3:
            return ("(1 2 3)" if n == 3 else "()"), n
        long = _cycle(n) if n % 2 else _cycle(n, 2)
        return f"(1 2 3),{long}", n
    if n < 3:
        raise KeyError(f"dihedral group needs n >= 3: {name!r}")
    refl = "".join(f"({i} {n + 2 - i})" for i in range(2, n // 2 + 2) if i < n + 2 - i)
    return f"{_cycle(n)},{refl}", n


def catalog_group(name: str) -> PermGroup:
    text, n = group_source(name)
    return PermGroup.from_cycles(text, n, name=name)
