"""Worked examples used as fixtures: a two-qutrit partition laid out as a
coset table, and a three-qutrit GHZ-type MCS."""

from __future__ import annotations

from .mcs import Mcs, from_strings
from .partition import Partition, make_partition

# Each row is one MCS; columns are the cosets of the first row, in the
# order EE ER EL RE RR RL LE LR LL (the EE column holds only II).
TWO_QUTRIT_ROWS: tuple[tuple[str, ...], ...] = (
    ("IZ", "IZ2", "ZI", "ZZ", "ZZ2", "Z2I", "Z2Z", "Z2Z2"),
    ("IX", "IX2", "XI", "XX", "XX2", "X2I", "X2X", "X2X2"),
    ("IY", "IY2", "YI", "YY", "YY2", "Y2I", "Y2Y", "Y2Y2"),
    ("IV", "IV2", "VI", "VV", "VV2", "V2I", "V2V", "V2V2"),
    ("ZX", "Z2X2", "VZ", "XY", "YV2", "V2Z2", "Y2V", "X2Y2"),
    ("ZY", "Z2Y2", "XZ", "YV", "VX2", "X2Z2", "V2X", "Y2V2"),
    ("ZV", "Z2V2", "YZ", "VX", "XY2", "Y2Z2", "X2Y", "V2X2"),
    ("Z2X", "ZX2", "YZ2", "XV", "VY2", "Y2Z", "V2Y", "X2V2"),
    ("Z2Y", "ZY2", "VZ2", "YX", "XV2", "V2Z", "X2V", "Y2X2"),
    ("Z2V", "ZV2", "XZ2", "VY", "YX2", "X2Z", "Y2X", "V2Y2"),
)

# generator pairs: first and third entry of each row, except that the
# first row uses (ZI, IZ) so that coset labels follow the column order
TWO_QUTRIT_GENERATORS: tuple[tuple[str, str], ...] = (("ZI", "IZ"),) + tuple(
    (row[0], row[2]) for row in TWO_QUTRIT_ROWS[1:]
)

GHZ_GENERATORS = ("Z2ZI", "Z2IZ", "XXX")
GHZ_MEMBERS_HALF = (
    "XXX", "YYY", "VVV",
    "XYV", "YVX", "VXY",
    "XVY", "YXV", "VYX",
    "Z2ZI", "Z2IZ", "IZ2Z", "ZZZ",
)
SB_EXAMPLE_GENERATORS = ("ZII", "IZX", "IYZ")


def two_qutrit_rows() -> list[Mcs]:
    return [from_strings(g, 2) for g in TWO_QUTRIT_GENERATORS]


def two_qutrit_partition() -> Partition:
    return make_partition(two_qutrit_rows())


def ghz_mcs() -> Mcs:
    return from_strings(GHZ_GENERATORS, 3)
