"""Published reference measurements for the benchmark families.

Query counts (Figures 1-2 of the reference experiment series) and basic
operation counts (Figures 3-4) for both solvers on the rectangle, L-shape and
simplex staircase families, in two and three variables.

Counting conventions: a query is a distinct table index (repeated reads are
cached and not recounted — this convention reproduces the published closed
forms exactly); "operations" tally field multiplications and inversions, which
is implementation-defined, so the operation tables are reference data for
order-of-growth comparison, never exact-match assertions.

Keys are (family, algorithm) pairs; each value maps the degree parameter d to
the measurement.
"""

from __future__ import annotations

from typing import Sequence


def _series(d0: int, values: Sequence[int]) -> dict[int, int]:
    return {d0 + i: v for i, v in enumerate(values)}


# -- query counts, two variables (d = 2..20; rectangle published from d = 4) --------

REFERENCE_QUERIES_2D: dict[tuple[str, str], dict[int, int]] = {
    ("lshape", "sfglm"): _series(2, [
        15, 28, 45, 66, 91, 120, 153, 190, 231, 276, 325, 378, 435, 496, 561,
        630, 703, 780, 861,
    ]),
    ("simplex", "sfglm"): _series(2, [
        15, 28, 45, 66, 91, 120, 153, 190, 231, 276, 325, 378, 435, 496, 561,
        630, 703, 780, 861,
    ]),
    ("lshape", "bms"): _series(2, [
        10, 21, 36, 55, 78, 105, 136, 171, 210, 253, 300, 351, 406, 465, 528,
        595, 666, 741, 820,
    ]),
    ("simplex", "bms"): _series(2, [
        10, 21, 36, 55, 78, 105, 136, 171, 210, 253, 300, 351, 406, 465, 528,
        595, 666, 741, 820,
    ]),
    ("rectangle", "sfglm"): _series(4, [
        45, 66, 120, 153, 231, 276, 378, 435, 561, 630, 780, 861, 1035, 1128,
        1326, 1431, 1653,
    ]),
    ("rectangle", "bms"): _series(4, [
        45, 66, 120, 153, 231, 276, 378, 435, 561, 630, 780, 861, 1035, 1128,
        1326, 1431, 1653,
    ]),
}

# -- query counts, three variables (d = 2..10; rectangle from d = 4) -----------------

REFERENCE_QUERIES_3D: dict[tuple[str, str], dict[int, int]] = {
    ("lshape", "sfglm"): _series(2, [35, 84, 165, 286, 455, 680, 969, 1330, 1771]),
    ("simplex", "sfglm"): _series(2, [35, 84, 165, 286, 455, 680, 969, 1330, 1771]),
    ("lshape", "bms"): _series(2, [20, 56, 120, 220, 364, 560, 816, 1140, 1540]),
    ("simplex", "bms"): _series(2, [20, 56, 120, 220, 364, 560, 816, 1140, 1540]),
    ("rectangle", "sfglm"): _series(4, [286, 455, 969, 1771, 2925, 3654, 6545]),
    ("rectangle", "bms"): _series(4, [286, 455, 969, 1771, 2925, 3654, 6545]),
}

# -- staircase sizes used to normalize the query plots -------------------------------

REFERENCE_STAIRCASE_2D: dict[str, dict[int, int]] = {
    "rectangle": _series(4, [
        8, 10, 18, 21, 32, 36, 50, 55, 72, 78, 98, 105, 128, 136, 162, 171, 200,
    ]),
    "lshape": {d: 2 * d - 1 for d in range(2, 21)},
    "simplex": {d: d * (d + 1) // 2 for d in range(2, 21)},
}

REFERENCE_STAIRCASE_3D: dict[str, dict[int, int]] = {
    "rectangle": _series(4, [16, 20, 36, 63, 96, 108, 200]),
    "lshape": _series(2, [4, 7, 10, 13, 16, 19, 22, 25, 28]),
    "simplex": _series(2, [4, 10, 20, 35, 56, 84, 120, 165, 220]),
}

# -- basic operation counts, two variables --------------------------------------------

REFERENCE_OPS_2D: dict[tuple[str, str], dict[int, int]] = {
    ("rectangle", "sfglm"): _series(4, [
        1255, 3250, 16170, 31092, 97697, 160267, 390280, 580810, 1202772,
        1676325, 3103205, 4126045, 7035430, 9028762, 14457627, 18048627,
        27502685,
    ]),
    ("lshape", "sfglm"): _series(2, [
        100, 420, 1288, 3329, 7623, 15885, 30675, 55638, 95774, 157738, 250170,
        384055, 573113, 834219, 1187853, 1658580, 2275560, 3073088, 4091164,
    ]),
    ("simplex", "sfglm"): _series(2, [
        100, 549, 1965, 5480, 12957, 27230, 52374, 94005, 159610, 258907,
        404235, 610974, 897995, 1288140, 1808732, 2492115, 3376224, 4505185,
        5929945,
    ]),
    ("rectangle", "bms"): _series(4, [
        2978, 5202, 18677, 27720, 69808, 94593, 198745, 254459, 473240, 582804,
        992697, 1188420, 1894464, 2219609, 3359830, 3870335, 5620488,
    ]),
    ("lshape", "bms"): _series(2, [
        467, 1371, 3008, 5603, 9380, 14563, 21376, 30043, 40788, 53835, 69408,
        87731, 109028, 133523, 161440, 193003, 228436, 267963, 311808,
    ]),
    ("simplex", "bms"): _series(2, [
        427, 1759, 5241, 12860, 27552, 53414, 95823, 161690, 259672, 400330,
        596325, 862630, 1216684, 1678622, 2271453, 3021248, 3957182, 5112366,
        6522843,
    ]),
}

# -- basic operation counts, three variables ------------------------------------------

REFERENCE_OPS_3D: dict[tuple[str, str], dict[int, int]] = {
    ("rectangle", "sfglm"): _series(4, [
        58468, 196394, 1491458, 7780660, 31350363, 58451620, 303054484,
    ]),
    ("lshape", "sfglm"): _series(2, [
        369, 2743, 14255, 57955, 195542, 570929, 1486628, 3528845, 7761655,
    ]),
    ("simplex", "sfglm"): _series(2, [
        453, 4370, 25385, 107695, 368102, 1073828, 2774390, 6510845, 14131315,
    ]),
    ("rectangle", "bms"): _series(4, [
        55942, 113816, 477592, 1820818, 5275811, 7677599, 32891946,
    ]),
    ("lshape", "bms"): _series(2, [
        1988, 9217, 29636, 75497, 164592, 321217, 577132, 972521, 1556952,
    ]),
    ("simplex", "bms"): _series(2, [
        1774, 14591, 75757, 298521, 964815, 2689885, 6679544, 15125328, 31763926,
    ]),
}


def reference_queries(n: int) -> dict[tuple[str, str], dict[int, int]]:
    if n == 2:
        return REFERENCE_QUERIES_2D
    if n == 3:
        return REFERENCE_QUERIES_3D
    raise KeyError(f"no reference data for n={n}")


def reference_staircase(n: int) -> dict[str, dict[int, int]]:
    return REFERENCE_STAIRCASE_2D if n == 2 else REFERENCE_STAIRCASE_3D
