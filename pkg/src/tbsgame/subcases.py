"""Per-case expressions built from the individual sub-case averages.

These are deliberately separate from :mod:`tbsgame.payoff`: each case is
assembled from its own occupancy probabilities and sub-case ownership times
rather than from the folded group formulas, so comparing the two exercises
the folding algebra. The ``folded_case*`` functions write out each case's
closed form on its own, even where two cases share the same expression.
"""


def case1_subcases(p, d, r, t_D, t_A):
    x = p / t_D
    tau11 = (t_A - (t_D + d + r - p / 2)) / t_A
    tau12 = (t_A - ((t_D - p) / 2 + d + r)) / t_A
    return x * tau11 + (1 - x) * tau12, x * t_A + (1 - x) * t_A


def case2_subcases(p, d, r, t_D, t_A):
    x = p / t_D
    a21 = (t_A - t_D - d - r) / p
    a22 = 1 - a21
    tau21_1 = (t_A - ((t_A + t_D + d + r) / 2 - p)) / t_A
    tau21_2 = (2 * t_A - (t_A + t_D + d + r - p) / 2) / (2 * t_A)
    tau21 = a21 * tau21_1 + a22 * tau21_2
    # the post-protection sub-case mirrors its Case 1 counterpart
    tau22 = (t_A - ((t_D - p) / 2 + d + r)) / t_A
    delta21 = a21 * t_A + a22 * 2 * t_A
    return x * tau21 + (1 - x) * tau22, x * delta21 + (1 - x) * t_A


def case3_subcases(p, d, r, t_D, t_A):
    s = p + d + r
    x = p / t_D
    tau31 = (2 * t_A - (t_D + d + r - p / 2)) / (2 * t_A)
    a31 = (t_A - s) / (t_D - p)
    a32 = 1 - a31
    tau32_1 = (t_A - ((t_A + s) / 2 - p)) / t_A
    tau32_2 = (2 * t_A - ((t_A + t_D + d + r) / 2 - p)) / (2 * t_A)
    tau32 = a31 * tau32_1 + a32 * tau32_2
    delta32 = a31 * t_A + a32 * 2 * t_A
    return x * tau31 + (1 - x) * tau32, x * 2 * t_A + (1 - x) * delta32


def case4_subcases(p, d, r, t_D, t_A):
    s = p + d + r
    y1 = (d + r) / t_A
    y2 = (t_D - s) / t_A
    y3 = 1 - y1 - y2
    tau41 = (t_A + p - (d + r) / 2) / (2 * t_D)
    tau42 = ((t_D + p - d - r) / 2) / t_D
    tau43 = ((t_D + t_A + p) / 2 - d - r) / (2 * t_D)
    tau = y1 * tau41 + y2 * tau42 + y3 * tau43
    delta = y1 * 2 * t_D + y2 * t_D + y3 * 2 * t_D
    return tau, delta


def case5_subcases(p, d, r, t_D, t_A):
    y1 = (d + r) / t_A
    y = 1 - y1
    a51 = (t_D - t_A - p) / (d + r)
    a52 = 1 - a51
    tau51_1 = ((t_A + t_D + p) / 2 - d - r) / t_D
    tau51_2 = ((t_A + t_D + p - d - r) / 2) / (2 * t_D)
    tau51 = a51 * tau51_1 + a52 * tau51_2
    tau52 = ((t_A - d - r) / 2 + p) / t_D
    delta51 = a51 * t_D + a52 * 2 * t_D
    return y1 * tau51 + y * tau52, y1 * delta51 + y * t_D


def case6_subcases(p, d, r, t_D, t_A):
    return (t_A / 2 + p) / t_D, t_D


def folded_case2(p, d, r, t_D, t_A):
    tau = (1 / (4 * t_A * t_D)) * (
        -t_A ** 2 - t_D ** 2 + 4 * t_A * t_D + 2 * p * t_A
        - 2 * t_D * (d + r) + (p + d + r) * (d + r - p))
    delta = 2 * t_A - ((t_A - p - d - r) / t_D) * t_A
    return tau, delta


def folded_case3(p, d, r, t_D, t_A):
    tau = (1 / (4 * t_A * t_D)) * (
        -t_A ** 2 - t_D ** 2 + 4 * t_A * t_D + 2 * p * t_A
        - 2 * t_D * (d + r) + (p + d + r) * (d + r - p))
    delta = 2 * t_A - ((t_A - p - d - r) / t_D) * t_A
    return tau, delta


def folded_case4(p, d, r, t_D, t_A):
    tau = (1 / (4 * t_A * t_D)) * (
        t_A ** 2 + t_D ** 2 + 2 * p * t_A
        - 2 * t_D * (d + r) + (p + d + r) * (d + r - p))
    delta = 2 * t_D - ((t_D - p - d - r) / t_A) * t_D
    return tau, delta


def folded_case5(p, d, r, t_D, t_A):
    tau = (1 / (4 * t_A * t_D)) * (
        t_A ** 2 + t_D ** 2 + 2 * p * t_A
        - 2 * t_D * (d + r) + (p + d + r) * (d + r - p))
    delta = 2 * t_D - ((t_D - p - d - r) / t_A) * t_D
    return tau, delta


# Six-way case ranges in terms of (p, d, r, t_A); each maps to (lo, hi) for t_D.
def case_ranges(p, d, r, t_A):
    s = p + d + r
    return {
        1: (s, t_A - s),
        2: (t_A - s, t_A - d - r),
        3: (t_A - d - r, t_A),
        4: (t_A, t_A + p),
        5: (t_A + p, t_A + s),
        6: (t_A + s, float("inf")),
    }
