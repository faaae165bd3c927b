def lower_median(values):
    """Return the median of values, taking the lower middle element for
    even-length input so the answer is always one of the values.

    Returns None for an empty input.
    """
    ordered = sorted(values)
    if not ordered:
        return None
    return ordered[(len(ordered) - 1) // 2]


def trailing_zeros(k):
    """Index of the lowest set bit of a positive integer. This is the bit that
    flips between Gray codes k-1 and k."""
    return (k & -k).bit_length() - 1


def gray_code(k):
    return k ^ (k >> 1)


def mean(values):
    values = list(values)
    if not values:
        return None
    return float(sum(values)) / len(values)
