"""Money text <-> integer cents."""

import re

from boat.errors import NegativeMoneyError, UnparseableMoneyError

_MONEY = re.compile(r"^(-)?\$?(-)?(\d{1,3}(?:,\d{3})+|\d+)(?:\.(\d{0,2}))?$")


def parse_money(raw: str) -> int:
    """``"$22,700.00"`` -> ``2270000``. At most two decimal digits."""
    m = _MONEY.match(raw.strip())
    if m is None:
        raise UnparseableMoneyError(raw)
    neg_a, neg_b, whole, frac = m.groups()
    if neg_a and neg_b:
        raise UnparseableMoneyError(raw)
    cents = int(whole.replace(",", "")) * 100 + int((frac or "").ljust(2, "0"))
    if (neg_a or neg_b) and cents:
        raise NegativeMoneyError(raw)
    return cents


def format_money(cents: int) -> str:
    """``2270000`` -> ``"22700.00"``; exact inverse of :func:`parse_money`."""
    sign = "-" if cents < 0 else ""
    whole, frac = divmod(abs(int(cents)), 100)
    return f"{sign}{whole}.{frac:02d}"
