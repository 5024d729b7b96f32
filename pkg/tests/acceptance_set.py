"""Groups named by the acceptance criteria, plus extra constructions of orders 20 and 24."""

from __future__ import annotations

FILLED = (
    "EA(2)", "EA(4)", "EA(8)", "EA(16)", "EA(32)",
    "C(3)", "C(5)",
    "D(6)", "D(8)", "D(10)", "D(12)", "D(14)",
    "D(8)xC(2)", "D(22)", "D(8)*Q(8)",
)

ORDER_20 = ("D(20)", "C(20)", "C(5)xC(2)xC(2)", "Q(20)")
ORDER_24 = ("D(24)", "C(24)", "D(8)xC(3)", "Q(8)xC(3)", "D(6)xC(4)", "D(12)xC(2)", "Q(24)")

NOT_FILLED = (
    "C(4)", "C(7)", "C(3)xC(3)", "Q(8)", "Q(16)", "D(16)", "D(18)",
    "C(4)*D(8)", "ESC4(16)", "ESP(32)",
    *ORDER_20, *ORDER_24,
)

ORDER_64 = ("(D(8)*Q(8))xC(2)", "ESC4(64)")

ACCEPTANCE_SET = FILLED + NOT_FILLED + ORDER_64


def up_to(order: int) -> list[str]:
    from filled_groups import build_group

    return [s for s in ACCEPTANCE_SET if build_group(s).order <= order]
