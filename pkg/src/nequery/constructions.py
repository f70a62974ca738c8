"""The two hand-built constructions and their 0-computing prefixes."""

from fractions import Fraction

from .plan import Amplify, Base, Iterate, Lift, Plan

__all__ = [
    "iterate_n",
    "CONSTRUCTION_1",
    "CONSTRUCTION_1_ZERO",
    "CONSTRUCTION_2",
    "CONSTRUCTION_2_ZERO",
]


def iterate_n(plan: Plan, n: int) -> Plan:
    for _ in range(n):
        plan = Iterate(plan)
    return plan


_NE2 = iterate_n(Base(), 2)

# NE^2: iterate twice, lift to 0 (4 queries), amplify twice -> (-1), 8 queries
CONSTRUCTION_1_ZERO = Lift(_NE2, Fraction(0))
CONSTRUCTION_1 = Amplify(CONSTRUCTION_1_ZERO, 2)

# NE^8: 3 iterates, amplify, 3 iterates, amplify, 2 iterates, lift to 0
# (1024 queries), amplify -> (-1), 2048 queries
CONSTRUCTION_2_ZERO = Lift(
    iterate_n(Amplify(iterate_n(Amplify(iterate_n(_NE2, 1), 2), 3), 2), 2), Fraction(0)
)
CONSTRUCTION_2 = Amplify(CONSTRUCTION_2_ZERO, 2)
