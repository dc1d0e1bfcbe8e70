"""Worked instance in the 2-extended module category of A_3.

The silting complex P3[1]+P1[1]+I1[1], its s-torsion pair, and the
generating morphisms of the two inflation classes.
"""
from __future__ import annotations

N, M = 3, 2

SILTING = "P3[1]+P1[1]+I1[1]"

T_LABELS = ("P3[1]", "P1[1]", "I2[1]", "I1[1]")
F_LABELS = ("P3", "P2", "P1", "S2", "I2", "I1", "S2[1]")

# generators of Infl T (cones in T)
T_GENERATORS = (
    "0 -> P3[1]",
    "P1 -> I2",
    "P2 -> S2",
    "0 -> I2[1]",
    "0 -> P1[1]",
    "I1 -> P2[1]",
    "I2 -> P3[1]",
    "0 -> I1[1]",
    "S2[1] -> I2[1]",
    "P2[1] -> P1[1]",
    "P3[1] -> P1[1]",
    "I1 -> S2[1]",
    "P2[1] -> S2[1]+P1[1]",
)

# generators of Infl F (cones in F)
F_GENERATORS = (
    "0 -> P3",
    "0 -> P2",
    "0 -> P1",
    "I2 -> I1",
    "0 -> S2",
    "0 -> I2",
    "0 -> I1",
    "S2 -> I2",
    "P3 -> P1",
    "P3 -> P2",
    "P2 -> P1",
    "0 -> S2[1]",
    "P2 -> P1+S2",
    "P3[1] -> P2[1]",
)

# f: P1 -> I1 factors as P1 -> I2 -> I1
FACTOR_FROM, FACTOR_TO, FACTOR_MID = "P1", "I1", "I2"
