"""Printed reference matrices for the E8 and BD(23,39) resolutions."""

U_BI = [
    [-2, 1, 0, 1, 0, 0, 1, 0, 0, 0, 0],
    [1, -2, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, -2, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, -2, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, -2, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, -2, 1],
]

K_BI = [
    [1, 0, -1, 0, -1, -2, 2, 3, 4, 5, 6],
    [0, 1, 2, 0, 0, 0, -1, -2, -3, -4, -5],
    [0, 0, 0, 1, 2, 3, -1, -2, -3, -4, -5],
]

U_BD_23_39 = [
    [-3, 1, 0, 1, 0, 1, 0, 0, 0, 0],
    [1, -2, 1, 0, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, -2, 1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, -4, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, -2, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, -2, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, -3, 1],
]

K_BD_23_39 = [
    [1, 0, -1, 0, -1, 3, 11, 19, 27, 62],
    [0, 1, 2, 0, 0, -1, -4, -7, -10, -23],
    [0, 0, 0, 1, 2, -1, -4, -7, -10, -23],
]

# monomials of the trinomial as {variable: exponent}, branch by branch
S_BI = [
    {"y1_1": 1, "x1": 2},
    {"y2_1": 1, "y2_2": 2, "x2": 3},
    {"y3_1": 1, "y3_2": 2, "y3_3": 3, "y3_4": 4, "x3": 5},
]

S_BD_23_39 = [
    {"y1_1": 1, "x1": 2},
    {"y2_1": 1, "x2": 2},
    {"y3_1": 1, "y3_2": 4, "y3_3": 7, "y3_4": 10, "x3": 23},
]

# torus characters of the y variables, as {t_k: exponent}
CHARACTERS_BD_23_39 = {
    "y0": {1: 1, 2: 1, 3: 1, 0: -3},
    "y1_1": {0: 1, 1: -2},
    "y2_1": {0: 1, 2: -2},
    "y3_1": {0: 1, 4: 1, 3: -4},
    "y3_2": {3: 1, 5: 1, 4: -2},
    "y3_3": {4: 1, 6: 1, 5: -2},
    "y3_4": {5: 1, 6: -3},
}
