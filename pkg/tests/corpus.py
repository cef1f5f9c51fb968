"""Hand-built linear systems ``A x (rel) b, x >= 0`` with known feasibility."""
from fractions import Fraction as F

# each entry: (name, A, relations, b)
INFEASIBLE = [
    ("contradictory equalities", [[1], [1]], ["=", "="], [1, 2]),
    ("sum bound", [[1, 1], [1, 0], [0, 1]], ["=", "<=", "<="], [1, 0.3, 0.3]),
    ("negative upper bound", [[1]], ["<="], [-1]),
    ("sum too large", [[1, 1], [1, 0], [0, 1]], [">=", "<=", "<="], [3, 1, 1]),
    ("negated variable", [[-1]], [">="], [1]),
    ("opposite differences", [[1, -1], [-1, 1]], ["=", "="], [1, 1]),
    ("partial sum exceeds total", [[1, 1, 1], [1, 1, 0]], ["=", ">="], [1, 2]),
    ("rational clash", [[1], [1]], ["=", ">="], [F(1, 3), F(1, 2)]),
    ("pairwise sums", [[1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 1]], ["=", "=", "=", "<="], [1, 1, 1, 1.4]),
    ("weighted sum", [[1, 2], [1, 0], [0, 1]], ["=", "<=", "<="], [4, 1, 1]),
    ("ghz rows with capped triple",
     [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
     ["=", "=", "=", "<=", "<=", "<=", "<="], [1, 1, 1, 0, 0, 0, 0.5]),
    ("interval empty", [[1], [1]], [">=", "<="], [2, 1]),
    ("zero row", [[0]], ["="], [1]),
    ("zero sum with floor", [[1, 1], [1, 0]], ["=", ">="], [0, 0.1]),
    ("chained bound", [[2, -1], [0, 1]], ["<=", "<="], [-1, 0.5]),
    ("equal halves capped", [[1, 1], [1, -1], [1, 0]], ["=", "=", "<="], [2, 0, 0.9]),
    ("sevenths", [[1, 1], [1, 0], [0, 1]], ["=", ">=", ">="], [F(1, 7), F(1, 7), F(1, 7)]),
    ("four floors", [[1, 1, 1, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
     ["=", ">=", ">=", ">=", ">="], [1, 0.26, 0.26, 0.26, 0.26]),
    ("difference cycle", [[1, -1, 0], [0, 1, -1], [-1, 0, 1]], [">=", ">=", ">="], [1, 1, 1]),
    ("pairwise sums vs total", [[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], ["=", "=", "=", "="], [1, 1, 1, 2]),
]

FEASIBLE = [
    ("single equality", [[1]], ["="], [1]),
    ("sum with room", [[1, 1], [1, 0], [0, 1]], ["=", "<=", "<="], [1, 0.6, 0.6]),
    ("ghz rows", [[1, 1, 0, 1], [1, 0, 1, 1], [0, 1, 1, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
     ["=", "=", "=", "<=", "<=", "<=", "<="], [1, 1, 1, 0, 0, 0, 1]),
    ("rational floors", [[1, 1], [1, 0], [0, 1]], ["=", ">=", ">="], [F(2, 7), F(1, 7), F(1, 7)]),
    ("negative rhs via ge", [[1, -1]], [">="], [-2]),
    ("pairwise sums", [[1, 1, 0], [0, 1, 1], [1, 0, 1]], ["=", "=", "="], [1, 1, 1]),
    ("redundant equalities", [[1, 1], [2, 2]], ["=", "="], [1, 2]),
    ("empty rhs", [[1, 1, 1]], ["<="], [0]),
]
