"""J^t = exp(t log J) for a 3x3 matrix near the identity, at 256 bits."""
from fractions import Fraction as F

from germflow import SquareMatrix, matrix_log, matrix_power_t, max_abs_diff

prec = 256
J = SquareMatrix([[F(9, 10), F(1, 10), 0], [F(-1, 20), F(11, 10), F(1, 30)], [0, F(1, 50), F(19, 20)]]).to_complex(prec)
L = matrix_log(J, prec)
print("log J[0][0] =", L[0, 0])
R = matrix_power_t(J, F(1, 2), prec)
print("max |R*R - J| =", max_abs_diff(R @ R, J, prec))
print("max |J^(1/3) J^(2/3) - J| =", max_abs_diff(matrix_power_t(J, F(1, 3), prec) @ matrix_power_t(J, F(2, 3), prec), J, prec))
