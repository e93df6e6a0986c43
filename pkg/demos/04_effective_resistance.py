"""Effective resistance on a small graph.

A connected graph's Laplacian is a symmetric zero-sum matrix of full
compressed rank, so its pseudoinverse comes out exactly.  The resistance
between nodes i and j is L+[i,i] + L+[j,j] - 2 L+[i,j].
"""

from zsa import Matrix, pinv_full_rank, validate_membership

# a 4-cycle with one chord 0-2, unit resistors
edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
n = 4
L = [[0] * n for _ in range(n)]
for i, j in edges:
    L[i][i] += 1
    L[j][j] += 1
    L[i][j] -= 1
    L[j][i] -= 1

Lp = pinv_full_rank(validate_membership(Matrix(L))).pinv


def resistance(i, j):
    return Lp[i, i] + Lp[j, j] - 2 * Lp[i, j]


for i in range(n):
    print([str(resistance(i, j)) for j in range(n)])

# Foster: resistances over the edges add up to n - 1
print(sum(resistance(i, j) for i, j in edges))
