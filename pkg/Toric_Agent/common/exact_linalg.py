"""
精确线性代数工具

秩、有理零空间、Bareiss 行列式都交给 sympy；整数核的饱和基用扩展欧几里得
列变换（幺模变换）求得。所有返回值都是 Python int / Fraction，不泄露 sympy 类型。
"""

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from .errors import LatticeDimensionError

IntVector = Tuple[int, ...]


def as_fraction(value) -> Fraction:
    """int / Fraction / sympy.Rational / float 转为 Fraction（float 按二进制精确转换）"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def to_sympy(rows: Sequence[Sequence], ncols: Optional[int] = None) -> sympy.Matrix:
    """有理矩阵转 sympy.Matrix（空矩阵保留列数）"""
    rows = [list(r) for r in rows]
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix([[sympy.Rational(as_fraction(v).numerator, as_fraction(v).denominator)
                          for v in row] for row in rows])


def exact_rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    matrix = to_sympy(rows, ncols)
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return int(matrix.rank())


def independent_rows(rows: Sequence[Sequence[int]]) -> List[int]:
    """返回线性无关行的下标（转置矩阵 rref 的主元列，按出现顺序）"""
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return []
    _, pivots = to_sympy(rows).T.rref()
    return list(pivots)


def primitive_vector(values: Sequence) -> IntVector:
    """有理向量清分母、除以 gcd，并使首个非零分量为正"""
    fractions = [as_fraction(v) for v in values]
    lcm = 1
    for f in fractions:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    ints = [int(f * lcm) for f in fractions]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(ints)
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


def normalize_basis(vectors: Iterable[Sequence[int]]) -> Tuple[IntVector, ...]:
    """本原化 + 符号规范 + 字典序排序"""
    return tuple(sorted(primitive_vector(v) for v in vectors))


def rational_nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """精确有理零空间基（sympy nullspace）"""
    if not rows:
        return [[Fraction(int(i == k)) for i in range(ncols)] for k in range(ncols)]
    basis = to_sympy(rows, ncols).nullspace()
    return [[as_fraction(x) for x in vec] for vec in basis]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[IntVector, ...]:
    """整数核（有限指数子格）：有理零空间基逐个本原化"""
    for row in rows:
        if len(row) != ncols:
            raise LatticeDimensionError(f"矩阵行长度 {len(row)} 与列数 {ncols} 不一致")
    return normalize_basis(rational_nullspace(rows, ncols))


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """返回 (g, x, y)，a·x + b·y = g ≥ 0"""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def saturated_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[IntVector, ...]:
    """
    ker_Z 的 Z-基（饱和格）

    对矩阵做幺模列变换化为列梯形 A·U = [H | 0]，U 的末尾若干列即为核的 Z-基。
    """
    for row in rows:
        if len(row) != ncols:
            raise LatticeDimensionError(f"矩阵行长度 {len(row)} 与列数 {ncols} 不一致")

    A = [[int(v) for v in row] for row in rows]
    U = [[int(i == k) for k in range(ncols)] for i in range(ncols)]
    m = len(A)

    def combine(matrix, p, c, x, y, u, v):
        # col_p <- x·col_p + y·col_c ; col_c <- u·col_p + v·col_c
        for row in matrix:
            cp, cc = row[p], row[c]
            row[p] = x * cp + y * cc
            row[c] = u * cp + v * cc

    pivot = 0
    for r in range(m):
        if pivot >= ncols:
            break
        for c in range(pivot + 1, ncols):
            b = A[r][c]
            if b == 0:
                continue
            a = A[r][pivot]
            g, x, y = extended_gcd(a, b)
            u, v = -b // g, a // g
            combine(A, pivot, c, x, y, u, v)
            combine(U, pivot, c, x, y, u, v)
        if A[r][pivot] != 0:
            pivot += 1

    basis = [tuple(U[i][k] for i in range(ncols)) for k in range(pivot, ncols)]
    result = []
    for vec in basis:
        for value in vec:
            if value != 0:
                result.append(vec if value > 0 else tuple(-x for x in vec))
                break
    return tuple(sorted(result))


def lattice_coordinates(vector: Sequence[int], basis: Sequence[Sequence[int]]) -> Optional[List[Fraction]]:
    """向量在（列满秩）基下的有理坐标；不在张成空间中返回 None"""
    if not basis:
        return [] if all(v == 0 for v in vector) else None
    B = to_sympy(basis).T
    target = to_sympy([list(vector)]).T
    try:
        solution, params = B.gauss_jordan_solve(target)
    except ValueError:
        return None
    if params.shape[0] != 0:
        solution = solution.subs({p: 0 for p in params})
    return [as_fraction(x) for x in solution]


def lattice_index(sublattice: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]]) -> Optional[int]:
    """子格在格中的指数 |det(坐标矩阵)|；不是子格时返回 None"""
    if len(sublattice) != len(lattice):
        return None
    if not lattice:
        return 1
    coords = []
    for vec in sublattice:
        c = lattice_coordinates(vec, lattice)
        if c is None or any(x.denominator != 1 for x in c):
            return None
        coords.append(c)
    det = bareiss_determinant(coords)
    return abs(int(det)) if det != 0 else None


def bareiss_determinant(rows: Sequence[Sequence]) -> Fraction:
    """无分数消元（Bareiss）精确行列式；0×0 矩阵的行列式为 1"""
    if not rows:
        return Fraction(1)
    return as_fraction(to_sympy(rows).det(method="bareiss"))


def monomial(base: Sequence[Fraction], exponents: Sequence[int]) -> Fraction:
    """Π base_i^e_i（只取 e_i > 0 的部分由调用方控制）"""
    result = Fraction(1)
    for b, e in zip(base, exponents):
        if e:
            result *= Fraction(b) ** e
    return result


def split_signs(vector: Sequence[int]) -> Tuple[IntVector, IntVector]:
    """u = u₊ - u₋"""
    plus = tuple(max(v, 0) for v in vector)
    minus = tuple(max(-v, 0) for v in vector)
    return plus, minus


def mat_vec(rows: Sequence[Sequence[int]], vector: Sequence[int]) -> IntVector:
    return tuple(sum(a * b for a, b in zip(row, vector)) for row in rows)
