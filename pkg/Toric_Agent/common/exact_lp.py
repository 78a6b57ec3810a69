"""
精确有理单纯形（Fraction + Bland 规则）

只做可行性问题：给定 A_eq·x = b_eq、A_ub·x ≤ b_ub、x ≥ 0，求一个可行点或判定不可行。
用于 Farkas 证书、对偶证书和守恒律的严格正性判定；规模很小（变量数 ≤ s，约束数 ≤ 边数）。
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence

from .exact_linalg import as_fraction


class ExactSimplex:
    """第一阶段单纯形：最小化人工变量之和"""

    def __init__(self, max_pivots: int = 100000):
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")
        self.max_pivots = max_pivots
        self.stats = {'solves': 0, 'pivots': 0, 'infeasible': 0}

    def feasible_point(self, n: int,
                       A_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                       A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> Optional[List[Fraction]]:
        """返回 x ≥ 0 满足全部约束；不可行返回 None"""
        self.stats['solves'] += 1
        n_ub = len(A_ub)
        rows: List[List[Fraction]] = []
        rhs: List[Fraction] = []

        for k, (row, b) in enumerate(zip(A_ub, b_ub)):
            slack = [Fraction(int(k == t)) for t in range(n_ub)]
            rows.append([as_fraction(v) for v in row] + slack)
            rhs.append(as_fraction(b))
        for row, b in zip(A_eq, b_eq):
            rows.append([as_fraction(v) for v in row] + [Fraction(0)] * n_ub)
            rhs.append(as_fraction(b))

        m = len(rows)
        if m == 0:
            return [Fraction(0)] * n

        # 右端非负
        for i in range(m):
            if rhs[i] < 0:
                rows[i] = [-v for v in rows[i]]
                rhs[i] = -rhs[i]

        width = n + n_ub
        total = width + m
        tableau = [rows[i] + [Fraction(int(i == t)) for t in range(m)] + [rhs[i]] for i in range(m)]
        basis = [width + i for i in range(m)]

        # 约化代价：c_j - c_B·B⁻¹A_j，人工变量代价为 1
        cost = [Fraction(0)] * (total + 1)
        for j in range(width):
            cost[j] = -sum(tableau[i][j] for i in range(m))
        cost[total] = -sum(rhs)

        pivots = 0
        while True:
            entering = next((j for j in range(total) if cost[j] < 0), None)
            if entering is None:
                break
            candidates = [
                (tableau[i][total] / tableau[i][entering], basis[i], i)
                for i in range(m) if tableau[i][entering] > 0
            ]
            if not candidates:
                # 第一阶段目标有下界 0，不会无界
                break
            _, _, leave = min(candidates)
            self._pivot(tableau, cost, leave, entering)
            basis[leave] = entering
            pivots += 1
            if pivots > self.max_pivots:
                self.logger.warning(f"⚠️ 单纯形超过 {self.max_pivots} 次转轴，按不可行处理")
                self.stats['infeasible'] += 1
                return None

        self.stats['pivots'] += pivots
        if -cost[total] != 0:
            self.stats['infeasible'] += 1
            return None

        x = [Fraction(0)] * total
        for i, var in enumerate(basis):
            x[var] = tableau[i][total]
        return x[:n]

    @staticmethod
    def _pivot(tableau: List[List[Fraction]], cost: List[Fraction], row: int, col: int):
        piv = tableau[row][col]
        tableau[row] = [v / piv for v in tableau[row]]
        pivot_row = tableau[row]
        for i, other in enumerate(tableau):
            if i == row:
                continue
            factor = other[col]
            if factor != 0:
                tableau[i] = [a - factor * b for a, b in zip(other, pivot_row)]
        factor = cost[col]
        if factor != 0:
            for j in range(len(cost)):
                cost[j] -= factor * pivot_row[j]
