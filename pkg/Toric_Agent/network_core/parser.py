"""
反应网络 DSL 解析与序列化

语法（UTF-8，每行一条语句，'#' 起注释）：
    species: A, B, C                      可选，固定物种次序
    <complex> -> <complex> ; k=<v>
    <complex> <-> <complex> ; kf=<v>, kr=<v>
    complex := 0 | term (+ term)*,  term := [coeff] species

速率字面量：整数或 p/q 为精确值；带小数点/指数的字面量使整个赋值变为浮点。
行内速率要么全部给出，要么全部省略。
"""

import logging
import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..common.data_structures import ParsedNetwork, RateAssignment, RateKind, ReactionNetwork
from ..common.errors import NetworkSyntaxError, NetworkValidationError, RateAssignmentError

logger = logging.getLogger(__name__)

_SPECIES_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")
_TERM = re.compile(r"^(?P<coeff>[+-]?\d+)?\s*\*?\s*(?P<name>\S+)$")
_INTEGER = re.compile(r"^\d+$")
_RATIONAL = re.compile(r"^(\d+)\s*/\s*(\d+)$")
_FLOAT = re.compile(r"^(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def parse_rate_literal(token: str, line: int, column: int) -> Tuple[object, bool]:
    """返回 (值, 是否精确)；非正值或格式错误抛 NetworkSyntaxError"""
    text = token.strip()
    if text.startswith('-'):
        raise NetworkSyntaxError(f"速率必须为正: {text}", line, column)
    if text.startswith('+'):
        text = text[1:]
    if _INTEGER.match(text):
        value, exact = Fraction(int(text)), True
    elif _RATIONAL.match(text):
        num, den = _RATIONAL.match(text).groups()
        if int(den) == 0:
            raise NetworkSyntaxError(f"速率分母为零: {text}", line, column)
        value, exact = Fraction(int(num), int(den)), True
    elif _FLOAT.match(text):
        value, exact = float(text), False
    else:
        raise NetworkSyntaxError(f"无法识别的速率字面量: {token.strip()!r}", line, column)
    if value <= 0:
        raise NetworkSyntaxError(f"速率必须为正: {text}", line, column)
    return value, exact


class _NetworkBuilder:
    """逐行累积物种、配合物与边"""

    def __init__(self):
        self.species: List[str] = []
        self.species_pinned = False
        self.complexes: List[Dict[str, int]] = []
        self.complex_keys: Dict[Tuple[Tuple[str, int], ...], int] = {}
        self.edges: List[Tuple[int, int]] = []
        self.edge_lines: Dict[Tuple[int, int], int] = {}
        self.rates: Dict[Tuple[int, int], object] = {}
        self.rate_exact = True
        self.lines_with_rates = 0
        self.reaction_lines = 0
        self.first_reaction_line: Optional[int] = None

    def pin_species(self, names: List[str], line: int, column: int):
        if self.reaction_lines or self.species_pinned:
            raise NetworkSyntaxError("species: 指令只能出现一次且必须在所有反应之前", line, column)
        for name in names:
            if not _SPECIES_NAME.match(name):
                raise NetworkSyntaxError(f"非法物种名: {name!r}", line, column)
        if len(set(names)) != len(names):
            raise NetworkSyntaxError("species: 指令中物种名重复", line, column)
        self.species = list(names)
        self.species_pinned = True

    def parse_complex(self, text: str, line: int, column: int) -> int:
        stripped = text.strip()
        if not stripped:
            raise NetworkSyntaxError("缺少配合物", line, column)
        offset = column + (len(text) - len(text.lstrip()))

        composition: Dict[str, int] = {}
        if stripped != '0':
            position = offset
            for raw_term in stripped.split('+'):
                term = raw_term.strip()
                term_col = position + (len(raw_term) - len(raw_term.lstrip()))
                position += len(raw_term) + 1
                match = _TERM.match(term)
                if not term or not match:
                    raise NetworkSyntaxError(f"无法解析的项: {term!r}", line, term_col)
                coeff_text, name = match.group('coeff'), match.group('name')
                coeff = int(coeff_text) if coeff_text is not None else 1
                if coeff < 0:
                    raise NetworkSyntaxError(f"化学计量系数不能为负: {term}", line, term_col)
                if coeff == 0:
                    raise NetworkSyntaxError(f"化学计量系数必须为正: {term}", line, term_col)
                if not _SPECIES_NAME.match(name):
                    raise NetworkSyntaxError(f"非法物种名: {name!r}", line, term_col)
                if name not in self.species:
                    if self.species_pinned:
                        raise NetworkSyntaxError(f"物种 {name} 未在 species: 指令中声明", line, term_col)
                    self.species.append(name)
                composition[name] = composition.get(name, 0) + coeff

        key = tuple(sorted(composition.items()))
        if key not in self.complex_keys:
            self.complex_keys[key] = len(self.complexes)
            self.complexes.append(composition)
        return self.complex_keys[key]

    def add_edge(self, i: int, j: int, line: int, column: int):
        if i == j:
            raise NetworkSyntaxError("反应两侧是同一个配合物（自环）", line, column)
        if (i, j) in self.edge_lines:
            raise NetworkSyntaxError(
                f"重复的反应（首次出现在第 {self.edge_lines[(i, j)]} 行）", line, column)
        self.edge_lines[(i, j)] = line
        self.edges.append((i, j))

    def build(self) -> ReactionNetwork:
        vectors = [tuple(c.get(name, 0) for name in self.species) for c in self.complexes]
        return ReactionNetwork(species=tuple(self.species), complexes=tuple(vectors), edges=tuple(self.edges))


def _parse_params(text: str, line: int, column: int) -> Dict[str, Tuple[str, int]]:
    params: Dict[str, Tuple[str, int]] = {}
    position = column
    for raw in text.split(','):
        item = raw.strip()
        item_col = position + (len(raw) - len(raw.lstrip()))
        position += len(raw) + 1
        if not item:
            raise NetworkSyntaxError("空的速率参数", line, item_col)
        if '=' not in item:
            raise NetworkSyntaxError(f"速率参数应为 name=value: {item!r}", line, item_col)
        name, value = item.split('=', 1)
        name = name.strip()
        if name in params:
            raise NetworkSyntaxError(f"速率参数 {name} 重复", line, item_col)
        params[name] = (value, item_col + item.index('=') + 1)
    return params


def parse_network(text: str) -> ParsedNetwork:
    """
    解析 DSL 文本

    配合物按首次出现顺序去重（向量相等即合并）；可逆箭头展开为两条有向边。
    行内速率全部给出时返回 RateAssignment，否则 rates 为 None。
    """
    builder = _NetworkBuilder()

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split('#', 1)[0]
        if not line.strip():
            continue

        stripped = line.lstrip()
        if stripped.lower().startswith('species:'):
            start = len(line) - len(stripped)
            names = [name.strip() for name in stripped[len('species:'):].split(',') if name.strip()]
            if not names:
                raise NetworkSyntaxError("species: 指令为空", line_no, start + 1)
            builder.pin_species(names, line_no, start + 1)
            continue

        body, params_text = line, None
        if ';' in line:
            body, params_text = line.split(';', 1)

        if '<->' in body:
            arrow, reversible = '<->', True
        elif '->' in body:
            arrow, reversible = '->', False
        else:
            raise NetworkSyntaxError("缺少箭头 '->' 或 '<->'", line_no, len(line) - len(line.lstrip()) + 1)
        if body.count('->') != 1:
            raise NetworkSyntaxError("每行只能有一个反应箭头", line_no, body.index(arrow) + 1)

        arrow_pos = body.index(arrow)
        lhs_text, rhs_text = body[:arrow_pos], body[arrow_pos + len(arrow):]
        rhs_col = arrow_pos + len(arrow) + 1
        if '<' in lhs_text or '>' in rhs_text:
            raise NetworkSyntaxError("每行只能有一个反应箭头", line_no, arrow_pos + 1)

        i = builder.parse_complex(lhs_text, line_no, 1)
        j = builder.parse_complex(rhs_text, line_no, rhs_col)
        builder.reaction_lines += 1
        builder.add_edge(i, j, line_no, arrow_pos + 1)
        if reversible:
            builder.add_edge(j, i, line_no, arrow_pos + 1)

        if params_text is None or not params_text.strip():
            continue

        params_col = len(body) + 2
        params = _parse_params(params_text, line_no, params_col)
        expected = ['kf', 'kr'] if reversible else ['k']
        unknown = [name for name in params if name not in expected]
        if unknown:
            raise NetworkSyntaxError(
                f"未知速率参数 {unknown[0]}，{'可逆' if reversible else '单向'}反应应给出 {', '.join(expected)}",
                line_no, params[unknown[0]][1])
        missing = [name for name in expected if name not in params]
        if missing:
            raise NetworkSyntaxError(f"缺少速率参数 {', '.join(missing)}", line_no, params_col)

        targets = [(i, j), (j, i)] if reversible else [(i, j)]
        for name, edge in zip(expected, targets):
            literal, col = params[name]
            value, exact = parse_rate_literal(literal, line_no, col)
            builder.rates[edge] = value
            builder.rate_exact = builder.rate_exact and exact
        builder.lines_with_rates += 1

    if not builder.edges:
        raise NetworkSyntaxError("网络中没有任何反应", max(1, len(text.splitlines())), 1)

    if builder.lines_with_rates and builder.lines_with_rates != builder.reaction_lines:
        raise NetworkSyntaxError(
            f"行内速率必须全部给出或全部省略（{builder.lines_with_rates}/{builder.reaction_lines} 行给出）",
            max(1, len(text.splitlines())), 1)

    try:
        network = builder.build()
    except NetworkValidationError as e:
        raise NetworkSyntaxError(str(e), 1, 1) from e

    rates = None
    if builder.lines_with_rates:
        kind = RateKind.EXACT if builder.rate_exact else RateKind.FLOAT
        rates = RateAssignment(dict(builder.rates), kind)

    logger.debug(f"解析完成: s={network.s}, n={network.n}, |E|={len(network.edges)}")
    return ParsedNetwork(network=network, rates=rates)


def _format_rate(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def _format_complex(network: ReactionNetwork, i: int) -> str:
    terms = []
    for name, coeff in zip(network.species, network.complexes[i]):
        if coeff == 1:
            terms.append(name)
        elif coeff > 1:
            terms.append(f"{coeff} {name}")
    return " + ".join(terms) if terms else "0"


def serialize_network(network: ReactionNetwork, rates: Optional[RateAssignment] = None) -> str:
    """每条有向边输出一行单向反应，附 species: 指令；parse(serialize(net)) 还原同一网络"""
    if rates is not None:
        rates.check_domain(network)
    lines = [f"species: {', '.join(network.species)}"]
    for i, j in network.edges:
        line = f"{_format_complex(network, i)} -> {_format_complex(network, j)}"
        if rates is not None:
            line += f" ; k={_format_rate(rates[(i, j)])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def parse_rates_file(text: str, network: ReactionNetwork) -> RateAssignment:
    """
    解析速率文件：每行 `i j value`（配合物下标从 1 开始）

    可以只覆盖部分边（与行内速率合并时使用）；完整性由 merge_rates / check_domain 检查。
    """
    values: Dict[Tuple[int, int], object] = {}
    exact = True
    seen_lines: Dict[Tuple[int, int], int] = {}

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split('#', 1)[0]
        if not line.strip():
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise NetworkSyntaxError("速率文件每行应为 `i j value`", line_no, 1)
        try:
            i, j = int(tokens[0]) - 1, int(tokens[1]) - 1
        except ValueError:
            raise NetworkSyntaxError("配合物下标必须是整数", line_no, 1)
        if not network.has_edge(i, j):
            raise RateAssignmentError(f"第 {line_no} 行: 网络中不存在边 ({i + 1},{j + 1})")
        if (i, j) in seen_lines:
            raise RateAssignmentError(
                f"第 {line_no} 行: 边 ({i + 1},{j + 1}) 重复（首次在第 {seen_lines[(i, j)]} 行）")
        seen_lines[(i, j)] = line_no
        value_col = line.index(tokens[2], line.index(tokens[1]) + len(tokens[1])) + 1
        value, is_exact = parse_rate_literal(tokens[2], line_no, value_col)
        values[(i, j)] = value
        exact = exact and is_exact

    if not values:
        raise RateAssignmentError("速率文件为空")
    return RateAssignment(values, RateKind.EXACT if exact else RateKind.FLOAT)


def merge_rates(network: ReactionNetwork, inline: Optional[RateAssignment],
                override: Optional[RateAssignment]) -> RateAssignment:
    """--rates 覆盖行内速率；结果必须恰好覆盖整个边集"""
    if inline is None and override is None:
        raise RateAssignmentError("未提供速率：网络文件中没有行内速率，也没有 --rates 文件")
    merged: Dict[Tuple[int, int], object] = {}
    exact = True
    for source in (inline, override):
        if source is None:
            continue
        merged.update(source.values)
        exact = exact and source.is_exact
    if not exact:
        merged = {edge: float(value) for edge, value in merged.items()}
    result = RateAssignment(merged, RateKind.EXACT if exact else RateKind.FLOAT)
    result.check_domain(network)
    return result
