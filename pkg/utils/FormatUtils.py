"""
多项式格式化工具模块
规范文本 / JSON / LaTeX 三种序列化，以及文本解析
"""
import math
from typing import Dict, List

import sympy
from sympy.polys.domains import QQ

from core.ExactPoly import MPoly, Rational, ZW, qq


class FormatUtils:
    """多项式格式化工具类"""

    @staticmethod
    def format_rational(value) -> str:
        """整数写成 "n"，其余写成 "n/d" """
        value = qq(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    @staticmethod
    def canonical_terms(p: MPoly) -> List[tuple]:
        """按全次数降序、再按指数字典序降序排列的 (指数, 系数) 列表"""
        return sorted(p.terms(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    @staticmethod
    def to_text(p: MPoly) -> str:
        """
        规范文本形式，例如 "-1*a*z^2 + 1*w^2 + ..."

        Args:
            p: 任意 sympy 稀疏多项式

        Returns:
            文本；零多项式为 "0"，常数 1 为 "1"
        """
        if not p:
            return "0"
        symbols = [str(s) for s in p.ring.symbols]
        pieces = []
        for monom, coeff in FormatUtils.canonical_terms(p):
            factors = [FormatUtils.format_rational(coeff)]
            for name, exponent in zip(symbols, monom):
                if exponent == 1:
                    factors.append(name)
                elif exponent > 1:
                    factors.append(f"{name}^{exponent}")
            pieces.append("*".join(factors))
        return " + ".join(pieces)

    @staticmethod
    def from_text(text: str, target=ZW) -> MPoly:
        """解析 to_text 的输出；变量名必须属于 target"""
        text = text.strip()
        index = {str(s): i for i, s in enumerate(target.symbols)}
        terms: Dict[tuple, Rational] = {}
        if text in ("", "0"):
            return target.zero
        for piece in text.split(" + "):
            factors = piece.strip().split("*")
            coeff = QQ.one
            exps = [0] * target.ngens
            for factor in factors:
                name, _, power = factor.partition("^")
                if name in index:
                    exps[index[name]] += int(power) if power else 1
                else:
                    coeff *= qq(factor)
            key = tuple(exps)
            terms[key] = terms.get(key, QQ.zero) + coeff
        return target.from_dict(terms)

    @staticmethod
    def to_json(p: MPoly) -> dict:
        """{"variables": [...], "terms": [{"coeff": "n/d", "exps": [...]}, ...]}"""
        return {
            "variables": [str(s) for s in p.ring.symbols],
            "terms": [
                {"coeff": FormatUtils.format_rational(coeff), "exps": list(monom)}
                for monom, coeff in FormatUtils.canonical_terms(p)
            ],
        }

    @staticmethod
    def from_json(data: dict, target=ZW) -> MPoly:
        if [str(s) for s in target.symbols] != list(data.get("variables", [])):
            raise ValueError(f"变量不匹配: {data.get('variables')}")
        return target.from_dict({tuple(t["exps"]): qq(t["coeff"]) for t in data["terms"]})

    @staticmethod
    def _latex_factor(factor, a, b) -> str:
        """a + j^2 写成 \\bar{a}_{j+1}，b 同理"""
        for symbol in (a, b):
            rest = sympy.expand(factor - symbol)
            if rest.is_Integer and rest >= 0:
                root = math.isqrt(int(rest))
                if root * root == int(rest):
                    return rf"\bar{{{symbol}}}_{{{root + 1}}}"
        return f"({sympy.latex(factor)})"

    @staticmethod
    def to_latex(p: MPoly) -> str:
        """
        按 (z, w) 单项式分组，系数用 factor_list 分解，参数因子写成 \\bar{a}_k 形式
        """
        if not p:
            return "0"
        target = p.ring
        a, b = sympy.Symbol("a"), sympy.Symbol("b")
        z_name, w_name = str(target.symbols[0]), str(target.symbols[1])
        groups: Dict[tuple, dict] = {}
        for monom, coeff in p.terms():
            groups.setdefault(monom[:2], {})[(0, 0) + tuple(monom[2:])] = coeff

        pieces = []
        for zw in sorted(groups, key=lambda e: (sum(e), e), reverse=True):
            coefficient = target.from_dict(groups[zw]).as_expr()
            constant, factors = sympy.factor_list(coefficient)
            body = []
            for factor, multiplicity in factors:
                rendered = FormatUtils._latex_factor(factor, a, b)
                body.append(rendered if multiplicity == 1 else f"{rendered}^{{{multiplicity}}}")
            for name, exponent in ((z_name, zw[0]), (w_name, zw[1])):
                if exponent:
                    body.append(name if exponent == 1 else f"{name}^{{{exponent}}}")
            sign = "-" if constant < 0 else "+"
            magnitude = abs(constant)
            lead = "" if magnitude == 1 and body else sympy.latex(magnitude)
            pieces.append((sign, " ".join(filter(None, [lead] + body))))

        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text
