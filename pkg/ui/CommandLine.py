"""
命令行界面模块
使用 typer 构建，命令：compute / verify / scan-conjecture / residual / resolve

退出码：0 成功，1 存在意外的恒等式失败（仅 verify），2 输入无效，3 I/O 错误，4 内部错误
"""
import json
import time
from enum import Enum
from functools import wraps
from pathlib import Path
from typing import Callable, List, Optional

import typer
from tqdm import tqdm

from core.Config import Config
from core.Errors import BranchDomain, InvalidK
from core.Identities import (FAIL, IDENTITY_IDS, SuiteBounds, check_plucker_conjecture, run_suite, suite_document,
                             unexpected_failures)
from core.Painleve import RESIDUAL_CASES, ResidualSettings, residual_table
from core.Umemura import resolve_conventions, u_gen, u_gen_det
from utils.ConsoleUtils import ConsoleUtils
from utils.FileUtils import FileUtils
from utils.FormatUtils import FormatUtils

app = typer.Typer(add_completion=False, no_args_is_help=True,
                  help="Umemura 多项式族的精确计算与恒等式验证工具")

EXIT_UNEXPECTED_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


class OutputFormat(str, Enum):
    text = "text"
    latex = "latex"
    json = "json"


class PolynomialKind(str, Enum):
    U = "U"
    det = "det"


class ResidualCase(str, Enum):
    prop46i = "prop46i"
    prop46ii = "prop46ii"
    prop46iii = "prop46iii"
    sec5_qm = "sec5-qm"
    seed = "seed"


_state = {"config": None}


def get_config() -> Config:
    if _state["config"] is None:
        _state["config"] = Config()
    return _state["config"]


@app.callback()
def main_options(
        config: Optional[Path] = typer.Option(None, "--config", help="配置文件路径"),
        quiet: bool = typer.Option(False, "--quiet", "-q", help="不输出普通提示"),
):
    ConsoleUtils.verbose = not quiet
    _state["config"] = Config(config_path=config) if config else None


def guarded(command: Callable) -> Callable:
    """把异常映射为约定的退出码"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except typer.Exit:
            raise
        except (InvalidK, BranchDomain, ValueError) as e:
            ConsoleUtils.fail(f"输入无效: {e}")
            raise typer.Exit(EXIT_INVALID_INPUT)
        except OSError as e:
            ConsoleUtils.fail(f"读写失败: {e}")
            raise typer.Exit(EXIT_IO)
        except Exception as e:
            ConsoleUtils.fail(f"内部错误: {type(e).__name__}: {e}")
            raise typer.Exit(EXIT_INTERNAL)

    return wrapper


def emit(content, out: Optional[Path], format: str):
    """写到文件，未指定 out 时写到 stdout"""
    if out is not None:
        FileUtils.save_result(content, out, format)
        return
    if format == "json" and not isinstance(content, str):
        content = FileUtils.dumps(content)
    typer.echo(content, nl=not content.endswith("\n"))


def _progress_bar(description: str):
    state = {"bar": None}

    def callback(current: int, total: int, message: str):
        if state["bar"] is None:
            state["bar"] = tqdm(total=total, desc=description, leave=False, disable=not ConsoleUtils.verbose)
        state["bar"].set_postfix_str(message, refresh=False)
        state["bar"].update(1)
        if current == total:
            state["bar"].close()

    return callback


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------

@app.command()
@guarded
def compute(
        n: int = typer.Argument(..., help="n ≥ 0"),
        m: int = typer.Argument(..., help="m ≥ 0"),
        k: int = typer.Argument(0, help="0 ≤ k ≤ n"),
        format: OutputFormat = typer.Option(OutputFormat.text, "--format", "-f", help="输出格式"),
        kind: PolynomialKind = typer.Option(PolynomialKind.U, "--kind", help="U: 子集求和定义；det: 行列式表示"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="输出文件"),
        golden: Optional[Path] = typer.Option(None, "--golden", help="同时写入基准目录"),
):
    """计算 U_{n,m}^{(k)} 并输出规范序列化"""
    if n < 0 or m < 0:
        raise ValueError(f"n, m 必须非负: n={n}, m={m}")
    config = get_config()
    if kind == PolynomialKind.det:
        p = u_gen_det(n, m, k, config.get("conventions.det_signed", False),
                      config.get("conventions.det_swapped", False))
    else:
        p = u_gen(n, m, k)

    if format == OutputFormat.json:
        content = {"schema": config.get("output.schema", 1), "kind": kind.value, "n": n, "m": m, "k": k,
                   "polynomial": FormatUtils.to_json(p)}
    elif format == OutputFormat.latex:
        content = FormatUtils.to_latex(p) + "\n"
    else:
        content = FormatUtils.to_text(p) + "\n"
    emit(content, out, format.value)

    if golden is not None:
        path = FileUtils.golden_path(golden, config.get("output.golden_version", "v1"), kind.value, n, m, k)
        FileUtils.save_result(FormatUtils.to_text(p), path, "text")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def read_known_discrepancies(path: Path) -> List[str]:
    """JSON 数组，或以空白分隔的 id 列表（# 开头的行为注释）"""
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except ValueError:
        return [token for line in text.splitlines() if not line.lstrip().startswith("#")
                for token in line.split()]
    if not isinstance(data, list):
        raise ValueError(f"{path}: 需要 JSON 数组")
    return [str(item) for item in data]


@app.command()
@guarded
def verify(
        ids: Optional[List[str]] = typer.Argument(None, help="恒等式 id，缺省为全部"),
        max_n: Optional[int] = typer.Option(None, "--max-n", help="n 的上界"),
        max_m: Optional[int] = typer.Option(None, "--max-m", help="m 的上界"),
        max_total: Optional[int] = typer.Option(None, "--max-total", help="n + 2m（eq42 为 n + m）的上界"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON 报告文件"),
        known_discrepancies: Optional[Path] = typer.Option(None, "--known-discrepancies",
                                                           help="已知不符项列表文件"),
        shift: Optional[int] = typer.Option(None, "--shift", help="Umemura 指标平移"),
        timing: bool = typer.Option(False, "--timing", help="记录 wall_time_ms"),
):
    """运行恒等式验证套件并写出 JSON 报告"""
    config = get_config()
    ids = list(ids or IDENTITY_IDS)
    unknown = [i for i in ids if i not in IDENTITY_IDS]
    if unknown:
        raise ValueError(f"未知恒等式: {unknown}，可选: {', '.join(IDENTITY_IDS)}")
    known = (read_known_discrepancies(known_discrepancies) if known_discrepancies is not None
             else config.get("known_discrepancies", []))

    bound = SuiteBounds(
        max_n=config.get("suite.max_n", 0) if max_n is None else max_n,
        max_m=config.get("suite.max_m", 0) if max_m is None else max_m,
        max_total=config.get("suite.max_total") if max_total is None else max_total,
    )
    shift = config.get("conventions.umemura_shift", 1) if shift is None else shift
    reports = run_suite({identity: bound for identity in ids}, shift=shift,
                        progress_callback=_progress_bar("verify"),
                        timing=timing or config.get("output.timing", False))

    document = suite_document(reports, known, config.get("output.schema", 1))
    emit(document, out, "json")

    failures = unexpected_failures(reports, known)
    summary = document["summary"]
    ConsoleUtils.info(f"pass {summary['pass']}, conditional {summary['conditional']}, fail {summary['fail']}")
    for report in reports:
        if report.status == FAIL and report.id in set(known):
            ConsoleUtils.warn(f"已知不符: {report.id} {report.params}")
    if failures:
        for report in failures:
            ConsoleUtils.fail(f"{report.id} {report.params}")
        raise typer.Exit(EXIT_UNEXPECTED_FAILURE)
    ConsoleUtils.ok("没有意外失败")


# ---------------------------------------------------------------------------
# scan-conjecture
# ---------------------------------------------------------------------------

@app.command("scan-conjecture")
@guarded
def scan_conjecture(
        max_m: int = typer.Argument(..., help="m 的上界（≥ 1）"),
        shift: Optional[int] = typer.Option(None, "--shift", help="Umemura 指标平移"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON 结果文件"),
        timing: bool = typer.Option(False, "--timing", help="在 stderr 报告每个 m 的耗时"),
):
    """逐个 m 检查 b₁ = 0 时的 Plücker 型猜想；判定结果是数据，不影响退出码"""
    if max_m < 1:
        raise ValueError(f"max_m 必须 ≥ 1: {max_m}")
    config = get_config()
    shift = config.get("conventions.umemura_shift", 1) if shift is None else shift

    lines, reports = [], []
    for m in range(max(1, shift), max_m + 1):
        started = time.perf_counter()
        report = check_plucker_conjecture(m, shift)
        elapsed = time.perf_counter() - started
        reports.append(report)
        lines.append(f"m={m} {report.status} convention={report.convention}")
        if timing:
            ConsoleUtils.info(f"m={m}: {elapsed * 1000:.0f} ms")

    if out is not None:
        FileUtils.save_result({"schema": config.get("output.schema", 1), "shift": shift,
                               "reports": [r.to_dict() for r in reports]}, out, "json")
    for line in lines:
        typer.echo(line)


# ---------------------------------------------------------------------------
# residual
# ---------------------------------------------------------------------------

@app.command()
@guarded
def residual(
        case: ResidualCase = typer.Argument(..., help=f"用例: {', '.join(RESIDUAL_CASES)}"),
        m: int = typer.Option(1, "--m", help="m"),
        n: int = typer.Option(1, "--n", help="n（prop46iii）"),
        b1: float = typer.Option(0.3, "--b1"),
        b2: float = typer.Option(0.2, "--b2"),
        b3: Optional[float] = typer.Option(None, "--b3", help="prop46ii 的 b3"),
        b4: Optional[float] = typer.Option(None, "--b4", help="prop46ii 的 b4"),
        t: Optional[List[float]] = typer.Option(None, "--t", help="采样点 t > 1，可重复"),
        dps: Optional[int] = typer.Option(None, "--dps", help="mpmath 精度（十进制位数）"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON 结果文件"),
):
    """输出 Painlevé 残差表（JSON）"""
    config = get_config()
    t_values = list(t) if t else list(config.get("numeric.t_samples", [1.5, 2, 3]))
    bad = [value for value in t_values if value <= 1]
    if bad:
        raise BranchDomain(f"需要 t > 1: {bad}")
    settings = ResidualSettings(
        m=m, n=n, b1=b1, b2=b2,
        b3=config.get("numeric.b3", 0.5) if b3 is None else b3,
        b4=config.get("numeric.b4", 0.25) if b4 is None else b4,
        shift=config.get("conventions.umemura_shift", 1),
        step=str(config.get("numeric.fd_step", "1e-5")),
        dps=config.get("numeric.dps", 30) if dps is None else dps,
    )
    rows = residual_table(case.value, t_values, settings)
    emit({"schema": config.get("output.schema", 1), "case": case.value, "rows": rows}, out, "json")

    tolerance = config.get("numeric.tolerance", 1e-5)
    small = sum(1 for row in rows if _smallest_residual(row) <= tolerance)
    ConsoleUtils.info(f"{small}/{len(rows)} 行的最小残差 ≤ {tolerance}")


RESIDUAL_COLUMNS = ("residual_printed_bracket", "residual_squared_bracket", "pvi_residual")


def _smallest_residual(row: dict) -> float:
    values = [row[key] for key in RESIDUAL_COLUMNS if row.get(key) is not None]
    if "dq_residual" in row:
        values.append(max(row["dq_residual"], row["dp_residual"]))
    return min(values, default=float("inf"))


# ---------------------------------------------------------------------------
# resolve
# ---------------------------------------------------------------------------

@app.command()
@guarded
def resolve(
        max_index: Optional[int] = typer.Option(None, "--max-index", help="比较到的最大下标"),
        extended: bool = typer.Option(False, "--extended", help="同时允许线性变量对应 (v∓2)/4"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON 结果文件"),
):
    """统一 Toda 递推、显式公式与子集求和定义的归一化约定"""
    config = get_config()
    max_index = config.get("conventions.resolve_max_index", 5) if max_index is None else max_index
    if max_index < 1:
        raise ValueError(f"max_index 必须 ≥ 1: {max_index}")
    resolution = resolve_conventions(max_index, extended=extended)
    document = {"schema": config.get("output.schema", 1), "resolution": resolution.to_dict()}
    emit(document, out, "json")
    if resolution.status == "resolved":
        ConsoleUtils.ok(f"已统一: shift={resolution.shift}, α={resolution.alpha}, β={resolution.beta}")
    else:
        ConsoleUtils.warn(f"未统一，最小反例: {resolution.counterexample}")
