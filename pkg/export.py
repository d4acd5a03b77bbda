"""
基准文件导出工具
把 U_{n,m}^{(k)} 的规范文本写到 <dir>/<version>/U_<n>_<m>_<k>.txt，用于回归比对
"""
from pathlib import Path
from typing import List, Optional

import typer

from core.Config import Config
from core.Umemura import u_gen
from utils.ConsoleUtils import ConsoleUtils
from utils.FileUtils import FileUtils
from utils.FormatUtils import FormatUtils


def export_golden(output_dir, max_n: int, max_m: int, version: str = "v1", kind: str = "U") -> List[Path]:
    """
    导出 0 ≤ n ≤ max_n, 0 ≤ m ≤ max_m, 0 ≤ k ≤ n 的全部基准文件

    Args:
        output_dir: 基准根目录
        version: 版本子目录

    Returns:
        写出的文件路径（按 n, m, k 升序）
    """
    if max_n < 0 or max_m < 0:
        raise ValueError(f"max_n, max_m 必须非负: {max_n}, {max_m}")

    written = []
    for n in range(max_n + 1):
        for m in range(max_m + 1):
            for k in range(n + 1):
                path = FileUtils.golden_path(output_dir, version, kind, n, m, k)
                FileUtils.save_result(FormatUtils.to_text(u_gen(n, m, k)), path, "text")
                written.append(path)
    ConsoleUtils.ok(f"已导出 {len(written)} 个基准文件到 {Path(output_dir) / version}")
    return written


def compare_golden(output_dir, version: str = "v1") -> List[Path]:
    """
    重新计算目录中的每个基准文件并比对

    Returns:
        内容不一致的文件列表
    """
    mismatched = []
    for path in sorted((Path(output_dir) / version).glob("U_*_*_*.txt")):
        n, m, k = (int(part) for part in path.stem.split("_")[1:])
        expected = FormatUtils.to_text(u_gen(n, m, k)) + "\n"
        if path.read_text(encoding="utf-8") != expected:
            ConsoleUtils.fail(f"不一致: {path}")
            mismatched.append(path)
    return mismatched


def main(
        max_n: int = typer.Option(4, "--max-n"),
        max_m: int = typer.Option(3, "--max-m"),
        output_dir: Optional[Path] = typer.Option(None, "--dir", help="缺省取配置 output.golden_dir"),
        check: bool = typer.Option(False, "--check", help="只比对，不写入"),
):
    config = Config()
    output_dir = output_dir or Path(config.get("output.golden_dir", "./golden"))
    version = config.get("output.golden_version", "v1")
    if check:
        mismatched = compare_golden(output_dir, version)
        raise typer.Exit(1 if mismatched else 0)
    export_golden(output_dir, max_n, max_m, version)


if __name__ == "__main__":
    typer.run(main)
