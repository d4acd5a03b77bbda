"""
文件处理工具模块
处理结果文件与目录操作
"""
import json
from pathlib import Path
from typing import Union

from utils.ConsoleUtils import ConsoleUtils


class FileUtils:
    """文件工具类"""

    # 支持的输出格式
    SUPPORTED_FORMATS = {"text", "latex", "json"}

    @staticmethod
    def dumps(data) -> str:
        """确定性的 JSON 文本：键排序、两空格缩进、末尾换行"""
        return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def save_result(
            content: Union[str, dict, list],
            output_path: Union[str, Path],
            format: str = "text"
    ) -> bool:
        """
        保存计算结果

        Args:
            content: 文本（text / latex）或可序列化对象（json）
            output_path: 输出文件路径
            format: 输出格式 (text, latex, json)

        Returns:
            是否保存成功

        Raises:
            ValueError: 不支持的格式
            OSError: 写入失败
        """
        if format not in FileUtils.SUPPORTED_FORMATS:
            raise ValueError(f"不支持的输出格式: {format}")
        output_path = Path(output_path)
        FileUtils.ensure_directory(output_path.parent)

        if format == "json":
            text = content if isinstance(content, str) else FileUtils.dumps(content)
        else:
            text = content if content.endswith("\n") else content + "\n"
        with open(output_path, 'w', encoding='utf-8', newline="\n") as f:
            f.write(text)
        ConsoleUtils.info(f"✓ 已写入: {output_path}")
        return True

    @staticmethod
    def golden_path(directory: Union[str, Path], version: str, kind: str, n: int, m: int, k: int) -> Path:
        """
        生成基准文件路径 DIR/<version>/<kind>_<n>_<m>_<k>.txt

        Args:
            kind: 多项式种类，例如 "U"
        """
        return Path(directory) / version / f"{kind}_{n}_{m}_{k}.txt"

    @staticmethod
    def ensure_directory(directory: Union[str, Path]) -> Path:
        """
        确保目录存在，不存在则创建

        Args:
            directory: 目录路径

        Returns:
            目录路径对象
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        return directory
