"""
Umemura 多项式验证工具 主程序入口
"""
import sys
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(BASE_DIR))

from ui.CommandLine import app  # noqa: E402


def main():
    app(prog_name="umemura")


if __name__ == "__main__":
    main()
