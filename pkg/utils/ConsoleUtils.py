"""
控制台输出工具模块
所有状态行写到 stderr，stdout 与报告文件保持逐字节可复现
"""
import typer


class ConsoleUtils:
    """控制台工具类"""

    verbose = True

    @staticmethod
    def ok(message: str):
        typer.secho(f"✓ {message}", fg=typer.colors.GREEN, err=True)

    @staticmethod
    def warn(message: str):
        typer.secho(f"⚠ {message}", fg=typer.colors.YELLOW, err=True)

    @staticmethod
    def fail(message: str):
        typer.secho(f"✗ {message}", fg=typer.colors.RED, err=True)

    @staticmethod
    def info(message: str):
        """普通提示，verbose 关闭时不输出"""
        if ConsoleUtils.verbose:
            typer.secho(message, err=True)
