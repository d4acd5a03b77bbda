"""
配置管理模块
config.json 中的项递归覆盖 DEFAULT_CONFIG，键用点分路径访问
"""
import copy
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from utils.ConsoleUtils import ConsoleUtils

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class Config:
    """配置管理类"""

    DEFAULT_CONFIG = {
        "suite": {
            "max_n": 3,
            "max_m": 2,
            "max_total": 6
        },
        "conventions": {
            "umemura_shift": 1,
            "det_signed": False,
            "det_swapped": False,
            "resolve_max_index": 5
        },
        "numeric": {
            "dps": 30,
            "fd_step": "1e-5",
            "t_samples": [1.5, 2, 3],
            "tolerance": 1e-5,
            "b3": 0.5,
            "b4": 0.25
        },
        "output": {
            "golden_dir": "./golden",
            "golden_version": "v1",
            "schema": 1,
            "timing": False
        },
        "known_discrepancies": ["lemma44", "thm41", "conj51"]
    }

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """
        Args:
            config_path: 配置文件路径，默认为项目根目录下的 config.json
        """
        self.config_path = Path(config_path) if config_path else PROJECT_ROOT / "config.json"
        self.config = self.load_config()

    def load_config(self) -> Dict[str, Any]:
        """读取配置并合并到默认值之上；文件不存在时写出默认配置"""
        defaults = copy.deepcopy(self.DEFAULT_CONFIG)
        if not self.config_path.exists():
            self._write(defaults)
            ConsoleUtils.info(f"已创建默认配置文件: {self.config_path}")
            return defaults
        try:
            loaded = json.loads(self.config_path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            ConsoleUtils.warn(f"配置文件无法读取 ({e})，改用默认配置")
            return defaults
        ConsoleUtils.info(f"已加载配置文件: {self.config_path}")
        return self._merge_config(defaults, loaded)

    def _write(self, data: Dict[str, Any]) -> bool:
        try:
            self.config_path.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")
        except OSError as e:
            ConsoleUtils.fail(f"写入配置失败: {e}")
            return False
        return True

    def save_config(self) -> bool:
        return self._write(self.config)

    @classmethod
    def _merge_config(cls, base: Dict, overrides: Dict) -> Dict:
        """overrides 递归覆盖 base（原地修改并返回 base）"""
        for key, value in overrides.items():
            if isinstance(base.get(key), dict) and isinstance(value, dict):
                cls._merge_config(base[key], value)
            else:
                base[key] = value
        return base

    def get(self, key_path: str, default=None):
        """按点分路径取值，例如 get("numeric.dps")；路径不存在时返回 default"""
        node = self.config
        for key in key_path.split("."):
            if not isinstance(node, dict) or key not in node:
                return default
            node = node[key]
        return node

    def set(self, key_path: str, value):
        *parents, leaf = key_path.split(".")
        node = self.config
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value

    def reset_to_default(self):
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
