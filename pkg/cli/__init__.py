from .config import RunConfig, Task, build_config
from .main import build_parser, main, run

__all__ = ["RunConfig", "Task", "build_config", "build_parser", "main", "run"]
