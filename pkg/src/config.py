"""Конфигурация приложения."""
from functools import lru_cache
from pathlib import Path
from typing import Tuple

from pydantic_settings import BaseSettings, SettingsConfigDict

ROOT_DIR = Path(__file__).resolve().parent.parent


class Config(BaseSettings):
    """Конфигурация приложения, загружаемая из переменных окружения."""

    model_config = SettingsConfigDict(
        env_prefix='MEASURE_MODES_',
        env_file='.env',
        env_file_encoding='utf-8',
        extra='ignore'
    )

    # Каталоги
    DATA: Path = ROOT_DIR / "gallery"  # MEASURE_MODES_DATA переопределяет каталог галереи
    TEMPLATES: Path = ROOT_DIR / "templates"

    # Логирование
    LOG_LEVEL: str = "INFO"

    # Диагностика последовательностей
    SEED: int = 42
    TOLERANCE: float = 1e-6
    GRID_MAX_EXPONENT: int = 14  # сетка по умолчанию {2, 4, ..., 2^14}
    WINDOW: int = 4  # K последних значений для экстраполяции

    # Расходимость дискретных сумм
    DIVERGENCE_THRESHOLD: float = 1e6
    DIVERGENCE_MAX_TERMS: int = 100_000

    # Квадратуры
    QUADRATURE_TOLERANCE: float = 1e-9
    QUADRATURE_MAX_SUBINTERVALS: int = 1_000_000

    # Точность и поиск супремумов
    FLOAT_TOLERANCE: float = 1e-12
    EPSILON_LADDER: Tuple[float, ...] = (1e-2, 1e-4, 1e-6)
    HOLDER_SAMPLE_PAIRS: int = 10_000

    @property
    def default_grid(self) -> Tuple[int, ...]:
        """Сетка n по умолчанию."""
        return tuple(2 ** k for k in range(1, self.GRID_MAX_EXPONENT + 1))


@lru_cache(maxsize=1)
def get_config() -> Config:
    """
    Получение общего экземпляра конфигурации.

    Returns:
        Config: Конфигурация, прочитанная один раз за процесс
    """
    return Config()
