"""Главный модуль приложения."""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from config import get_config
from handlers.commands import EXIT_INPUT_ERROR, Flags, execute
from services.report import FORMATS
from utils.enums import EstimatorClass, Mode

logging.basicConfig(
    level=getattr(logging, get_config().LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _grid(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"сетка должна быть списком натуральных чисел через запятую: {text}") from exc


def _modes(text: str) -> Tuple[Mode, ...]:
    try:
        return tuple(Mode(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"неизвестный режим в '{text}'; доступны: "
                                         f"{', '.join(m.value for m in Mode)}") from exc


def _classes(text: str) -> Optional[Tuple[EstimatorClass, ...]]:
    if text == "all":
        return None
    try:
        return tuple(EstimatorClass(part.strip()) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"неизвестный класс в '{text}'; доступны: all, "
                                         f"{', '.join(c.value for c in EstimatorClass)}") from exc


def build_parser() -> argparse.ArgumentParser:
    """Разбор аргументов measure-modes."""
    parser = argparse.ArgumentParser(prog="measure-modes",
                                     description="Режимы сходимости мер: расстояние полной вариации, "
                                                 "диагностика последовательностей, галерея примеров")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", type=Path, help="записать ReportDocument в JSON")
    common.add_argument("--seed", type=int, help="зерно случайных пробных семейств")
    common.add_argument("--grid", type=_grid, help="сетка n через запятую, например 2,4,8,16")
    common.add_argument("--tol", type=float, help="точность пределов")
    common.add_argument("--no-timestamp", action="store_true", help="не записывать время формирования")

    commands = parser.add_subparsers(dest="command", required=True)

    tv_parser = commands.add_parser("tv", parents=[common], help="расстояние полной вариации двух мер")
    tv_parser.add_argument("file_a", type=Path)
    tv_parser.add_argument("file_b", type=Path)
    tv_parser.add_argument("--classes", type=_classes, default=None, help="классы оценок через запятую или all")

    diagnose_parser = commands.add_parser("diagnose", parents=[common], help="диагностика последовательности")
    diagnose_parser.add_argument("spec", type=Path)
    diagnose_parser.add_argument("--modes", type=_modes, help="режимы через запятую: vague,weak,setwise,tv")
    diagnose_parser.add_argument("--traces", type=Path, help="записать трассы в CSV (probe_id,n,value)")

    gallery_parser = commands.add_parser("gallery", parents=[common], help="галерея примеров")
    gallery_parser.add_argument("sub", choices=["list", "show", "run"])
    gallery_parser.add_argument("case_id", nargs="?")

    report_parser = commands.add_parser("report", help="отрисовка сохранённого отчёта")
    report_parser.add_argument("path", type=Path)
    report_parser.add_argument("--format", choices=FORMATS, default="text")
    report_parser.add_argument("--output", type=Path)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Главная функция запуска приложения."""
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code else 0
    args = vars(namespace)
    flags = Flags(
        json=args.get("json"),
        traces=args.get("traces"),
        seed=args.get("seed"),
        grid=args.get("grid"),
        tol=args.get("tol"),
        no_timestamp=bool(args.get("no_timestamp")),
        modes=args.get("modes"),
        classes=args.get("classes"),
    )
    logger.debug(f"Команда {namespace.command}: {flags}")
    return execute(namespace.command, args, flags)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Приложение остановлено")
    except Exception as e:
        logger.error(f"Критическая ошибка: {e}")
        sys.exit(EXIT_INPUT_ERROR)
