"""JSON-форматы мер и последовательностей."""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from core.density import make_density
from core.measure import Atom, DiscreteRule, Measure, Piece, SignedMeasure
from core.numbers import format_number
from core.space import Interval, NatSet, Space
from schemas.literals import parse_number, parse_set
from services.sequences import NAMED, MeasureSequence
from utils.enums import DensityKind, RuleKind, SpaceKind
from utils.exceptions import ParseError, SpaceMismatchError

logger = logging.getLogger(__name__)

NumberLike = Union[int, float, str]


def parse_space(text: str) -> Space:
    """
    Пространство из записи "real_line", "real_line[1,inf)", "discrete_nat" или "cofinite_nat".

    Raises:
        ParseError: Неизвестный вид пространства
    """
    text = text.strip()
    if text == SpaceKind.DISCRETE_NAT.value:
        return Space.discrete_nat()
    if text == SpaceKind.COFINITE_NAT.value:
        return Space.cofinite_nat()
    if text.startswith(SpaceKind.REAL_LINE.value):
        rest = text[len(SpaceKind.REAL_LINE.value):].strip()
        if not rest:
            return Space.real_line()
        if rest[0] not in "([" or rest[-1] not in ")]" or "," not in rest:
            raise ParseError(f"Ожидался интервал области: '{rest}'", "space")
        lo, hi = rest[1:-1].split(",", 1)
        return Space.real_line(parse_number(lo), parse_number(hi), rest[0] == "[", rest[-1] == "]")
    raise ParseError(f"Неизвестное пространство '{text}'", "space")


def _interval(text: str, n: Optional[int]) -> Interval:
    text = text.strip()
    if len(text) < 5 or text[0] not in "([" or text[-1] not in ")]":
        raise ParseError(f"Ожидался интервал вида (a,b]: '{text}'")
    lo, hi = text[1:-1].split(",", 1)
    return Interval.make(parse_number(lo, n), parse_number(hi, n), text[0] == "[", text[-1] == "]")


def _numbers(value: Any, n: Optional[int]) -> Any:
    if isinstance(value, list):
        return [_numbers(v, n) for v in value]
    return parse_number(value, n)


class AtomSpec(BaseModel):
    """Атом: точка и масса."""
    at: NumberLike
    mass: NumberLike


class DensitySpec(BaseModel):
    """Плотность: вид и параметры."""
    form: DensityKind
    params: Dict[str, Any] = Field(default_factory=dict)


class PieceSpec(BaseModel):
    """Кусок с плотностью на интервале."""
    interval: str
    density: DensitySpec


class DiscreteSpec(BaseModel):
    """Дискретное правило весов на ℕ."""
    rule: RuleKind
    support: str = "X"
    coefficient: NumberLike = 1
    exponent: NumberLike = 0
    ratio: NumberLike = 1


class MeasureSpec(BaseModel):
    """
    Описание меры.

    Строковые поля могут содержать выражения от n: такие описания служат
    шаблонами членов последовательности.
    """
    space: Optional[str] = None
    signed: bool = False
    atoms: List[AtomSpec] = Field(default_factory=list)
    pieces: List[PieceSpec] = Field(default_factory=list)
    discrete: List[DiscreteSpec] = Field(default_factory=list)

    @field_validator("discrete", mode="before")
    @classmethod
    def single_rule(cls, value):
        return [value] if isinstance(value, dict) else value

    def build(self, space: Optional[Space] = None, n: Optional[int] = None) -> SignedMeasure:
        """
        Сборка меры.

        Args:
            space: Пространство внешнего описания (последовательности)
            n: Значение n для шаблона

        Returns:
            SignedMeasure: Measure, если signed = False

        Raises:
            ParseError: Нет пространства или ошибка в литерале
            SpaceMismatchError: Пространство описания не совпадает с внешним
        """
        own = parse_space(self.space) if self.space else None
        if own is not None and space is not None and own != space:
            raise SpaceMismatchError(own, space)
        space = own or space
        if space is None:
            raise ParseError("Не задано пространство меры", "space")
        atoms = tuple(Atom(parse_number(a.at, n), parse_number(a.mass, n)) for a in self.atoms)
        pieces = []
        for index, piece in enumerate(self.pieces):
            try:
                params = {key: _numbers(value, n) for key, value in piece.density.params.items()}
                pieces.append(Piece(_interval(piece.interval, n), make_density(piece.density.form, params)))
            except (KeyError, ValueError) as exc:
                raise ParseError(f"Некорректные параметры плотности: {exc}", f"pieces.{index}.density") from exc
        rules = []
        for index, rule in enumerate(self.discrete):
            support = parse_set(rule.support, space, n)
            if not isinstance(support, NatSet):
                raise ParseError("Дискретные правила допустимы только на ℕ", f"discrete.{index}.support")
            rules.append(DiscreteRule(rule.rule, parse_number(rule.coefficient, n), support,
                                      Fraction(parse_number(rule.exponent, n)), parse_number(rule.ratio, n)))
        cls = SignedMeasure if self.signed else Measure
        return cls(space, atoms, tuple(pieces), tuple(rules))


def measure_to_spec(m: SignedMeasure) -> Dict[str, Any]:
    """Обратное преобразование меры в JSON-описание."""
    data: Dict[str, Any] = {"space": str(m.space)}
    if not isinstance(m, Measure):
        data["signed"] = True
    if m.atoms:
        data["atoms"] = [{"at": format_number(a.at), "mass": format_number(a.mass)} for a in m.atoms]
    if m.pieces:
        data["pieces"] = [{"interval": str(p.interval),
                           "density": {"form": p.density.kind.value, "params": p.density.params()}}
                          for p in m.pieces]
    if m.discrete:
        data["discrete"] = [{"rule": r.kind.value, "support": str(r.support),
                             "coefficient": format_number(r.coefficient),
                             "exponent": format_number(r.exponent), "ratio": format_number(r.ratio)}
                            for r in m.discrete]
    return data


class SequenceSpec(BaseModel):
    """
    Описание последовательности: именованный конструктор или шаблон меры от n.

    Attributes:
        space: Пространство (для шаблонов)
        rule: Имя конструктора или шаблон MeasureSpec
        limit: Кандидат в пределы (обязателен для шаблона)
        grid: Сетка n
        name: Имя для отчётов
    """
    space: Optional[str] = None
    rule: Union[str, MeasureSpec]
    limit: Optional[MeasureSpec] = None
    grid: Optional[List[int]] = None
    name: Optional[str] = None

    def build(self, grid: Optional[List[int]] = None) -> MeasureSequence:
        grid = tuple(grid or self.grid or ())
        if isinstance(self.rule, str):
            constructor = NAMED.get(self.rule)
            if constructor is None:
                raise ParseError(f"Неизвестный конструктор '{self.rule}'; доступны: {', '.join(NAMED)}", "rule")
            seq = constructor(grid)
            if self.space and parse_space(self.space) != seq.space:
                raise SpaceMismatchError(parse_space(self.space), seq.space)
            if self.limit is not None:
                limit = self.limit.build(seq.space)
                seq = MeasureSequence(self.name or seq.name, seq.rule, limit, seq.grid, seq.hints, seq.params)
            return seq
        if self.limit is None:
            raise ParseError("Для шаблона последовательности нужен предел", "limit")
        space = parse_space(self.space) if self.space else None
        limit = self.limit.build(space)
        template = self.rule

        def rule(n: int) -> SignedMeasure:
            return template.build(limit.space, n)

        return MeasureSequence(self.name or "template", rule, limit, grid)


def _read_json(path: Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"Не удалось прочитать файл: {exc}", str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"Некорректный JSON: {exc.msg}", f"{path}:{exc.lineno}:{exc.colno}") from exc


def _location(exc: ValidationError) -> str:
    error = exc.errors()[0]
    return ".".join(str(part) for part in error["loc"])


def load_measure(path: Path) -> SignedMeasure:
    """
    Чтение меры из JSON-файла.

    Raises:
        ParseError: Синтаксис JSON (строка и столбец) или поле (путь loc)
    """
    data = _read_json(path)
    try:
        spec = MeasureSpec.model_validate(data)
    except ValidationError as exc:
        raise ParseError(exc.errors()[0]["msg"], f"{path}:{_location(exc)}") from exc
    logger.debug(f"Мера прочитана из {path}: {spec.space}")
    return spec.build()


def load_sequence(path: Path, grid: Optional[List[int]] = None) -> MeasureSequence:
    """Чтение описания последовательности из JSON-файла."""
    data = _read_json(path)
    try:
        spec = SequenceSpec.model_validate(data)
    except ValidationError as exc:
        raise ParseError(exc.errors()[0]["msg"], f"{path}:{_location(exc)}") from exc
    sequence = spec.build(grid)
    logger.info(f"Последовательность {sequence.name} прочитана из {path}, точек сетки: {len(sequence.grid)}")
    return sequence
