"""Сервис для генерации отчётов: Markdown (Jinja2), HTML (markdown) и PDF (WeasyPrint)."""
import logging
from pathlib import Path
from typing import Optional

import markdown
from jinja2 import Environment, FileSystemLoader

from config import get_config
from schemas.reports import ReportDocument

logger = logging.getLogger(__name__)

FORMATS = ("text", "md", "html", "pdf")


def _environment(templates: Optional[Path] = None) -> Environment:
    directory = templates or get_config().TEMPLATES
    return Environment(loader=FileSystemLoader(str(directory)), trim_blocks=True, lstrip_blocks=True)


def render_markdown(document: ReportDocument, templates: Optional[Path] = None) -> str:
    """
    Markdown-таблица условий и вердиктов.

    Args:
        document: Отчёт
        templates: Каталог шаблонов (по умолчанию из конфигурации)

    Returns:
        str: Текст отчёта; он же печатается командами без --json
    """
    template = _environment(templates).get_template("report.md.j2")
    return template.render(**document.model_dump(mode="json"))


def render_html(document: ReportDocument, templates: Optional[Path] = None) -> str:
    """HTML-страница: Markdown отчёта, вставленный в шаблон report.html."""
    md = markdown.Markdown(
        extensions=[
            'extra',
            'sane_lists',
            'fenced_code',
            'tables',
        ],
        output_format='html5'
    )
    body = md.convert(render_markdown(document, templates))
    logger.debug(f"Markdown конвертирован в HTML (длина: {len(body)} символов)")
    template = _environment(templates).get_template("report.html")
    return template.render(content=body, kind=document.kind, timestamp=document.timestamp)


def write_pdf(document: ReportDocument, path: Path, templates: Optional[Path] = None) -> Path:
    """
    Генерация PDF с помощью WeasyPrint.

    WeasyPrint импортируется лениво: остальные форматы не требуют его
    системных библиотек.

    Raises:
        Exception: Ошибки WeasyPrint пробрасываются после записи в лог
    """
    try:
        from weasyprint import HTML
        from weasyprint.text.fonts import FontConfiguration

        html_content = render_html(document, templates)
        font_config = FontConfiguration()
        html = HTML(string=html_content, encoding='utf-8')
        html.write_pdf(str(path), font_config=font_config)
        logger.info(f"PDF сгенерирован: {path}")
        return Path(path)

    except Exception as e:
        logger.error(f"Ошибка при генерации PDF: {e}", exc_info=True)
        raise


def render(document: ReportDocument, fmt: str, output: Optional[Path] = None) -> Optional[str]:
    """
    Отчёт в одном из форматов text, md, html, pdf.

    Returns:
        Optional[str]: Текст для text/md/html; None для pdf (файл пишется в output)
    """
    if fmt in ("text", "md"):
        text = render_markdown(document)
    elif fmt == "html":
        text = render_html(document)
    elif fmt == "pdf":
        if output is None:
            raise ValueError("Для PDF нужен путь --output")
        write_pdf(document, output)
        return None
    else:
        raise ValueError(f"Неизвестный формат отчёта '{fmt}'; доступны: {', '.join(FORMATS)}")
    if output is not None:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Отчёт записан: {output}")
    return text
