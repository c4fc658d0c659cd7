"""
Sistema de logging estruturado com loguru
"""

import json
import sys
from pathlib import Path

import psutil
from loguru import logger

from app.config import settings

CONSOLE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"


def _json_format(record) -> str:
    """Serializa o registro em uma linha JSON (guardada em extra para o loguru)"""
    record["extra"]["serialized"] = json.dumps(
        {
            "timestamp": record["time"].isoformat(),
            "level": record["level"].name,
            "logger": record["name"],
            "function": record["function"],
            "line": record["line"],
            "message": record["message"],
            "extra": {k: v for k, v in record["extra"].items() if k != "serialized"},
            "service": settings.engine_name,
            "version": settings.engine_version,
        },
        default=str,
    )
    return "{extra[serialized]}\n"


def setup_logging():
    """Configura o sistema de logging

    stdout fica reservado para os relatórios JSON/CSV; o console de log é stderr.
    """

    # Remove logger padrão
    logger.remove()

    if settings.debug:
        logger.add(sys.stderr, format=CONSOLE_FORMAT, level="DEBUG", colorize=True)
    else:
        logger.add(sys.stderr, format=_json_format, level=settings.log_level)

    if not settings.log_to_file:
        return

    log_dir = Path(settings.log_dir)
    log_dir.mkdir(exist_ok=True)

    # Log do motor
    logger.add(
        log_dir / "engine.log",
        format=FILE_FORMAT,
        level="INFO",
        rotation="10 MB",
        retention="30 days",
        compression="zip",
    )

    # Log de erros
    logger.add(
        log_dir / "error.log",
        format=FILE_FORMAT,
        level="ERROR",
        rotation="10 MB",
        retention="90 days",
        compression="zip",
    )

    # Log de performance
    logger.add(
        log_dir / "performance.log",
        format=_json_format,
        level="INFO",
        filter=lambda record: record["extra"].get("type") == "performance",
        rotation="10 MB",
        retention="30 days",
        compression="zip",
    )


def log_cache_hit(key: str):
    """Log de cache hit"""
    logger.bind(cache_key=key, type="cache_hit").debug(f"Cache HIT: {key}")


def log_cache_miss(key: str):
    """Log de cache miss"""
    logger.bind(cache_key=key, type="cache_miss").debug(f"Cache MISS: {key}")


def log_certificate(kind: str, margin: str, details: dict = None):
    """Log de certificados emitidos ou verificados"""
    logger.bind(kind=kind, margin=margin, details=details or {}, type="certificate").info(
        f"Certificado {kind}: margem {margin}"
    )


def log_error(error: Exception, context: dict = None):
    """Log de erros"""
    logger.bind(
        error_type=type(error).__name__,
        error_message=str(error),
        context=context or {},
        type="error",
    ).error(f"Error: {str(error)}")


def log_performance(operation: str, duration: float, details: dict = None):
    """Log de performance (inclui memória residente do processo)"""
    rss_mb = psutil.Process().memory_info().rss / 2**20
    logger.bind(
        operation=operation,
        duration=duration,
        rss_mb=round(rss_mb, 1),
        details=details or {},
        type="performance",
    ).info(f"Performance: {operation} ({duration:.3f}s)")


# Configura logging na inicialização
setup_logging()
