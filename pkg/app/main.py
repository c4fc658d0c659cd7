"""
Ponto de entrada do motor de lacunas: `python -m app.main <subcomando> [flags]`
"""

import argparse
import sys
import time
import uuid
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from app.cli.commands import HANDLERS
from app.config import settings
from app.exceptions import GapEngineError
from app.services.cache_service import integral_cache
from app.utils.logger import log_error, log_performance, logger


def _config_flags() -> argparse.ArgumentParser:
    """Flags comuns da configuração do critério"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--r", type=int, default=None, help=f"potência r (default {settings.default_r})")
    parent.add_argument("--eta", default=None, help=f"η racional (default {settings.default_eta})")
    parent.add_argument("--poly", default=None, help='coeficientes de P, constante primeiro (ex.: "1,-0.1,100,-0.2")')
    parent.add_argument("--J", type=int, default=None, help=f"truncamento da série (default {settings.truncation_j})")
    parent.add_argument("--prec", type=int, default=None, help=f"precisão em bits (default {settings.precision_bits})")
    parent.add_argument(
        "--scan-max", dest="scan_max", default=None, help=f"fim da varredura em múltiplos de π (default {settings.scan_max_pi})"
    )
    parent.add_argument("--out", default=None, help="arquivo de saída (default stdout)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.engine_name,
        description="Motor numérico certificado para cotas de lacunas entre zeros da zeta",
    )
    parser.add_argument("--version", action="version", version=settings.engine_version)
    common = _config_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    constants = sub.add_parser("constants", parents=[common], help="a_r, C_r, D e tabela de λ")
    constants.add_argument("--rs", type=int, nargs="+", default=[1, 2, 3, 4])
    constants.add_argument("--cutoff", type=int, default=None, help="corte dos produtos de Euler")

    sub.add_parser("lambda", parents=[common], help="cota λ_r certificada")

    optimize = sub.add_parser("optimize", parents=[common], help="busca de P")
    optimize.add_argument("--degree", type=int, default=3)
    optimize.add_argument("--budget", type=int, default=None)
    optimize.add_argument("--seed", type=int, default=None)
    optimize.add_argument("--restarts", type=int, default=None)

    verify = sub.add_parser(
        "verify-paper", aliases=["verify-reference"], parents=[common], help="suíte de aceitação"
    )
    verify.add_argument("--with-lemmas", action="store_true", help="inclui os corredores do laboratório (x = 10⁶)")
    verify.add_argument("--with-optimizer", action="store_true", help="inclui a busca r=2, grau 3")

    lemma = sub.add_parser("lemma-check", parents=[common], help="comparações do laboratório de lemas (CSV)")
    lemma.add_argument("--lemma", required=True, choices=["divpoly", "sel", "sig2", "primes", "mertens", "fmean", "avcj"])
    lemma.add_argument("--x", type=int, nargs="+", default=[10**6])
    lemma.add_argument("--n", type=int, default=1)
    lemma.add_argument("--m", type=int, default=1)
    lemma.add_argument("--w", type=int, default=1)
    lemma.add_argument("--j", type=int, default=0)
    lemma.add_argument("--alpha", type=float, default=0.0)
    lemma.add_argument("--theta", default="0")
    lemma.add_argument("--g", default=None, help="polinômio g, mesmo formato de --poly")
    lemma.add_argument("--lam", type=int, default=1)
    lemma.add_argument("--order", type=int, default=200)
    lemma.add_argument("--exact", action="store_true", help="avcj com soma racional exata (j = 0)")

    ct = sub.add_parser("ct-check", parents=[common], help="consistência de termo constante")
    ct.add_argument("--rs", type=int, nargs="+", default=[1, 2, 3])
    ct.add_argument("--etas", nargs="+", default=["1/2", "1/3", "2/5"])
    ct.add_argument("--polys", nargs="*", default=None)
    ct.add_argument("--random", type=int, default=0, help="quantidade de P racionais aleatórios")
    ct.add_argument("--seed", type=int, default=None)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Executa um subcomando; 0 sucesso, 1 configuração inviável ou verificação falha, 2 uso incorreto"""
    args = build_parser().parse_args(argv)
    run_id = str(uuid.uuid4())
    start = time.time()
    logger.bind(run_id=run_id).info(f"Comando {args.command}")

    try:
        output, code = HANDLERS[args.command](args)
    except GapEngineError as exc:
        log_error(exc, {"command": args.command, **exc.context})
        print(f"erro: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        log_error(exc, {"command": args.command})
        print(f"erro de configuração: {exc}", file=sys.stderr)
        return 2

    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    log_performance(
        f"comando {args.command}",
        time.time() - start,
        {"run_id": run_id, "exit_code": code, **integral_cache.get_stats()},
    )
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
