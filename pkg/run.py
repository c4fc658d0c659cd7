#!/usr/bin/env python3
"""
Script de execução dos testes e da suíte de verificação do motor
"""

import subprocess
import sys

COMMANDS = "test, fast, coverage, verify"


def _pytest(*extra: str) -> bool:
    result = subprocess.run([sys.executable, "-m", "pytest", "tests/", "-v", "--tb=short", *extra], cwd=".")
    return result.returncode == 0


def run_tests():
    """Executa todos os testes do projeto (inclusive os marcados como slow)"""
    print("🧪 Executando todos os testes...")
    print("=" * 50)
    ok = _pytest()
    print("✅ Todos os testes passaram com sucesso!" if ok else "❌ Alguns testes falharam!")
    return ok


def run_fast_tests():
    """Executa os testes sem o marcador slow"""
    print("⚡ Executando testes rápidos...")
    print("=" * 50)
    return _pytest("-m", "not slow")


def run_tests_with_coverage():
    """Executa testes com relatório de cobertura"""
    print("📊 Executando testes com cobertura...")
    print("=" * 50)
    import importlib

    try:
        importlib.import_module("pytest_cov")
    except ImportError:
        print("❌ pytest-cov não está instalado!")
        print("💡 Ou execute: python run.py test")
        return False
    ok = _pytest("--cov=app", "--cov-report=term-missing", "--cov-report=html")
    if ok:
        print("📁 Relatório HTML gerado em: htmlcov/index.html")
    return ok


def run_verify():
    """Executa a suíte de aceitação completa pelo CLI"""
    result = subprocess.run(
        [sys.executable, "-m", "app.main", "verify-paper", "--with-lemmas", "--with-optimizer"], cwd="."
    )
    return result.returncode == 0


def main():
    """Função principal"""
    if len(sys.argv) < 2:
        print(f"Uso: python run.py <comando>  (comandos: {COMMANDS})")
        sys.exit(2)

    command = sys.argv[1].lower()
    if command in ["test", "tests", "t"]:
        success = run_tests()
    elif command in ["fast", "f"]:
        success = run_fast_tests()
    elif command in ["coverage", "cov", "c"]:
        success = run_tests_with_coverage()
    elif command in ["verify", "v"]:
        success = run_verify()
    else:
        print(f"❌ Comando desconhecido: {command}")
        print(f"Comandos disponíveis: {COMMANDS}")
        sys.exit(2)
    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
