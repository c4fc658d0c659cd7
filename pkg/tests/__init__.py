"""
Testes da aplicação
""" 