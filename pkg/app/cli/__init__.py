"""
Interface de linha de comando do motor
"""
