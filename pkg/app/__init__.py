"""
Motor numérico certificado para cotas de lacunas entre zeros da zeta - Pacote principal
"""

__version__ = "0.2.0"
