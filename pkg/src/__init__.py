"""
Laboratorio numérico del efecto Aharonov–Bohm en trazas de onda de billares.
"""
__version__ = "1.0.0"
