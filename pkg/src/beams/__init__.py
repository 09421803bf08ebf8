"""
Haces gaussianos, potenciales de campo nulo y fase estacionaria al cierre.
"""
