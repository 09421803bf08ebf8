"""
Espectros exactos (Bessel, toro) y oráculo de diferencias finitas.
"""
