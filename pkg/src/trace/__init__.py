"""
Traza de ondas de banda limitada, predicción y ajuste de singularidades.
"""
