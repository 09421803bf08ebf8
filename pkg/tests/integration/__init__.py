"""Tests de integración de la línea de comandos."""
