"""Tests unitarios."""
