"""Suite de tests del laboratorio."""
