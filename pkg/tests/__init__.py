"""Suite de tests del Laboratorio de Localización."""
