"""Módulo Core.

Este módulo contiene toda la lógica numérica y de experimentos
del laboratorio de localización.
"""
