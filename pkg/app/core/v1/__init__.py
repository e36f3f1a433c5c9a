"""Core versión 1.

Este módulo contiene la lógica numérica de la versión 1: malla, operadores,
potenciales, estados, propagadores, análisis y experimentos.
"""
