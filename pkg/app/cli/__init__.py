"""Módulo CLI.

Este módulo contiene la interfaz de línea de comandos del laboratorio:
ejecución de experimentos, listado del registro y barridos de parámetros.
"""
