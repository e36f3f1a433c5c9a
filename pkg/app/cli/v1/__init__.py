"""CLI versión 1.

Este módulo contiene los comandos de la versión 1 de la CLI.
"""
