"""Settings versión 1.

Este módulo contiene todas las configuraciones de la versión 1.
""" 