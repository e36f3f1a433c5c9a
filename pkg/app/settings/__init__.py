"""Módulo Settings.
 
Este módulo contiene todas las configuraciones y manejo de variables
de entorno del proyecto.
""" 