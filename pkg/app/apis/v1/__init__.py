"""APIs versión 1.
 
Este módulo contiene todos los endpoints de la versión 1 de la API.
""" 