"""Laboratorio de Localización para Paquetes de Onda.

Este proyecto evoluciona paquetes de onda cuánticos en una dimensión y
verifica numéricamente afirmaciones sobre localización: propagación
instantánea, confinamiento en trampas y cotas de crecimiento de normas.

Características principales:
- Malla periódica con transformada rápida de Fourier
- Propagadores exacto libre, split-operator y Crank-Nicolson
- Clasificación del decaimiento de colas y ajuste de exponentes
- Registro de experimentos E1-E7 con veredictos reproducibles
"""

__version__ = "1.0.0"

# Configuración para documentación OpenAPI
TITLE = "Localization Laboratory"
DESCRIPTION = """
API para ejecutar y validar experimentos numéricos de localización de paquetes de onda
en una dimensión.

## Características

* **Registro de experimentos**: Siete escenarios E1-E7 con su afirmación verificable
* **Validación de configuraciones**: Errores de esquema con la línea del JSON
* **Ejecución**: Series de normas, ajustes de crecimiento y veredictos pass/fail/flagged
* **Reproducibilidad**: La configuración resuelta acompaña a cada resultado
"""

VERSION = __version__

TAGS_METADATA = [
    {
        "name": "experiments",
        "description": "Listado, validación y ejecución de experimentos de localización",
    },
    {
        "name": "health",
        "description": "Endpoints para verificar el estado de la aplicación",
    },
]
