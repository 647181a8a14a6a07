"""
Pipeline de réseau adversarial associatif (backend)
"""

__version__ = "1.0.0"
