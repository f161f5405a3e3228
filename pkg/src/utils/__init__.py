# src/utils/__init__.py

from .logger import TxtLogger
