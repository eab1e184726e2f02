"""
diskbench - Numerical workbench for Bergman projections, Beurling transforms
and holomorphic motions on the unit disk.
"""

from .config import ExperimentConfig
from .errors import DiskbenchError
from .models import CheckResult, PowerSeries, RadiiLadder
from .symbols import get_symbol
from .template_manager import TemplateManager
from .transforms import bergman_project

__version__ = '0.1.0'

__all__ = [
    'bergman_project',
    'CheckResult',
    'DiskbenchError',
    'ExperimentConfig',
    'get_symbol',
    'PowerSeries',
    'RadiiLadder',
    'TemplateManager',
]
